"""Nullspace solver for matrices represented by displacement generators.

A matrix A is handled only through a length-alpha generator (V, W) with
V·W equal to its displacement:

- tag "toeplitz":  A - Z A Z^T   (Z = down-shift)
- tag "hankel":    A - Z A Z

Both operators are nilpotent-invertible, so (V, W) determines A; callers
build generators in O(alpha * size) and this module never materializes A
except in the desk-scale dense fallback / oracle.

The solve itself: flip Hankel structure to Toeplitz (column reversal), pad
to square, pre/post-multiply by random unit-triangular Toeplitz matrices to
force a generic rank profile, then run a Schur-complement elimination that
only touches generators (each trailing submatrix of the preconditioned
matrix is again Toeplitz-like of displacement rank <= alpha + 2, compressed
back after every step).  A completed elimination certifies the exact rank;
the recorded pivot rows give the nullspace by back-substitution with
randomly drawn free coordinates.  Every candidate is verified by applying A
through the generator, so a returned Solution is unconditionally correct;
NoSolution is returned only on a certified full-column-rank elimination.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .errors import FieldTooSmall, TooLarge, WrongTag, ZeroInput
from .field import FieldCtx, sample_subset_element
from .linalg import kernel_basis
from .outcomes import Failure, NoSolution, Solution

TAG_TOEPLITZ = "toeplitz"
TAG_HANKEL = "hankel"

_DENSE_GUARD_CELLS = 1 << 14
_INT64_SAFE = 2**62


def subset_floor(size: int) -> int:
    """Sampling-set size that keeps one solve attempt succeeding w.p. >= 1/2."""
    return 6 * (size + 1) * (size + 1)


@dataclass(frozen=True)
class GeneratorPair:
    tag: str
    nrows: int
    ncols: int
    v_cols: tuple  # alpha columns of V, each nrows long
    w_rows: tuple  # alpha rows of W, each ncols long
    ctx: FieldCtx

    def __post_init__(self):
        if self.tag not in (TAG_TOEPLITZ, TAG_HANKEL):
            raise WrongTag(f"unknown tag {self.tag!r}")
        if len(self.v_cols) != len(self.w_rows):
            raise WrongTag("generator halves of different lengths")
        object.__setattr__(self, "v_cols", tuple(tuple(c) for c in self.v_cols))
        object.__setattr__(self, "w_rows", tuple(tuple(r) for r in self.w_rows))
        for c in self.v_cols:
            if len(c) != self.nrows:
                raise WrongTag("generator column of wrong height")
        for r in self.w_rows:
            if len(r) != self.ncols:
                raise WrongTag("generator row of wrong width")

    @property
    def alpha(self) -> int:
        return len(self.v_cols)


PadInfo = namedtuple("PadInfo", "kind offset")


# ---------------------------------------------------------------- dense views


def reconstruct_dense(G: GeneratorPair):
    """The unique matrix with the given displacement, as FieldElement rows."""
    M, N = G.nrows, G.ncols
    if M * N > _DENSE_GUARD_CELLS:
        raise TooLarge(f"{M}x{N} exceeds the dense reconstruction guard")
    ctx = G.ctx
    z = ctx.zero()
    D = [[z] * N for _ in range(M)]
    for col, row in zip(G.v_cols, G.w_rows):
        for i, vi in enumerate(col):
            if not vi.is_zero():
                Di = D[i]
                for j, wj in enumerate(row):
                    Di[j] = Di[j] + vi * wj
    A = [list(r) for r in D]
    cur = D
    for _ in range(1, min(M, N)):
        if G.tag == TAG_TOEPLITZ:
            nxt = [[z] * N] + [[z] + r[:-1] for r in cur[:-1]]
        else:
            nxt = [[z] * N] + [r[1:] + [z] for r in cur[:-1]]
        if not any(any(not e.is_zero() for e in r) for r in nxt):
            break
        for i in range(M):
            Ai, Ni = A[i], nxt[i]
            for j in range(N):
                Ai[j] = Ai[j] + Ni[j]
        cur = nxt
    return A


def displacement_of_dense(tag: str, rows, ctx: FieldCtx):
    """A - Z A Z^T (toeplitz) or A - Z A Z (hankel) of a dense matrix."""
    M = len(rows)
    N = len(rows[0]) if rows else 0
    z = ctx.zero()
    out = []
    for i in range(M):
        line = []
        for j in range(N):
            if i == 0:
                line.append(rows[i][j])
            elif tag == TAG_TOEPLITZ:
                line.append(rows[i][j] - (rows[i - 1][j - 1] if j >= 1 else z))
            else:
                line.append(rows[i][j] - (rows[i - 1][j + 1] if j + 1 < N else z))
        out.append(line)
    return out


def generator_product(G: GeneratorPair):
    """V·W as dense FieldElement rows (the displacement the generator claims)."""
    z = G.ctx.zero()
    out = [[z] * G.ncols for _ in range(G.nrows)]
    for col, row in zip(G.v_cols, G.w_rows):
        for i, vi in enumerate(col):
            if not vi.is_zero():
                oi = out[i]
                for j, wj in enumerate(row):
                    oi[j] = oi[j] + vi * wj
    return out


# ---------------------------------------------------------------- conversions


def hankel_to_toeplitz(G: GeneratorPair) -> GeneratorPair:
    """Generator of A·J (columns reversed) — turns Hankel-like into
    Toeplitz-like.  A nullspace vector v of A·J pulls back as J·v."""
    if G.tag != TAG_HANKEL:
        raise WrongTag("expected a hankel-tagged generator")
    return GeneratorPair(
        TAG_TOEPLITZ,
        G.nrows,
        G.ncols,
        G.v_cols,
        tuple(tuple(reversed(r)) for r in G.w_rows),
        G.ctx,
    )


def pad_to_square(G: GeneratorPair):
    """Zero rows on top (wide) or zero columns on the left (tall); the
    padded matrix's displacement generator needs the same padding only."""
    if G.tag != TAG_TOEPLITZ:
        raise WrongTag("expected a toeplitz-tagged generator")
    M, N = G.nrows, G.ncols
    if M == N:
        return G, PadInfo("square", 0)
    z = G.ctx.zero()
    if M < N:
        k = N - M
        padded = GeneratorPair(
            TAG_TOEPLITZ,
            N,
            N,
            tuple((z,) * k + c for c in G.v_cols),
            G.w_rows,
            G.ctx,
        )
        return padded, PadInfo("wide", k)
    k = M - N
    padded = GeneratorPair(
        TAG_TOEPLITZ,
        M,
        M,
        G.v_cols,
        tuple((z,) * k + r for r in G.w_rows),
        G.ctx,
    )
    return padded, PadInfo("tall", k)


def unpad_solution(info: PadInfo, vec):
    if info.kind == "tall":
        return vec[info.offset :]
    return vec


# ---------------------------------------------------------------- arithmetic kernels

# The elimination is written once against a tiny vector-ops protocol with two
# implementations: int64 numpy (prime field, modulus small enough that dot
# products of length P cannot overflow) and plain FieldElement lists.


class _NumpyOps:
    scalar_zero = 0
    scalar_one = 1

    def __init__(self, ctx, min_size):
        self.ctx = ctx
        self.p = ctx.p
        self.min_size = min_size

    def vec(self, elems):
        return np.array([e.c[0] for e in elems], dtype=np.int64)

    def elems(self, v):
        return [self.ctx.el(int(x)) for x in v]

    def zeros(self, n):
        return np.zeros(n, dtype=np.int64)

    def unit(self, n, i):
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        return v

    def copy(self, v):
        return v.copy()

    def tail(self, v, k):
        return v[k:].copy()

    def head(self, v, k):
        return v[:k].copy()

    def get(self, v, i):
        return int(v[i])

    def put(self, v, i, s):
        v[i] = s

    def is_zero_vec(self, v):
        return not v.any()

    def first_nonzero(self, v):
        nz = np.nonzero(v)[0]
        return int(nz[0]) if nz.size else None

    def dot(self, x, y):
        return int(x @ y) % self.p

    def add_scaled(self, x, s, y):
        return (x + s * y) % self.p

    def sub_scaled(self, x, s, y):
        return (x - s * y) % self.p

    def scale(self, x, s):
        return x * s % self.p

    def neg(self, x):
        return (-x) % self.p

    def shift1(self, x):
        out = np.empty_like(x)
        out[0] = 0
        out[1:] = x[:-1]
        return out

    def corr(self, a, b):
        # out[t] = sum_u a[t+u] * b[u], t < len(a)
        full = np.convolve(a, b[::-1])
        return full[len(b) - 1 : len(b) - 1 + len(a)] % self.p

    def conv_trunc(self, a, b, n):
        full = np.convolve(a, b)[:n] % self.p
        if full.shape[0] < n:
            full = np.concatenate([full, np.zeros(n - full.shape[0], dtype=np.int64)])
        return full

    def s_inv(self, s):
        return pow(int(s), -1, self.p)

    def s_mul(self, a, b):
        return a * b % self.p

    def s_neg(self, a):
        return (-a) % self.p

    def s_is_zero(self, a):
        return a == 0

    def sample(self, rng):
        return sample_subset_element(self.ctx, self.min_size, rng).c[0]


class _ObjectOps:
    def __init__(self, ctx, min_size):
        self.ctx = ctx
        self.min_size = min_size
        self.scalar_zero = ctx.zero()
        self.scalar_one = ctx.one()

    def vec(self, elems):
        return list(elems)

    def elems(self, v):
        return list(v)

    def zeros(self, n):
        return [self.ctx.zero()] * n

    def unit(self, n, i):
        v = [self.ctx.zero()] * n
        v[i] = self.ctx.one()
        return v

    def copy(self, v):
        return list(v)

    def tail(self, v, k):
        return v[k:]

    def head(self, v, k):
        return v[:k]

    def get(self, v, i):
        return v[i]

    def put(self, v, i, s):
        v[i] = s

    def is_zero_vec(self, v):
        return all(e.is_zero() for e in v)

    def first_nonzero(self, v):
        for i, e in enumerate(v):
            if not e.is_zero():
                return i
        return None

    def dot(self, x, y):
        acc = self.ctx.zero()
        for a, b in zip(x, y):
            if not (a.is_zero() or b.is_zero()):
                acc = acc + a * b
        return acc

    def add_scaled(self, x, s, y):
        return [a + s * b for a, b in zip(x, y)]

    def sub_scaled(self, x, s, y):
        return [a - s * b for a, b in zip(x, y)]

    def scale(self, x, s):
        return [a * s for a in x]

    def neg(self, x):
        return [-a for a in x]

    def shift1(self, x):
        return [self.ctx.zero()] + x[:-1]

    def corr(self, a, b):
        out = []
        la, lb = len(a), len(b)
        for t in range(la):
            acc = self.ctx.zero()
            for u in range(min(lb, la - t)):
                if not b[u].is_zero():
                    acc = acc + a[t + u] * b[u]
            out.append(acc)
        return out

    def conv_trunc(self, a, b, n):
        z = self.ctx.zero()
        out = [z] * n
        for i, ai in enumerate(a):
            if ai.is_zero() or i >= n:
                continue
            for j, bj in enumerate(b):
                if i + j >= n:
                    break
                if not bj.is_zero():
                    out[i + j] = out[i + j] + ai * bj
        return out

    def s_inv(self, s):
        return s.inv()

    def s_mul(self, a, b):
        return a * b

    def s_neg(self, a):
        return -a

    def s_is_zero(self, a):
        return a.is_zero()

    def sample(self, rng):
        return sample_subset_element(self.ctx, self.min_size, rng)


def _pick_ops(ctx, size, min_size, force_object):
    if force_object or ctx.d != 1:
        return _ObjectOps(ctx, min_size)
    if (ctx.p - 1) * (ctx.p - 1) * (size + 1) >= _INT64_SAFE:
        return _ObjectOps(ctx, min_size)
    return _NumpyOps(ctx, min_size)


# ---------------------------------------------------------------- generator algebra


def _apply(ops, v_cols, w_rows, x, nrows):
    """A·x through a toeplitz-tagged generator: sum_c L(v_c) U(w_c) x."""
    out = ops.zeros(nrows)
    for col, row in zip(v_cols, w_rows):
        y = ops.corr(x, row)  # y[k] = sum_u w[u] x[k+u]
        out = ops.add_scaled(out, ops.scalar_one, ops.conv_trunc(col, y, nrows))
    return out


def apply_generator(G: GeneratorPair, elems):
    """A·x from a generator of either tag (FieldElement vectors in and out)."""
    if len(elems) != G.ncols:
        raise ZeroInput(f"vector of length {len(elems)} for {G.ncols} columns")
    ops = _pick_ops(G.ctx, max(G.nrows, G.ncols), 0, False)
    x = ops.vec(elems)
    out = ops.zeros(G.nrows)
    for col_e, row_e in zip(G.v_cols, G.w_rows):
        col, row = ops.vec(col_e), ops.vec(row_e)
        if G.tag == TAG_TOEPLITZ:
            y = ops.corr(x, row)
        else:
            y = ops.corr(row, x)  # y[t] = sum_u w[t+u] x[u]
        out = ops.add_scaled(out, ops.scalar_one, ops.conv_trunc(col, y, G.nrows))
    return ops.elems(out)


def _compress(ops, v_cols, w_rows):
    """Shrink a generator to exact length rank(V·W), preserving the product."""
    kept_v, kept_w, piv_rows = [], [], []
    for col, row in zip(v_cols, w_rows):
        col = ops.copy(col)
        row = ops.copy(row)
        for i, pr in enumerate(piv_rows):
            coef = ops.get(col, pr)
            if not ops.s_is_zero(coef):
                col = ops.sub_scaled(col, coef, kept_v[i])
                kept_w[i] = ops.add_scaled(kept_w[i], coef, row)
        pr = ops.first_nonzero(col)
        if pr is None:
            continue
        s = ops.get(col, pr)
        kept_v.append(ops.scale(col, ops.s_inv(s)))
        kept_w.append(ops.scale(row, s))
        piv_rows.append(pr)
    final_v, final_w, piv_cols = [], [], []
    for col, row in zip(kept_v, kept_w):
        for i, pc in enumerate(piv_cols):
            coef = ops.get(row, pc)
            if not ops.s_is_zero(coef):
                row = ops.sub_scaled(row, coef, final_w[i])
                final_v[i] = ops.add_scaled(final_v[i], coef, col)
        pc = ops.first_nonzero(row)
        if pc is None:
            continue
        s = ops.get(row, pc)
        final_w.append(ops.scale(row, ops.s_inv(s)))
        final_v.append(ops.scale(col, s))
        piv_cols.append(pc)
    return final_v, final_w


class _PivotBreakdown(Exception):
    """Leading entry of a nonzero Schur complement vanished (bad luck)."""


def _precondition(ops, v_cols, w_rows, size, u_coefs, l_coefs):
    """Generator of U·A·L for unit-triangular Toeplitz U (upper, first row
    1,u_1,..) and L (lower, first column 1,l_1,..): width grows by 4."""
    u_full = ops.zeros(size)
    ops.put(u_full, 0, ops.scalar_one)
    l_full = ops.zeros(size)
    ops.put(l_full, 0, ops.scalar_one)
    a_vec = ops.zeros(size)
    b_vec = ops.zeros(size)
    c_vec = ops.zeros(size)
    f_vec = ops.zeros(size)
    for k in range(1, size):
        ops.put(u_full, k, u_coefs[k - 1])
        ops.put(l_full, k, l_coefs[k - 1])
        ops.put(a_vec, k - 1, u_coefs[k - 1])
        ops.put(b_vec, size - k, u_coefs[k - 1])
        ops.put(c_vec, k - 1, l_coefs[k - 1])
        ops.put(f_vec, size - k, l_coefs[k - 1])

    def U_apply(x):
        return ops.corr(x, u_full)

    def L_row(w):
        return ops.corr(w, l_full)

    new_v = [U_apply(c) for c in v_cols]
    new_w = [L_row(r) for r in w_rows]

    Ac = _apply(ops, v_cols, w_rows, c_vec, size)
    new_v.append(U_apply(ops.shift1(Ac)))
    new_w.append(ops.unit(size, 0))

    Ae = _apply(ops, v_cols, w_rows, ops.unit(size, size - 1), size)
    new_v.append(ops.neg(U_apply(ops.shift1(Ae))))
    new_w.append(f_vec)

    # transpose applies: generator of A^T is (rows as columns, columns as rows)
    atA = _apply(ops, w_rows, v_cols, a_vec, size)
    new_v.append(ops.unit(size, 0))
    new_w.append(ops.shift1(L_row(atA)))

    eA = _apply(ops, w_rows, v_cols, ops.unit(size, size - 1), size)
    new_v.append(ops.neg(b_vec))
    new_w.append(ops.shift1(L_row(eA)))
    return new_v, new_w


def _eliminate(ops, v_cols, w_rows, size):
    """Generator-based Schur elimination under a generic rank profile.

    Returns (rank, pivot_rows) where pivot_rows[t] is the normalized row t
    of the elimination (support starting at global column t).  Raises
    _PivotBreakdown when the rank profile is not generic.
    """
    pivot_rows = []
    for t in range(size):
        v_cols, w_rows = _compress(ops, v_cols, w_rows)
        if not v_cols:
            return len(pivot_rows), pivot_rows
        row0 = None
        col0 = None
        for col, row in zip(v_cols, w_rows):
            cv = ops.get(col, 0)
            rv = ops.get(row, 0)
            row0 = ops.scale(row, cv) if row0 is None else ops.add_scaled(row0, cv, row)
            col0 = ops.scale(col, rv) if col0 is None else ops.add_scaled(col0, rv, col)
        d = ops.get(row0, 0)
        if ops.s_is_zero(d):
            raise _PivotBreakdown()
        norm = ops.scale(row0, ops.s_inv(d))
        pivot_rows.append(norm)
        if len(row0) == 1:
            return len(pivot_rows), pivot_rows
        next_v = [ops.tail(c, 1) for c in v_cols]
        next_w = [ops.tail(r, 1) for r in w_rows]
        next_v.append(ops.neg(ops.tail(col0, 1)))
        next_w.append(ops.tail(norm, 1))
        next_v.append(ops.head(col0, len(col0) - 1))
        next_w.append(ops.head(norm, len(norm) - 1))
        v_cols, w_rows = next_v, next_w
    return len(pivot_rows), pivot_rows


def _back_substitute(ops, pivot_rows, size, rng):
    """Random element of the nullspace of the staircase system."""
    rank = len(pivot_rows)
    x = ops.zeros(size)
    for i in range(rank, size):
        ops.put(x, i, ops.sample(rng))
    for t in range(rank - 1, -1, -1):
        row = pivot_rows[t]  # length size - t, row[0] == 1
        s = ops.dot(ops.tail(row, 1), ops.tail(x, t + 1))
        ops.put(x, t, ops.s_neg(s))
    return x


# ---------------------------------------------------------------- entry point


def nullspace_structured(
    G: GeneratorPair,
    rng,
    max_retries: int = 8,
    *,
    dense_threshold: int = 16,
    force_object: bool = False,
    subset_size: int = None,
):
    """Nonzero right-nullspace element of the represented matrix, or a
    certified NoSolution, or Failure after max_retries attempts.

    Needs a toeplitz-tagged generator (flip Hankel structure first).  At or
    below dense_threshold the matrix is reconstructed and solved exactly;
    above it, sampling requires |field| >= subset_floor(padded size), else
    FieldTooSmall (callers may extend the field and project back).
    """
    if G.tag != TAG_TOEPLITZ:
        raise WrongTag("nullspace_structured expects a toeplitz-tagged generator")
    ctx = G.ctx
    n_orig = G.ncols
    if max(G.nrows, G.ncols) <= dense_threshold:
        dense = reconstruct_dense(G)
        basis = kernel_basis(ctx, dense, n_orig)
        if not basis:
            return NoSolution("dense rank equals the unknown count")
        return Solution(basis[0])

    padded, pad = pad_to_square(G)
    size = padded.nrows
    min_size = subset_floor(size) if subset_size is None else subset_size
    if ctx.order < min_size:
        raise FieldTooSmall(
            f"need a sampling set of {min_size} elements, field has {ctx.order}"
        )
    ops = _pick_ops(ctx, size, min_size, force_object)
    base_v = [ops.vec(c) for c in padded.v_cols]
    base_w = [ops.vec(r) for r in padded.w_rows]
    base_v, base_w = _compress(ops, base_v, base_w)

    orig_v = [ops.vec(c) for c in G.v_cols]
    orig_w = [ops.vec(r) for r in G.w_rows]

    attempts = 0
    while attempts < max_retries:
        attempts += 1
        u_coefs = [ops.sample(rng) for _ in range(size - 1)]
        l_coefs = [ops.sample(rng) for _ in range(size - 1)]
        pre_v, pre_w = _precondition(ops, base_v, base_w, size, u_coefs, l_coefs)
        try:
            rank, pivot_rows = _eliminate(ops, pre_v, pre_w, size)
        except _PivotBreakdown:
            continue
        if rank == n_orig:
            return NoSolution("certified rank equals the unknown count")
        x = _back_substitute(ops, pivot_rows, size, rng)
        l_full = ops.zeros(size)
        ops.put(l_full, 0, ops.scalar_one)
        for k in range(1, size):
            ops.put(l_full, k, l_coefs[k - 1])
        y = ops.conv_trunc(l_full, x, size)  # L·x
        vec = unpad_solution(pad, ops.elems(y))
        arr = ops.vec(vec)
        if ops.is_zero_vec(arr):
            continue
        if not ops.is_zero_vec(_apply(ops, orig_v, orig_w, arr, G.nrows)):
            continue  # never on a correct run; belt and braces
        return Solution(vec)
    return Failure(attempts)

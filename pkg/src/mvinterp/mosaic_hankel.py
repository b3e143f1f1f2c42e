"""Mosaic-Hankel linearization of a simultaneous approximation instance.

Row block i of the instance contributes deg(P_i) linear conditions saying
that sum_j (F_{i,j}/P_i) * q_j has no negative part in its expansion at
infinity.  Writing s^{i,j} for the power-series coefficients of
rev(F)/rev(P) — exactly the Markov parameters of F/P — the conditions are

    sum_j sum_v s^{i,j}_{u+v} * q_{j,v} = 0     for u < deg(P_i),

so the matrix acting on the plainly concatenated coefficient vector is a
mosaic of Hankel blocks [s_{u+v}].  Its displacement A - Z A Z has rank at
most mu+nu with an explicit generator read off the series sections, which
is what the structured solver consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .approx import ApproxInstance
from .backend import solve_with_builder
from .errors import TooLarge
from .poly import Poly, reverse, series_inv, trunc
from .struct_solve import TAG_HANKEL, GeneratorPair

_DENSE_GUARD_CELLS = 1 << 20


@dataclass(frozen=True)
class EkeLayout:
    """Index bookkeeping for the reversed-series view of an instance."""

    beta: int  # max column bound
    deltas: tuple  # per row block: series precision deg(P_i) + beta - 1
    gammas: tuple  # per column: beta - N'_j leading zeros in the shifted series
    row_offsets: tuple  # first matrix row of each block
    col_offsets: tuple  # last matrix column of each block


def layout_for(a: ApproxInstance) -> EkeLayout:
    beta = max(a.col_bounds)
    deltas = tuple(m + beta - 1 for m in a.row_bounds)
    gammas = tuple(beta - n for n in a.col_bounds)
    row_offsets = []
    acc = 0
    for m in a.row_bounds:
        row_offsets.append(acc)
        acc += m
    col_offsets = []
    acc = 0
    for n in a.col_bounds:
        acc += n
        col_offsets.append(acc - 1)
    return EkeLayout(beta, deltas, tuple(gammas), tuple(row_offsets), tuple(col_offsets))


def compute_s_star(a: ApproxInstance):
    """Per block (i,j): the series rev(F_{i,j})/rev(P_i) truncated to
    deg(P_i) + N'_j - 1 terms (all the entries the Hankel block needs)."""
    layout = layout_for(a)
    out = []
    for i, p in enumerate(a.moduli):
        m = p.deg
        p_rev = reverse(p, m)
        inv = series_inv(p_rev, layout.deltas[i])
        row = []
        for j, f in enumerate(a.residues[i]):
            f_rev = reverse(f, m - 1)
            row.append(trunc(f_rev * inv, m + a.col_bounds[j] - 1))
        out.append(tuple(row))
    return tuple(out)


def dense_build_A(a: ApproxInstance):
    """The mosaic-Hankel matrix itself (oracle / small-instance use)."""
    M, N = a.total_rows, a.total_cols
    if M * N > _DENSE_GUARD_CELLS:
        raise TooLarge(f"{M}x{N} dense mosaic exceeds the guard")
    s_star = compute_s_star(a)
    layout = layout_for(a)
    col_starts = [c - n + 1 for c, n in zip(layout.col_offsets, a.col_bounds)]
    rows = [[a.ctx.zero()] * N for _ in range(M)]
    for i, mi in enumerate(a.row_bounds):
        r0 = layout.row_offsets[i]
        for j, nj in enumerate(a.col_bounds):
            c0 = col_starts[j]
            s = s_star[i][j]
            for u in range(mi):
                row = rows[r0 + u]
                for v in range(nj):
                    row[c0 + v] = s.coeff(u + v)
    return rows


def build_hankel_generators(a: ApproxInstance):
    """Length-(mu+nu) generator with V·W = A - Z A Z, plus the layout.

    The displacement is supported on the first row of every row block and
    the last column of every column block; everything else telescopes away
    along the Hankel antidiagonals.
    """
    ctx = a.ctx
    z = ctx.zero()
    s_star = compute_s_star(a)
    layout = layout_for(a)
    M, N = a.total_rows, a.total_cols
    mu, nu = a.mu, a.nu
    col_starts = [c - n + 1 for c, n in zip(layout.col_offsets, a.col_bounds)]

    v_cols = []
    w_rows = []
    # one pair per column block: the last-column profile against a unit row
    for j in range(nu):
        nj = a.col_bounds[j]
        col = [z] * M
        for i, mi in enumerate(a.row_bounds):
            r0 = layout.row_offsets[i]
            for u in range(1, mi):
                val = s_star[i][j].coeff(u + nj - 1)
                if j + 1 < nu:
                    val = val - s_star[i][j + 1].coeff(u - 1)
                col[r0 + u] = val
        row = [z] * N
        row[layout.col_offsets[j]] = ctx.one()
        v_cols.append(tuple(col))
        w_rows.append(tuple(row))
    # one pair per row block: a unit column against the first-row profile
    for i in range(mu):
        mi_prev = a.row_bounds[i - 1] if i > 0 else 0
        col = [z] * M
        col[layout.row_offsets[i]] = ctx.one()
        row = [z] * N
        for j, nj in enumerate(a.col_bounds):
            c0 = col_starts[j]
            for v in range(nj - 1):
                val = s_star[i][j].coeff(v)
                if i > 0:
                    val = val - s_star[i - 1][j].coeff(mi_prev + v)
                row[c0 + v] = val
            val = s_star[i][j].coeff(nj - 1)
            if i > 0 and j + 1 < nu:
                val = val - s_star[i - 1][j + 1].coeff(mi_prev - 1)
            row[c0 + nj - 1] = val
        v_cols.append(tuple(col))
        w_rows.append(tuple(row))
    G = GeneratorPair(TAG_HANKEL, M, N, tuple(v_cols), tuple(w_rows), ctx)
    return G, layout


def solve_via_hankel(a: ApproxInstance, rng, max_retries: int = 8, **kw):
    """Solve an instance through the mosaic-Hankel route (Las Vegas).

    FieldTooSmall propagates; callers may lift to an extension field.
    """
    return solve_with_builder(
        a, rng, lambda t: build_hankel_generators(t)[0], max_retries=max_retries, **kw
    )

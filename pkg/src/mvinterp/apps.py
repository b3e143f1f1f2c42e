"""End-to-end interpolation pipelines.

Every pipeline follows the same arc: validate its parameter assumptions,
reduce the interpolation problem to a simultaneous approximation instance,
hand that to a backend (structured hankel / toeplitz route or the dense
baseline), and re-verify the assembled multivariate answer against the
original points before returning it.  When the base field is too small for
the probabilistic solver's sampling set the instance is lifted to a just
big enough extension and the solution projected back coefficient-wise.

The decoding-flavoured pipelines (gs / reencode / wu) are univariate in Y
(one weight k); the bare `interpolate_instance` engine and the soft-decoding
grouping accept anything `build_reduction` accepts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .approx import (
    ApproxInstance,
    lift_instance,
    pack_solution,
    trim_instance,
    unpack_solution,
    verify_approx,
)
from .errors import (
    AssumptionViolated,
    Degenerate,
    FieldTooSmall,
    MvInterpError,
    NoSolutionSpace,
    PreconditionViolated,
)
from .field import FieldCtx, build_extension, project_solution_to_base
from .mosaic_hankel import solve_via_hankel
from .outcomes import NoSolution, NotApplicable, Solution
from .poly import Poly, lagrange_interp, poly_divrem, poly_mod, weighted_product
from .reduction import (
    InterpolationInstance,
    MultiPoly,
    assemble_Q,
    binom_mod,
    build_reduction,
    preprocess_high_multiplicity,
    trivial_weight_check,
    verify_solution,
)
from .struct_solve import subset_floor
from .toeplitz_like import solve_via_dense, solve_via_toeplitz

BACKENDS = {
    "hankel": solve_via_hankel,
    "toeplitz": solve_via_toeplitz,
    "dense": lambda a, rng, max_retries, **kw: solve_via_dense(a),
}


def solve_approx(
    a: ApproxInstance,
    rng,
    backend: str = "hankel",
    *,
    max_retries: int = 8,
    allow_extension: bool = True,
    **kw,
):
    """Backend dispatch plus the extend-then-project fallback for fields too
    small to carry the solver's sampling set."""
    try:
        solver = BACKENDS[backend]
    except KeyError:
        raise Degenerate(f"unknown backend {backend!r}") from None
    try:
        return solver(a, rng, max_retries, **kw)
    except FieldTooSmall:
        if not allow_extension or a.ctx.d != 1:
            raise
        trimmed, _, _ = trim_instance(a)
        need = subset_floor(max(trimmed.total_rows, trimmed.total_cols))
        d, order = 1, a.ctx.p
        while order < need:
            order *= a.ctx.p
            d += 1
        ext = build_extension(a.ctx, d, rng)
        out = solver(lift_instance(a, ext), rng, max_retries, **kw)
        if not isinstance(out, Solution):
            return out
        base_vec = project_solution_to_base(pack_solution(out.value, a.col_bounds), a.ctx)
        qs = unpack_solution(a.ctx, base_vec, a.col_bounds)
        if not verify_approx(a, qs):
            raise MvInterpError("internal error: projected solution failed verification")
        return Solution(qs)


def interpolate_instance(inst: InterpolationInstance, rng, backend: str = "hankel", **kw):
    """Bare engine: degenerate-weight shortcut, multiplicity capping, reduce,
    solve, assemble, verify."""
    short = trivial_weight_check(inst)
    if not isinstance(short, NotApplicable):
        if isinstance(short, Solution) and not verify_solution(inst, short.value):
            raise MvInterpError("internal error: shortcut solution failed verification")
        return short
    capped, multiplier = preprocess_high_multiplicity(inst)
    try:
        plan, a = build_reduction(capped)
    except NoSolutionSpace as exc:
        return NoSolution(f"NoSolutionSpace: {exc}")
    out = solve_approx(a, rng, backend, **kw)
    if not isinstance(out, Solution):
        return out
    Q = assemble_Q(plan, out.value)
    if multiplier.deg > 0:
        Q = Q.mul_univariate(multiplier)
    if not verify_solution(inst, Q):
        raise MvInterpError("internal error: assembled solution failed verification")
    return Solution(Q)


# --------------------------------------------------------------- GS pipeline


@dataclass(frozen=True)
class GsParams:
    """List-decoding shaped interpolation input: points (x_r, y_r) to be hit
    with uniform multiplicity m by some Q with ydeg <= ell and
    deg Q_j + j*k < b."""

    ctx: FieldCtx
    k: int
    m: int
    ell: int
    b: int
    points: tuple  # ((x, y), ...) FieldElement pairs

    @property
    def n(self) -> int:
        return len(self.points)


def _gs_instance(p: GsParams) -> InterpolationInstance:
    return InterpolationInstance(
        p.ctx,
        nvars=1,
        ydeg_bound=p.ell,
        wdeg_bound=p.b,
        weights=(p.k,),
        points=tuple((x, (y,)) for x, y in p.points),
        mults=(p.m,) * p.n,
    )


def check_assumptions(p: GsParams):
    """The violated assumption tags, in checking order (empty when clean).

    H1 (m <= ell) is reported but auto-fixable; H3's k >= n side is handled
    by the degenerate-weight shortcut, so only k < 0 is a hard violation.
    """
    bad = []
    if p.m < 1 or p.n == 0:
        bad.append("H4")
    if not (p.b > 0 and p.b > p.ell * p.k):
        bad.append("H2")
    if p.k < 0:
        bad.append("H3")
    if p.m > p.ell:
        bad.append("H1")
    return bad


def gs_interpolate(p: GsParams, rng, backend: str = "hankel", **kw):
    """Uniform-multiplicity interpolation with assumption validation."""
    bad = set(check_assumptions(p))
    for tag in ("H4", "H2", "H3"):
        if tag in bad:
            raise AssumptionViolated(tag)
    # H1 violations are repaired inside the engine by multiplicity capping
    return interpolate_instance(_gs_instance(p), rng, backend, **kw)


# ------------------------------------------------------- re-encoding pipeline


@dataclass(frozen=True)
class ReencodePlan:
    """All the shared structure of a re-encoded instance.

    raw_bounds keeps every unknown's degree budget b - j*k - n_0*(m-j)^+
    before nonpositive ones are dropped; kept maps the approx instance's
    columns back to Y-exponents.
    """

    g0: Poly
    raw_bounds: tuple
    kept: tuple
    approx: ApproxInstance  # None when every unknown was dropped or no rows remain
    free_rows: bool  # True when there are no nonzero-y points (no conditions)


def reencode_build(p: GsParams, n0: int) -> ReencodePlan:
    ctx = p.ctx
    xs0 = [x for x, _ in p.points[:n0]]
    tail = p.points[n0:]
    g0 = weighted_product(ctx, xs0, [1] * len(xs0))
    raw_bounds = tuple(
        p.b - j * p.k - (n0 * (p.m - j) if j < p.m else 0) for j in range(p.ell + 1)
    )
    kept = tuple(j for j, bnd in enumerate(raw_bounds) if bnd >= 1)
    if not kept or not tail:
        return ReencodePlan(g0, raw_bounds, kept, None, not tail)
    xs1 = [x for x, _ in tail]
    G = weighted_product(ctx, xs1, [1] * len(xs1))
    R = lagrange_interp(ctx, xs1, [y for _, y in tail])
    moduli = []
    residues = []
    for i in range(p.m):
        p_i = G ** (p.m - i)
        moduli.append(p_i)
        rpow = Poly.one(ctx)
        row = {}
        for j in range(i, p.ell + 1):
            f = rpow.scale(binom_mod(ctx, j, i))
            if j < p.m:
                f = f * g0 ** (p.m - j)
            row[j] = poly_mod(f, p_i)
            rpow = poly_mod(rpow * R, p_i)
        residues.append(
            tuple(row.get(j, Poly.zero(ctx)) for j in kept)
        )
    approx = ApproxInstance(ctx, moduli, residues, tuple(raw_bounds[j] for j in kept))
    return ReencodePlan(g0, raw_bounds, kept, approx, False)


def reencode_interpolate(p: GsParams, n0: int, rng, backend: str = "hankel", **kw):
    """Interpolation with the zero-valued prefix pre-solved as divisibility
    by powers of the prefix vanishing polynomial."""
    if not 0 < n0 <= p.n:
        raise PreconditionViolated(f"n_0 = {n0} must lie in 1..{p.n}")
    if n0 < p.k + 1:
        raise PreconditionViolated(f"n_0 = {n0} is below k+1 = {p.k + 1}")
    for x, y in p.points[:n0]:
        if not y.is_zero():
            raise PreconditionViolated("the first n_0 points must have y = 0")
    for x, y in p.points[n0:]:
        if y.is_zero():
            raise PreconditionViolated("points beyond n_0 must have y != 0")
    bad = check_assumptions(p)
    if bad:
        raise AssumptionViolated(bad[0])

    plan = reencode_build(p, n0)
    ctx = p.ctx
    if plan.approx is None:
        if not plan.kept:
            return NoSolution("every unknown's degree budget is exhausted")
        # no conditions: any admissible single unknown works
        qs_star = [Poly.zero(ctx)] * (p.ell + 1)
        qs_star[plan.kept[0]] = Poly.one(ctx)
    else:
        out = solve_approx(plan.approx, rng, backend, **kw)
        if not isinstance(out, Solution):
            return out
        qs_star = [Poly.zero(ctx)] * (p.ell + 1)
        for j, q in zip(plan.kept, out.value):
            qs_star[j] = q
    terms = {}
    for j, q in enumerate(qs_star):
        if q.is_zero():
            continue
        terms[(j,)] = q * plan.g0 ** (p.m - j) if j < p.m else q
    Q = MultiPoly(ctx, 1, terms)
    if not verify_solution(_gs_instance(p), Q):
        raise MvInterpError("internal error: re-encoded solution failed verification")
    return Solution(Q)


# --------------------------------------------------------------- Wu pipeline


@dataclass(frozen=True)
class ExtPoint:
    """A point whose y-coordinate may be the projective infinity (y=None)."""

    x: object
    y: object = None

    @property
    def is_infinite(self) -> bool:
        return self.y is None


@dataclass(frozen=True)
class WuPlan:
    g_inf: Poly
    raw_bounds: tuple
    kept: tuple
    approx: ApproxInstance
    free_rows: bool


def wu_build(points, p: GsParams) -> WuPlan:
    ctx = p.ctx
    finite = [(pt.x, pt.y) for pt in points if not pt.is_infinite]
    inf_xs = [pt.x for pt in points if pt.is_infinite]
    n_inf = len(inf_xs)
    g_inf = weighted_product(ctx, inf_xs, [1] * n_inf)
    low = p.ell - p.m  # unknowns with t <= low carry no infinity factor
    raw_bounds = tuple(
        p.b - t * p.k - (0 if t <= low else (p.m - p.ell + t) * n_inf)
        for t in range(p.ell + 1)
    )
    kept = tuple(t for t, bnd in enumerate(raw_bounds) if bnd >= 1)
    if not kept or not finite:
        return WuPlan(g_inf, raw_bounds, kept, None, not finite)
    xs = [x for x, _ in finite]
    G = weighted_product(ctx, xs, [1] * len(xs))
    R = lagrange_interp(ctx, xs, [y for _, y in finite])
    moduli = []
    residues = []
    for i in range(p.m):
        p_i = G ** (p.m - i)
        moduli.append(p_i)
        rpow = Poly.one(ctx)
        row = {}
        for t in range(i, p.ell + 1):
            f = rpow.scale(binom_mod(ctx, t, i))
            if t > low:
                f = f * g_inf ** (p.m - p.ell + t)
            row[t] = poly_mod(f, p_i)
            rpow = poly_mod(rpow * R, p_i)
        residues.append(tuple(row.get(t, Poly.zero(ctx)) for t in kept))
    approx = ApproxInstance(ctx, moduli, residues, tuple(raw_bounds[t] for t in kept))
    return WuPlan(g_inf, raw_bounds, kept, approx, False)


def wu_infinity_ok(Q: MultiPoly, inf_xs, m: int, ell: int) -> bool:
    """Y-reversal condition as divisibility: the vanishing product of the
    infinity points to the power m-j must divide Q_{ell-j} for j < m."""
    ctx = Q.ctx
    g_inf = weighted_product(ctx, inf_xs, [1] * len(inf_xs))
    for j in range(m):
        q = Q.coeff((ell - j,))
        if q.is_zero():
            continue
        if not poly_divrem(q, g_inf ** (m - j))[1].is_zero():
            return False
    return True


def wu_interpolate(points, p: GsParams, rng, backend: str = "hankel", **kw):
    """Interpolation where points may sit at y = infinity (handled through
    the Y-reversal divisibility conditions on the top coefficients)."""
    points = tuple(points)
    xs = [pt.x for pt in points]
    if p.m < 1 or not points or len({x.to_index() for x in xs}) != len(xs):
        raise AssumptionViolated("H4")
    if not (p.b > 0 and p.b > p.ell * p.k):  # negative k is legal here, H3 is not checked
        raise AssumptionViolated("H2")
    if p.m > p.ell:
        raise AssumptionViolated("H1")

    ctx = p.ctx
    inf_xs = [pt.x for pt in points if pt.is_infinite]
    finite = [(pt.x, pt.y) for pt in points if not pt.is_infinite]
    plan = wu_build(points, p)
    if plan.approx is None:
        if not plan.kept:
            return NoSolution("every unknown's degree budget is exhausted")
        qs_star = [Poly.zero(ctx)] * (p.ell + 1)
        qs_star[plan.kept[0]] = Poly.one(ctx)
    else:
        out = solve_approx(plan.approx, rng, backend, **kw)
        if not isinstance(out, Solution):
            return out
        qs_star = [Poly.zero(ctx)] * (p.ell + 1)
        for t, q in zip(plan.kept, out.value):
            qs_star[t] = q
    low = p.ell - p.m
    terms = {}
    for t, q in enumerate(qs_star):
        if q.is_zero():
            continue
        terms[(t,)] = q * plan.g_inf ** (p.m - p.ell + t) if t > low else q
    Q = MultiPoly(ctx, 1, terms)

    ok = not Q.is_zero() and Q.ydeg <= p.ell and Q.wdeg((p.k,)) < p.b
    if ok and finite:
        fin_inst = InterpolationInstance(
            ctx,
            nvars=1,
            ydeg_bound=p.ell,
            wdeg_bound=p.b,
            weights=(p.k,),
            points=tuple((x, (y,)) for x, y in finite),
            mults=(p.m,) * len(finite),
        )
        ok = verify_solution(fin_inst, Q)
    if ok:
        ok = wu_infinity_ok(Q, inf_xs, p.m, p.ell)
    if not ok:
        raise MvInterpError("internal error: infinity-aware solution failed verification")
    return Solution(Q)


# ------------------------------------------------------------- soft decoding


def soft_group(points, mults):
    """Partition indices of possibly-x-repeating points into the minimum
    number of groups with pairwise-distinct x.

    Duplicates of one x are spread over groups in order of decreasing
    multiplicity, so the first groups collect the heavy points and the sum
    of per-group maxima stays small.  Returns (groups, per-group max mult).
    """
    by_x = {}
    for idx, (x, _) in enumerate(points):
        by_x.setdefault(x.to_index(), []).append(idx)
    q = max(len(v) for v in by_x.values())
    groups = [[] for _ in range(q)]
    for dup in by_x.values():
        dup.sort(key=lambda idx: -mults[idx])
        for h, idx in enumerate(dup):
            groups[h].append(idx)
    groups = tuple(tuple(sorted(g)) for g in groups)
    return groups, tuple(max(mults[i] for i in g) for g in groups)


def soft_reduce(inst: InterpolationInstance):
    """Per-group reductions concatenated into one approximation instance."""
    groups, _ = soft_group(inst.points, inst.mults)
    plans = []
    moduli = []
    residues = []
    for g in groups:
        sub = InterpolationInstance(
            inst.ctx,
            inst.nvars,
            inst.ydeg_bound,
            inst.wdeg_bound,
            inst.weights,
            tuple(inst.points[i] for i in g),
            tuple(inst.mults[i] for i in g),
        )
        plan, approx = build_reduction(sub)
        plans.append(plan)
        moduli.extend(approx.moduli)
        residues.extend(approx.residues)
    head = plans[0]
    for plan in plans[1:]:
        if plan.exponents != head.exponents or plan.col_bounds != head.col_bounds:
            raise MvInterpError("internal error: group plans disagree on unknowns")
    combined = ApproxInstance(inst.ctx, tuple(moduli), tuple(residues), head.col_bounds)
    return head, combined, groups


def soft_interpolate(inst: InterpolationInstance, rng, backend: str = "hankel", **kw):
    """Interpolation that tolerates repeated x-coordinates by grouping."""
    try:
        plan, combined, _ = soft_reduce(inst)
    except NoSolutionSpace as exc:
        return NoSolution(f"NoSolutionSpace: {exc}")
    out = solve_approx(combined, rng, backend, **kw)
    if not isinstance(out, Solution):
        return out
    Q = assemble_Q(plan, out.value)
    if not verify_solution(inst, Q):
        raise MvInterpError("internal error: grouped solution failed verification")
    return Solution(Q)

"""Shared random-object factories for the test suite.

Everything takes an explicit random.Random so failures reproduce from the
seed printed by the test that drew them.
"""

import random

from mvinterp.approx import ApproxInstance
from mvinterp.field import prime_field
from mvinterp.poly import Poly
from mvinterp.reduction import InterpolationInstance


def random_poly(ctx, deg_bound, rng, monic=False, exact=False):
    """Random polynomial of degree < deg_bound (or == deg_bound-1 when exact,
    monic when asked).  deg_bound <= 0 gives the zero polynomial."""
    if deg_bound <= 0:
        return Poly.zero(ctx)
    coefs = [ctx.from_index(rng.randrange(ctx.order)) for _ in range(deg_bound)]
    if monic or exact:
        coefs[-1] = ctx.one() if monic else ctx.from_index(rng.randrange(1, ctx.order))
    return Poly(ctx, coefs)


def random_monic(ctx, deg, rng):
    return random_poly(ctx, deg + 1, rng, monic=True)


def random_approx_instance(
    ctx,
    rng,
    max_mu=3,
    max_nu=4,
    max_moddeg=4,
    max_bound=4,
):
    """Random simultaneous-approximation instance (not trimmed)."""
    mu = rng.randint(1, max_mu)
    nu = rng.randint(1, max_nu)
    moduli = tuple(random_monic(ctx, rng.randint(1, max_moddeg), rng) for _ in range(mu))
    residues = tuple(
        tuple(random_poly(ctx, moduli[i].deg, rng) for _ in range(nu)) for i in range(mu)
    )
    bounds = tuple(rng.randint(1, max_bound) for _ in range(nu))
    return ApproxInstance(ctx, moduli, residues, bounds)


def random_interp_instance(
    p,
    rng,
    max_s=3,
    max_n=8,
    max_mult=3,
    max_ell=4,
    allow_negative_weights=True,
):
    """Random Problem-1 instance over F_p with pairwise-distinct x."""
    ctx = prime_field(p)
    s = rng.randint(1, max_s)
    n = rng.randint(1, min(max_n, p))
    xs = rng.sample(range(p), n)
    points = tuple(
        (ctx.el(x), tuple(ctx.el(rng.randrange(p)) for _ in range(s))) for x in xs
    )
    mults = tuple(rng.randint(1, max_mult) for _ in range(n))
    ell = rng.randint(1, max_ell)
    lo = -2 if allow_negative_weights else 0
    weights = tuple(rng.randint(lo, 3) for _ in range(s))
    # keep the column set nonempty: wdeg bound must admit at least Y^0
    b = rng.randint(1, 8) + max(0, ell * max(weights + (0,)))
    return InterpolationInstance(
        ctx,
        nvars=s,
        ydeg_bound=ell,
        wdeg_bound=b,
        weights=weights,
        points=points,
        mults=mults,
    )


def spread_seeds(base, count):
    """Independent child seeds from one base seed."""
    top = random.Random(base)
    return [top.randrange(2**63) for _ in range(count)]

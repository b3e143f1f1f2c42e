"""mvinterp: multivariate interpolation with multiplicities over finite fields,
solved through structured (mosaic-Hankel / Toeplitz-like) linear algebra.

The top-level namespace re-exports the pieces most callers need: field
construction, the two problem statements, the high-level pipelines, and the
outcome types.  Everything else stays importable from its home module.
"""

from .apps import (
    ExtPoint,
    GsParams,
    check_assumptions,
    gs_interpolate,
    interpolate_instance,
    reencode_interpolate,
    soft_interpolate,
    solve_approx,
    wu_interpolate,
)
from .approx import ApproxInstance, verify_approx
from .errors import (
    AssumptionViolated,
    FieldTooSmall,
    MvInterpError,
    NoSolutionSpace,
    PreconditionViolated,
)
from .field import FieldCtx, FieldElement, build_extension, prime_field
from .outcomes import Failure, NoSolution, NotApplicable, Solution
from .poly import Poly
from .reduction import (
    InterpolationInstance,
    MultiPoly,
    build_reduction,
    verify_solution,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxInstance",
    "AssumptionViolated",
    "ExtPoint",
    "Failure",
    "FieldCtx",
    "FieldElement",
    "FieldTooSmall",
    "GsParams",
    "InterpolationInstance",
    "MultiPoly",
    "MvInterpError",
    "NoSolution",
    "NoSolutionSpace",
    "NotApplicable",
    "Poly",
    "PreconditionViolated",
    "Solution",
    "build_extension",
    "build_reduction",
    "check_assumptions",
    "gs_interpolate",
    "interpolate_instance",
    "prime_field",
    "reencode_interpolate",
    "soft_interpolate",
    "solve_approx",
    "verify_approx",
    "verify_solution",
    "wu_interpolate",
]

from .cartan import (
    BallCover,
    CoverBall,
    CoverViolation,
    cartan_cover,
    cartan_radii,
    content_of_cover,
    verify_cover,
)
from .content import (
    CartanBoundBreakdown,
    LemniscateBound,
    empirical_lemniscate_content,
    extended_content,
    lemniscate_bound_rhs,
    lubinsky_threshold,
    xi_fixed_point,
)
from .polynomial import ENSEMBLES, Polynomial, random_polynomial, random_roots
from .suite import LemniscateSuite, lemniscate_suite

__all__ = [
    "ENSEMBLES",
    "BallCover",
    "CartanBoundBreakdown",
    "CoverBall",
    "CoverViolation",
    "LemniscateBound",
    "LemniscateSuite",
    "Polynomial",
    "cartan_cover",
    "cartan_radii",
    "content_of_cover",
    "empirical_lemniscate_content",
    "extended_content",
    "lemniscate_bound_rhs",
    "lemniscate_suite",
    "lubinsky_threshold",
    "random_polynomial",
    "random_roots",
    "verify_cover",
    "xi_fixed_point",
]

from .counterexample import (
    EInfContent,
    EInfSpec,
    build_counterexample,
    counterexample_ratio,
    einf_content_report,
    einf_frostman_profile,
    f0_margin,
)
from .semigroup import (
    heat_solution,
    ln_observation_integral,
    ln_sup_path,
    observability_ratio,
)

__all__ = [
    "EInfContent",
    "EInfSpec",
    "build_counterexample",
    "counterexample_ratio",
    "einf_content_report",
    "einf_frostman_profile",
    "f0_margin",
    "heat_solution",
    "ln_observation_integral",
    "ln_sup_path",
    "observability_ratio",
]

from .inequalities import (
    JensenCheck,
    RemezReport,
    certified_content,
    jensen_suite,
    jensen_zero_bound,
    remez_experiment,
    remez_growth,
    remez_ratio_ln,
)
from .propagation import (
    PropagationReport,
    SupTriple,
    eps_grid,
    propagation_experiment,
    required_eps_constant,
    required_power_constant,
    sup_triple,
)
from .sup import Analytic, SupEstimate, ln_sup_circle, ln_sup_points, sup_disc

__all__ = [
    "Analytic",
    "JensenCheck",
    "PropagationReport",
    "RemezReport",
    "SupEstimate",
    "SupTriple",
    "certified_content",
    "eps_grid",
    "jensen_suite",
    "jensen_zero_bound",
    "ln_sup_circle",
    "ln_sup_points",
    "propagation_experiment",
    "remez_experiment",
    "remez_growth",
    "remez_ratio_ln",
    "required_eps_constant",
    "required_power_constant",
    "sup_disc",
    "sup_triple",
]

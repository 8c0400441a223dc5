from .cells import (
    CellClassification,
    bernstein_check,
    bernstein_ratio,
    cell_tail_certificate,
    classify_cells,
)
from .signal import BandLimited, max_index, random_bandlimited, single_mode
from .uncertainty import (
    UncertaintyReport,
    required_constant,
    uncertainty_bound_ln,
    uncertainty_experiment,
    uncertainty_ratio_ln,
    window_sups,
)

__all__ = [
    "BandLimited",
    "CellClassification",
    "UncertaintyReport",
    "bernstein_check",
    "bernstein_ratio",
    "cell_tail_certificate",
    "classify_cells",
    "max_index",
    "random_bandlimited",
    "required_constant",
    "single_mode",
    "uncertainty_bound_ln",
    "uncertainty_experiment",
    "uncertainty_ratio_ln",
    "window_sups",
]

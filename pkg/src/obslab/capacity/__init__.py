from .discretize import ball_points, cantor_ln_distances, product_ln_distances
from .energy import DiscreteMeasure, KernelSpec, energy, point_ln_distances
from .frank_wolfe import (
    BallCheck,
    CapacityEstimate,
    CapacityReport,
    ball_capacity_check,
    capacity_estimate,
    capacity_report,
)
from .slicing import (
    AxisAtoms,
    SlicingFit,
    SlicingOutcome,
    SlicingReport,
    fit_slicing,
    slicing_experiment,
)
from .transference import (
    Integrability,
    TransferenceReport,
    content_capacity_check,
    gauge_shape,
    integrability,
    ln_kernel_density,
    ln_kernel_times_gauge,
    shifted_kernel_gauge,
)

__all__ = [
    "AxisAtoms",
    "BallCheck",
    "CapacityEstimate",
    "CapacityReport",
    "DiscreteMeasure",
    "Integrability",
    "KernelSpec",
    "SlicingFit",
    "SlicingOutcome",
    "SlicingReport",
    "TransferenceReport",
    "ball_capacity_check",
    "ball_points",
    "cantor_ln_distances",
    "capacity_estimate",
    "capacity_report",
    "content_capacity_check",
    "energy",
    "fit_slicing",
    "gauge_shape",
    "integrability",
    "ln_kernel_density",
    "ln_kernel_times_gauge",
    "point_ln_distances",
    "product_ln_distances",
    "shifted_kernel_gauge",
    "slicing_experiment",
]

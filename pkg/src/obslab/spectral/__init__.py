from .cost import (
    SpectralCostReport,
    cost_shape,
    spectral_cost,
    spectral_cost_experiment,
)
from .nazarov_turan import (
    ExponentialPolynomial,
    TuranCheck,
    nazarov_turan_check,
    nazarov_turan_experiment,
    random_exponential_polynomial,
)
from .vector import SpectralVector, dimension, sample_spectral

__all__ = [
    "ExponentialPolynomial",
    "SpectralCostReport",
    "SpectralVector",
    "TuranCheck",
    "cost_shape",
    "dimension",
    "nazarov_turan_check",
    "nazarov_turan_experiment",
    "random_exponential_polynomial",
    "sample_spectral",
    "spectral_cost",
    "spectral_cost_experiment",
]

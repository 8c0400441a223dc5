"""
Spectral inequality cost on (0, L).

cost(lambda) = max over sampled phi in E_lambda of sup_{[0,L]}|phi| / sup_E|phi|,
checked against

    ln cost <= C (L+1)^2 (sqrt(lambda) + lambda (ln(lambda+e))^{-2a/3} / c^2).

Trials share one Gaussian draw truncated to each dimension, so E_lambda
samples are nested across the grid.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
import structlog
from numpy.typing import NDArray

from obslab.errors import EmptySpace
from obslab.fitting import ConstantFit, fit_constant
from obslab.fractal import MeasuredSet
from obslab.parallel import parallel_map, trial_rng
from obslab.remez import certified_content
from obslab.spectral.vector import SpectralVector, dimension

logger = structlog.get_logger(__name__)


def spectral_cost(v: SpectralVector, e_points: NDArray[np.float64]) -> float:
    """ln(sup_{[0,L]}|phi| upper estimate / sup over the E sample)."""
    return v.sup_interval(0.0, v.L).upper.ln_mag - v.ln_sup_points(e_points)


def cost_shape(lam: float, L: float, alpha: float, content: float) -> float:
    """(L+1)^2 (sqrt(lambda) + lambda (ln(lambda+e))^{-2 alpha/3} / c^2)."""
    return (L + 1) ** 2 * (
        math.sqrt(lam) + lam * math.log(lam + math.e) ** (-2 * alpha / 3) / content**2
    )


@dataclass(frozen=True)
class SpectralCostReport:
    """
    Attributes:
        rows: per-lambda cost curve
        fit: fitted C over the grid
        content: certified h_alpha content of E
    """

    rows: list[dict[str, Any]]
    fit: ConstantFit
    content: float

    @property
    def monotone(self) -> bool:
        """Cost curve nondecreasing along an ascending lambda grid."""
        costs = [r["ln_cost"] for r in self.rows]
        return all(b >= a - 1e-9 for a, b in zip(costs, costs[1:], strict=False))


def spectral_cost_experiment(
    e_set: MeasuredSet,
    alpha: float,
    lambdas: Sequence[float],
    trials: int,
    seed: int,
    L: float = 1.0,
) -> SpectralCostReport:
    c = certified_content(e_set, alpha)
    e_points = e_set.sample_points()
    dims = [dimension(lam, L) for lam in lambdas]
    if min(dims) == 0:
        msg = f"E_lambda is empty at lambda={lambdas[dims.index(0)]} for L={L}"
        raise EmptySpace(msg)
    k_max = max(dims)

    def run(trial: int) -> list[float]:
        draw = trial_rng(seed, trial).standard_normal(k_max)
        vectors = [SpectralVector.from_coeffs(L, draw[:K]).normalized() for K in dims]
        own = [spectral_cost(v, e_points) for v in vectors]
        # E_lambda contains every prefix vector of a smaller lambda
        return [
            max(x for x, k in zip(own, dims, strict=True) if k <= K) for K in dims
        ]

    per_trial = np.array(parallel_map(run, range(trials)))
    ln_costs = per_trial.max(axis=0)
    shapes = [cost_shape(lam, L, alpha, c) for lam in lambdas]
    fit = fit_constant(
        [max(0.0, cost) / shape for cost, shape in zip(ln_costs, shapes, strict=True)]
    )
    rows = [
        {
            "lambda": lam,
            "K": K,
            "ln_cost": float(cost),
            "ln_bound_at_fitC": fit.constant * shape,
            "pass": bool(cost <= fit.constant * shape + 1e-9),
        }
        for lam, K, cost, shape in zip(lambdas, dims, ln_costs, shapes, strict=True)
    ]
    logger.info("spectral_cost_fit", alpha=alpha, L=L, content=c, **fit.to_dict())
    return SpectralCostReport(rows, fit, c)

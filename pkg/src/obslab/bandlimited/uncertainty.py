"""
Uncertainty principle for band-limited functions on thick sets.

ratio = ||u||_{l^2 L^inf} / ||{sup_{E cap [k, k+L]} |u|}_k||_{l^2}, with windows
wrapping around the periodization circle, is compared with

    ln bound(C) = C L N ln(4C(L+1)) + C N + C N^2 (ln(CN/ln 2 + e))^{-2a/3} / gamma^2,

and one C >= 1/(4(L+1)) is fitted. The Kovrijkine factor and e^{CN} cannot
be separated at window scale, so a single C drives all three terms.
"""

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy.optimize import brentq

from obslab.bandlimited.signal import DEFAULT_WINDOW, BandLimited, random_bandlimited
from obslab.errors import DegenerateSet
from obslab.fitting import ConstantFit, fit_constant
from obslab.fractal import PeriodicSet, thickness_report
from obslab.gauge import HAlpha
from obslab.parallel import parallel_map, trial_rng

logger = structlog.get_logger(__name__)

LN2: Final = math.log(2.0)
THICKNESS_WINDOWS: Final = 16


def window_sups(
    u: BandLimited, e_points: NDArray[np.float64], length: float
) -> NDArray[np.float64]:
    """sup of |u| over E cap [k, k + length] for k = 0..W-1, windows mod W."""
    values = np.abs(u(e_points))
    sups = np.zeros(u.W)
    for k in range(u.W):
        offset = np.mod(e_points - k, u.W)
        inside = offset <= length
        if inside.any():
            sups[k] = values[inside].max()
    return sups


def uncertainty_ratio_ln(
    u: BandLimited, e_points: NDArray[np.float64], length: float
) -> float:
    observed = float(np.linalg.norm(window_sups(u, e_points, length)))
    if observed == 0:
        msg = "u vanishes on every sampled window of E"
        raise DegenerateSet(msg)
    return math.log(u.amalgam_norm()) - math.log(observed)


def uncertainty_bound_ln(
    C: float, N: float, L: float, gamma: float, alpha: float
) -> float:
    cn = C * N
    return (
        cn * L * math.log(4 * C * (L + 1))
        + cn
        + cn * N * math.log(cn / LN2 + math.e) ** (-2 * alpha / 3) / gamma**2
    )


def required_constant(
    ln_ratio: float, N: float, L: float, gamma: float, alpha: float
) -> float:
    """Smallest C >= 1/(4(L+1)) with ln bound(C) >= ln_ratio."""
    lo = 1 / (4 * (L + 1))

    def gap(C: float) -> float:
        return uncertainty_bound_ln(C, N, L, gamma, alpha) - ln_ratio

    if gap(lo) >= 0:
        return lo
    hi = 2 * lo
    while gap(hi) < 0:
        hi *= 2
    return brentq(gap, lo, hi, xtol=1e-14, rtol=1e-12)


@dataclass(frozen=True)
class UncertaintyReport:
    """
    Attributes:
        rows: one row per (N, trial)
        fit: fitted C
        gamma: thickness constant used in the bound
    """

    rows: list[dict[str, Any]]
    fit: ConstantFit
    gamma: float


def uncertainty_experiment(
    e_set: PeriodicSet,
    alpha: float,
    L: float,
    bandwidths: Sequence[float],
    trials: int,
    seed: int,
    W: int = DEFAULT_WINDOW,
    gamma: float | None = None,
) -> UncertaintyReport:
    """Random band-limited u against the bound; gamma from thickness_report."""
    if gamma is None:
        x_samples = np.linspace(
            0.0, float(e_set.period), THICKNESS_WINDOWS, endpoint=False
        )
        gamma = thickness_report(e_set, HAlpha(alpha=alpha), L, x_samples).gamma_hat
    if gamma <= 0:
        msg = "observation set is not thick: gamma_hat = 0"
        raise DegenerateSet(msg)
    e_points = np.mod(e_set.sample_points(0.0, float(W)), W)
    instances = list(itertools.product(enumerate(bandwidths), range(trials)))

    def run(instance: tuple[tuple[int, float], int]) -> dict[str, Any]:
        (ni, N), trial = instance
        u = random_bandlimited(N, trial_rng(seed, ni, trial), W)
        ln_ratio = uncertainty_ratio_ln(u, e_points, L)
        return {
            "N": N,
            "trial": trial,
            "ln_ratio": ln_ratio,
            "required_C": required_constant(ln_ratio, N, L, gamma, alpha),
        }

    rows = parallel_map(run, instances)
    fit = fit_constant([r["required_C"] for r in rows])
    for r in rows:
        r["ln_bound"] = uncertainty_bound_ln(fit.constant, r["N"], L, gamma, alpha)
        r["pass"] = r["ln_ratio"] <= r["ln_bound"] + 1e-9
    logger.info("uncertainty_fit", alpha=alpha, gamma=gamma, **fit.to_dict())
    return UncertaintyReport(rows, fit, gamma)

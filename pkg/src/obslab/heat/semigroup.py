"""
Heat semigroup on (0, L) with Dirichlet conditions and the observability ratio.

u(t) = sum_k c_k e^{-lambda_k t} sin(k pi x / L) is kept as ln-coefficients,
so large times only shift logs. The ratio

    ||u(T)||_{L^2(0,L)} / int_0^T sup_E |u(t, .)| dt

is an empirical lower bound on the observability constant; the time
integral uses composite Simpson with node doubling.
"""

import math
from typing import Final

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy.integrate import simpson
from scipy.special import logsumexp

from obslab.errors import DomainError, QuadratureError
from obslab.gauge import LogNum
from obslab.spectral import SpectralVector

logger = structlog.get_logger(__name__)

INITIAL_NODES: Final = 65
MAX_NODES: Final = 2**16 + 1
LN_RTOL: Final = 1e-6
# |u(t)| on E below this fraction of sum |c_k(t)| counts as an exact zero
ZERO_RTOL: Final = 1e-12


def heat_solution(v0: SpectralVector, t: float) -> SpectralVector:
    """e^{t Delta} v0: every coefficient multiplied by e^{-lambda_k t}."""
    if t < 0:
        msg = f"heat semigroup needs t >= 0, got {t}"
        raise DomainError(msg)
    return SpectralVector(v0.L, v0.ln_coeffs - v0.eigenvalues * t, v0.signs)


def ln_sup_path(
    v0: SpectralVector, times: NDArray[np.float64], e_points: NDArray[np.float64]
) -> NDArray[np.float64]:
    """ln sup_E |u(t, .)| for every t; -inf where u vanishes on E."""
    modes = np.sin(np.outer(e_points, v0.frequencies))
    ln_c = v0.ln_coeffs[None, :] - np.outer(times, v0.eigenvalues)
    shift = ln_c.max(axis=1, keepdims=True)
    scaled = v0.signs * np.exp(ln_c - shift)
    values = np.abs(scaled @ modes.T).max(axis=1)
    scale = np.abs(scaled).sum(axis=1)
    with np.errstate(divide="ignore"):
        ln_sup = np.log(values) + shift[:, 0]
    return np.where(values > ZERO_RTOL * scale, ln_sup, -math.inf)


def _ln_simpson(times: NDArray[np.float64], ln_values: NDArray[np.float64]) -> float:
    shift = float(ln_values.max())
    if not math.isfinite(shift):
        return -math.inf
    integral = float(simpson(np.exp(ln_values - shift), x=times))
    return shift + math.log(integral) if integral > 0 else -math.inf


def ln_observation_integral(
    v0: SpectralVector,
    T: float,
    e_points: NDArray[np.float64],
    nodes: int = INITIAL_NODES,
    *,
    start: float = 0.0,
) -> float:
    """ln int_start^T sup_E|u(t)| dt, doubling nodes until two passes agree to 1e-6."""
    times = np.linspace(start, T, nodes)
    ln_values = ln_sup_path(v0, times, e_points)
    previous = _ln_simpson(times, ln_values)
    while times.size < MAX_NODES:
        midpoints = (times[:-1] + times[1:]) / 2
        merged_t = np.empty(2 * times.size - 1)
        merged_v = np.empty_like(merged_t)
        merged_t[::2], merged_t[1::2] = times, midpoints
        merged_v[::2] = ln_values
        merged_v[1::2] = ln_sup_path(v0, midpoints, e_points)
        times, ln_values = merged_t, merged_v
        current = _ln_simpson(times, ln_values)
        if current == previous == -math.inf:
            return -math.inf
        if abs(current - previous) <= LN_RTOL:
            logger.debug("observation_integral", nodes=times.size, ln_value=current)
            return current
        previous = current
    msg = f"time quadrature did not settle within {MAX_NODES} nodes (T={T})"
    raise QuadratureError(msg)


def observability_ratio(
    v0: SpectralVector,
    T: float,
    e_points: NDArray[np.float64],
    nodes: int = INITIAL_NODES,
) -> LogNum:
    """||u(T)||_{L^2} / int_0^T sup_E|u| as a LogNum; +inf when u vanishes on E."""
    if T <= 0:
        msg = f"observation time must be positive, got {T}"
        raise DomainError(msg)
    numerator = 0.5 * (
        math.log(v0.L / 2) + float(logsumexp(2 * (v0.ln_coeffs - v0.eigenvalues * T)))
    )
    denominator = ln_observation_integral(v0, T, e_points, nodes)
    if denominator == -math.inf:
        logger.warning("zero_observation", K=v0.K, T=T, points=e_points.size)
        return LogNum(1, math.inf)
    return LogNum(1, numerator - denominator)

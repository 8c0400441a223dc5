"""
Content against capacity on discretized Cantor sets.

Two directions are checked:
- c_g(E) >= C_{1/g}(E) / 2, with the level cover sum as c_g and the level
  atoms as the capacity discretization;
- for g = F_{alpha,beta}, the shifted kernel K = 1/F_{alpha-1-eps,beta-1}
  has int_0 K dh finite, K h -> 0 at 0, and C_K(E) / c_g(E) stays bounded
  below across Cantor depths.

The integral int K dh is taken in u = ln ln(1/t) from the gauge log
profiles, with the t^{d-1} factors of g and K cancelled term by term.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import quad

from obslab.capacity.discretize import cantor_ln_distances
from obslab.capacity.energy import KernelSpec
from obslab.capacity.frank_wolfe import (
    CapacityReport,
    capacity_estimate,
    capacity_report,
)
from obslab.errors import ParamError, QuadratureError
from obslab.fractal import CantorLevel, build_cantor, content_upper
from obslab.gauge import FAlphaBeta, Gauge, HAlpha, HAlphaBeta, LogNum
from obslab.parallel import parallel_map

logger = structlog.get_logger(__name__)

# content may fall this far below half the capacity before the check fails
CONTENT_SLACK: Final = 0.10
QUAD_RTOL: Final = 1e-8
QUAD_ERR_MAX: Final = 1e-6
KH_GRID: Final = 16
KH_U_MAX: Final = 40.0
QUAD_LIMIT: Final = 200
# u = ln ln(1/t) where the density is last evaluated; x = e^u stays finite
TAIL_U: Final = 600.0
TAIL_EXPONENT_MARGIN: Final = 1e-6


def gauge_shape(g: Gauge) -> tuple[float, float, int] | None:
    """(alpha, beta, d) when g is an F_{alpha,beta} family member."""
    match g:
        case FAlphaBeta():
            return g.alpha, g.beta, g.d
        case HAlphaBeta():
            return g.alpha, g.beta, 1
        case HAlpha():
            return g.alpha, 0.5, 1
        case _:
            return None


def shifted_kernel_gauge(g: Gauge, eps: float) -> FAlphaBeta:
    """F_{alpha-1-eps, beta-1} in the dimension of g."""
    shape = gauge_shape(g)
    if shape is None:
        msg = f"{g.family} is not an F_(alpha,beta) gauge"
        raise ParamError(msg)
    alpha, beta, d = shape
    if alpha < 1 + eps or beta < 1:
        msg = f"shifted kernel needs alpha >= 1 + eps and beta >= 1, got {shape}"
        raise ParamError(msg)
    return FAlphaBeta(alpha - 1 - eps, beta - 1, d, cutoff_ln=g.cutoff_ln)


@dataclass(frozen=True)
class Integrability:
    """
    Attributes:
        finite: whether int_0 K dh converges
        value: the integral from 0 to the cutoff, inf when divergent
        u: grid of ln ln(1/t)
        ln_kh: ln(K h) on the grid
    """

    finite: bool
    value: float
    u: NDArray[np.float64]
    ln_kh: NDArray[np.float64]

    @property
    def kh_vanishes(self) -> bool:
        """K h strictly decreasing along the grid toward t = 0."""
        return bool(np.all(np.diff(self.ln_kh) < 0))

    def to_dict(self) -> dict[str, Any]:
        return {
            "finite": self.finite,
            "value": self.value if self.finite else None,
            "kh_vanishes": self.kh_vanishes,
            "ln_kh": self.ln_kh.tolist(),
        }


def ln_kernel_times_gauge(
    g: Gauge, shifted: Gauge, u: ArrayLike
) -> NDArray[np.float64]:
    """ln(K h) at t = exp(-e^u) for K = 1/shifted, h = g, without cancellation."""
    x = np.exp(np.asarray(u, dtype=float))
    p_g, r_g = g.log_profile_parts(x)
    p_k, r_k = shifted.log_profile_parts(x)
    return (p_k - p_g) * x + (r_g - r_k)


def ln_kernel_density(g: Gauge, shifted: Gauge, u: ArrayLike) -> NDArray[np.float64]:
    """
    ln of the integrand of int K dh in the variable u = ln ln(1/t).

    K(t) g'(t) dt = K g (-Phi_g'(x)) dx and dx = x du, so the density is
    K h x (-Phi_g'(x)).
    """
    u_arr = np.asarray(u, dtype=float)
    x = np.exp(u_arr)
    return (
        ln_kernel_times_gauge(g, shifted, u_arr)
        + u_arr
        + np.log(-g.log_profile_slope(x))
    )


def _tail_exponent(g: Gauge, shifted: Gauge) -> float:
    """Power-law decay rate of the density at the end of the float range."""
    ln_f = ln_kernel_density(g, shifted, [TAIL_U / 2, TAIL_U])
    return float(ln_f[0] - ln_f[1]) / math.log(2.0)


def integrability(g: Gauge, eps: float) -> Integrability:
    """
    int_0^cutoff K dh for h = g = F_{alpha,beta} and K = 1/F_{alpha-1-eps,beta-1}.

    The density is integrated on [u0, TAIL_U] by quadrature; past TAIL_U it is
    continued by its fitted power law, which also decides convergence.
    """
    shifted = shifted_kernel_gauge(g, eps)
    u0 = math.log(g.x_cut)
    u = np.linspace(u0, KH_U_MAX, KH_GRID)
    ln_kh = ln_kernel_times_gauge(g, shifted, u)
    p = _tail_exponent(g, shifted)
    if p <= 1 + TAIL_EXPONENT_MARGIN:
        logger.info("kernel_not_integrable", family=g.family, eps=eps, tail=p)
        return Integrability(False, math.inf, u, ln_kh)

    def density(v: float) -> float:
        return math.exp(float(ln_kernel_density(g, shifted, v)))

    value, abserr = quad(
        density, u0, TAIL_U, points=[KH_U_MAX], epsrel=QUAD_RTOL, limit=QUAD_LIMIT
    )
    if abserr > QUAD_ERR_MAX * max(abs(value), 1.0):
        msg = f"integrability quadrature error {abserr:.2e} for value {value:.6g}"
        raise QuadratureError(msg)
    tail = density(TAIL_U) * TAIL_U / (p - 1)
    return Integrability(True, float(value + tail), u, ln_kh)


@dataclass(frozen=True)
class TransferenceReport:
    """
    Attributes:
        content: level cover sum of g
        capacity: C_{1/g} of the level atoms with restart and refinement
        integrability: shifted-kernel integral, None when g is not F_{alpha,beta}
        ratio_rows: depth, ln_capacity, ln_content, ln_ratio for the shifted kernel
    """

    content: LogNum
    capacity: CapacityReport
    integrability: Integrability | None
    ratio_rows: list[dict[str, Any]]

    @property
    def slack_ratio(self) -> float:
        """c_g / (C_{1/g} / 2); at least 1 - CONTENT_SLACK when (i) holds."""
        return math.exp(
            self.content.ln_mag - self.capacity.capacity.ln_mag + math.log(2.0)
        )

    @property
    def holds(self) -> bool:
        return self.slack_ratio >= 1 - CONTENT_SLACK

    @property
    def ln_ratio_floor(self) -> float | None:
        """Smallest ln C_K / c_g across depths, the fitted ln A."""
        if not self.ratio_rows:
            return None
        return min(r["ln_ratio"] for r in self.ratio_rows)

    def to_dict(self) -> dict[str, Any]:
        return {
            "ln_content": self.content.ln_mag,
            "capacity": self.capacity.to_dict(),
            "slack_ratio": self.slack_ratio,
            "holds": self.holds,
            "integrability": (
                None if self.integrability is None else self.integrability.to_dict()
            ),
            "ln_ratio_floor": self.ln_ratio_floor,
        }


def _ratio_row(level: CantorLevel, g: Gauge, shifted: Gauge) -> dict[str, Any]:
    kernel = KernelSpec(shifted, level.ln_length)
    cap = capacity_estimate(cantor_ln_distances(level), kernel)
    content = content_upper(level, g)
    return {
        "depth": level.depth,
        "ln_capacity": cap.capacity.ln_mag,
        "ln_content": content.ln_mag,
        "ln_ratio": cap.capacity.ln_mag - content.ln_mag,
    }


def content_capacity_check(
    level: CantorLevel,
    g: Gauge,
    eps_shift: float,
    depths: Sequence[int] = (),
    seed: int = 0,
) -> TransferenceReport:
    """
    Compare the level's g-content with its 1/g-capacity; for F_{alpha,beta}
    gauges with alpha >= 1 + eps_shift and beta >= 1 also run the shifted
    kernel checks over the given depths of the same Cantor rule.
    """
    if level.atom_count == 0:
        msg = "content-capacity check on an empty level"
        raise ParamError(msg)
    kernel = KernelSpec(g, level.ln_length)
    capacity = capacity_report(cantor_ln_distances(level), kernel, seed)
    content = content_upper(level, g)

    shape = gauge_shape(g)
    integral: Integrability | None = None
    rows: list[dict[str, Any]] = []
    if shape is not None and shape[0] >= 1 + eps_shift and shape[1] >= 1:
        integral = integrability(g, eps_shift)
        shifted = shifted_kernel_gauge(g, eps_shift)
        levels = [build_cantor(level.spec, k) for k in depths]
        rows = parallel_map(lambda lvl: _ratio_row(lvl, g, shifted), levels)
    else:
        logger.info("transfer_skipped", family=g.family, eps_shift=eps_shift)

    report = TransferenceReport(content, capacity, integral, rows)
    logger.info(
        "content_capacity_check",
        depth=level.depth,
        slack_ratio=report.slack_ratio,
        holds=report.holds,
        ln_ratio_floor=report.ln_ratio_floor,
    )
    return report

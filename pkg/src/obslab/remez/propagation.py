"""
Propagation of smallness from a set E to the unit interval.

Two forms are checked for functions analytic on D_6:

    sup_I|phi| <= eps sup_{D_5}|phi|
                  + exp{C (ln 1/eps)^2 / (lnln 1/eps)^{2 alpha/3}} sup_E|phi|

for eps in (0, e^{-3}], and the power form with M = sup_{D_5}/sup_I,

    sup_I|phi| <= M^9 exp{C (ln M)^2 (ln(ln M/ln 2 + e))^{-2 alpha/3} / c^2} sup_E|phi|.

Each function and eps yields the smallest C that passes; one C is fitted.
"""

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import NDArray

from obslab.errors import DomainError
from obslab.fitting import ConstantFit, fit_constant
from obslab.gauge import LogNum
from obslab.parallel import parallel_map
from obslab.remez.sup import Analytic, ln_sup_circle, ln_sup_points

logger = structlog.get_logger(__name__)

LN2: Final = math.log(2.0)
EPS_MAX_LN: Final = -3.0
INTERVAL_POINTS: Final = 4097
OUTER_RADIUS: Final = 5.0


def eps_grid(
    count: int, ln_lo: float = -12.0, ln_hi: float = EPS_MAX_LN
) -> list[float]:
    """ln eps values evenly spaced in [ln_lo, ln_hi]."""
    return [float(v) for v in np.linspace(ln_hi, ln_lo, count)]


@dataclass(frozen=True)
class SupTriple:
    """
    Attributes:
        ln_interval: ln sup over [0, 1]
        ln_outer: ln sup over D_5
        ln_set: ln sup over the E sample
    """

    ln_interval: float
    ln_outer: float
    ln_set: float


def sup_triple(phi: Analytic, e_points: NDArray[np.float64]) -> SupTriple:
    interval = np.linspace(0.0, 1.0, INTERVAL_POINTS)
    ln_interval = max(ln_sup_points(phi, interval), ln_sup_points(phi, e_points))
    return SupTriple(
        ln_interval=ln_interval,
        ln_outer=max(ln_sup_circle(phi, OUTER_RADIUS), ln_interval),
        ln_set=ln_sup_points(phi, e_points),
    )


def required_eps_constant(sups: SupTriple, ln_eps: float, alpha: float) -> float:
    """Smallest C for the eps form at one eps."""
    if ln_eps > EPS_MAX_LN + 1e-12:
        msg = f"eps=e^{ln_eps} above e^-3"
        raise DomainError(msg)
    excess = LogNum(1, sups.ln_interval) - LogNum(1, ln_eps + sups.ln_outer)
    if excess.sign <= 0:
        return 0.0
    ln_factor = excess.ln_mag - sups.ln_set
    if ln_factor <= 0:
        return 0.0
    x = -ln_eps
    return ln_factor * math.log(x) ** (2 * alpha / 3) / x**2


def required_power_constant(sups: SupTriple, alpha: float, content: float) -> float:
    """Smallest C for the M^9 form."""
    ln_m = sups.ln_outer - sups.ln_interval
    ln_gain = sups.ln_interval - sups.ln_set - 9 * ln_m
    if ln_gain <= 1e-12:
        return 0.0
    if ln_m <= 0:
        return math.inf
    growth = ln_m**2 * math.log(ln_m / LN2 + math.e) ** (-2 * alpha / 3)
    return ln_gain * content**2 / growth


@dataclass(frozen=True)
class PropagationReport:
    """
    Attributes:
        rows: one row per (function, eps)
        eps_fit: fitted C of the eps form
        power_fit: fitted C of the M^9 form
    """

    rows: list[dict[str, Any]]
    eps_fit: ConstantFit
    power_fit: ConstantFit

    @property
    def violations(self) -> int:
        return self.eps_fit.violations + self.power_fit.violations


def propagation_experiment(
    functions: Sequence[Analytic],
    e_points: NDArray[np.float64],
    alpha: float,
    content: float,
    ln_eps_grid: Sequence[float],
) -> PropagationReport:
    """Both propagation forms over a family of functions and an eps grid."""
    sups = parallel_map(lambda phi: sup_triple(phi, e_points), functions)
    rows: list[dict[str, Any]] = []
    for (index, s), ln_eps in itertools.product(enumerate(sups), ln_eps_grid):
        rows.append(
            {
                "function": index,
                "ln_eps": ln_eps,
                "ln_sup_interval": s.ln_interval,
                "ln_sup_outer": s.ln_outer,
                "ln_sup_set": s.ln_set,
                "required_C": required_eps_constant(s, ln_eps, alpha),
            }
        )
    eps_fit = fit_constant([r["required_C"] for r in rows])
    power_fit = fit_constant([required_power_constant(s, alpha, content) for s in sups])
    for r in rows:
        x = -r["ln_eps"]
        ln_gain = eps_fit.constant * x**2 / math.log(x) ** (2 * alpha / 3)
        rhs = LogNum(1, r["ln_eps"] + r["ln_sup_outer"]) + LogNum(
            1, ln_gain + r["ln_sup_set"]
        )
        r["rhs_ln"] = rhs.ln_mag
        r["pass"] = r["ln_sup_interval"] <= rhs.ln_mag + 1e-9
    logger.info(
        "propagation_fit",
        alpha=alpha,
        eps_C=eps_fit.constant,
        power_C=power_fit.constant,
        functions=len(functions),
    )
    return PropagationReport(rows, eps_fit, power_fit)

"""
Per-level recurrence of the schedule checked on simulated heat data:

    f(lambda_k) ||u(T_k)|| - f(lambda_{k+1}) ||u(T_{k+1})||
        <= int_{T_{k+1}}^{T_k} sup_E|u|,

where u(t) = e^{t Delta} v0. Summing over k >= N telescopes to the cost bound.
"""

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import structlog
from numpy.typing import NDArray

from obslab.gauge import LogNum
from obslab.heat import heat_solution, ln_observation_integral
from obslab.lr.schedule import LRSchedule
from obslab.spectral import SpectralVector

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class TelescopingReport:
    """
    Attributes:
        rows: k, ln_lhs_sign, ln_lhs, ln_rhs, holds per level
        telescoped_lhs: f(lambda_N)||u(T_N)|| - f(lambda_M)||u(T_M)||
        telescoped_rhs: int_{T_M}^{T_N} sup_E|u|
    """

    rows: list[dict[str, Any]]
    telescoped_lhs: LogNum
    telescoped_rhs: LogNum

    @property
    def violations(self) -> int:
        return sum(not r["holds"] for r in self.rows)

    @property
    def telescoped_holds(self) -> bool:
        return not self.telescoped_rhs < self.telescoped_lhs


def telescoping_check(
    plan: LRSchedule,
    v0: SpectralVector,
    e_points: NDArray[np.float64],
    first: int = 1,
    last: int | None = None,
) -> TelescopingReport:
    """Evaluate the recurrence for k = first..last-1 of the schedule."""
    last = len(plan.rows) if last is None else last
    times = plan.suffix_times

    def weighted_norm(k: int) -> LogNum:
        u = heat_solution(v0, float(times[k - 1]))
        return LogNum(1, plan.ln_f(k) + u.ln_l2_norm())

    rows: list[dict[str, Any]] = []
    for k in range(first, last):
        lhs = weighted_norm(k) - weighted_norm(k + 1)
        ln_rhs = ln_observation_integral(
            v0, float(times[k - 1]), e_points, start=float(times[k])
        )
        rhs = LogNum(1, ln_rhs) if math.isfinite(ln_rhs) else LogNum.zero()
        rows.append(
            {
                "k": k,
                "lhs_sign": lhs.sign,
                "ln_lhs": lhs.ln_mag,
                "ln_rhs": rhs.ln_mag,
                "holds": not rhs < lhs,
            }
        )
    total_lhs = weighted_norm(first) - weighted_norm(last)
    ln_total = ln_observation_integral(
        v0, float(times[first - 1]), e_points, start=float(times[last - 1])
    )
    total_rhs = LogNum(1, ln_total) if math.isfinite(ln_total) else LogNum.zero()
    report = TelescopingReport(rows, total_lhs, total_rhs)
    logger.info(
        "telescoping_check",
        levels=len(rows),
        violations=report.violations,
        telescoped_holds=report.telescoped_holds,
    )
    return report

"""Content bound suite over random polynomial ensembles."""

import itertools
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import structlog

from obslab.errors import NoRoot
from obslab.fitting import ConstantFit, fit_constant
from obslab.gauge import Gauge, HAlpha, LogNum
from obslab.lemniscate.cartan import BallCover
from obslab.lemniscate.content import (
    empirical_lemniscate_content,
    extended_content,
    lemniscate_bound_rhs,
)
from obslab.lemniscate.polynomial import ENSEMBLES, Ensemble, random_polynomial
from obslab.parallel import parallel_map, trial_rng

logger = structlog.get_logger(__name__)

Instance = tuple[tuple[int, int], tuple[int, Ensemble], int]


@dataclass(frozen=True)
class LemniscateSuite:
    """
    Attributes:
        rows: one row per (alpha, n, delta, ensemble, trial)
        fits: fitted constant per alpha
        breakdowns: radius breakdown per (alpha, n, delta), None if unsolvable
    """

    rows: list[dict[str, Any]]
    fits: dict[float, ConstantFit]
    breakdowns: list[dict[str, Any]]

    @property
    def violations(self) -> int:
        return sum(f.violations for f in self.fits.values())


def _rows_for_cover(
    cover: BallCover,
    gauges: Mapping[float, Gauge],
    n: int,
    delta: LogNum,
    ensemble: Ensemble,
    trial: int,
) -> list[dict[str, Any]]:
    rows: list[dict[str, Any]] = []
    for alpha, g in gauges.items():
        content = extended_content(cover, g)
        shape = lemniscate_bound_rhs(alpha, delta, n, breakdown=False).shape
        rows.append(
            {
                "alpha": alpha,
                "n": n,
                "ensemble": ensemble,
                "trial": trial,
                "ln_delta": delta.ln_mag,
                "balls": len(cover.balls),
                "ln_content": content.ln_mag,
                "ln_shape": shape.ln_mag,
                "ratio": math.exp(content.ln_mag - shape.ln_mag),
            }
        )
    return rows


def lemniscate_suite(
    alphas: Sequence[float],
    degrees: Sequence[int],
    ln_deltas: Sequence[float],
    trials: int,
    seed: int,
    *,
    ensembles: Sequence[Ensemble] = ENSEMBLES[:2],
    fit_max_n: int | None = None,
) -> LemniscateSuite:
    """Empirical contents against the constant-free bound, one fitted C per alpha."""
    gauges = {alpha: HAlpha(alpha=alpha) for alpha in alphas}
    instances: list[Instance] = list(
        itertools.product(enumerate(degrees), enumerate(ensembles), range(trials))
    )

    def run(instance: Instance) -> list[dict[str, Any]]:
        (ni, n), (ei, ensemble), trial = instance
        p = random_polynomial(n, ensemble, trial_rng(seed, ni, ei, trial))
        rows: list[dict[str, Any]] = []
        for ln_delta in ln_deltas:
            delta = LogNum(1, ln_delta)
            cover, _ = empirical_lemniscate_content(p, delta, gauges[alphas[0]])
            rows.extend(_rows_for_cover(cover, gauges, n, delta, ensemble, trial))
        return rows

    rows = [row for chunk in parallel_map(run, instances) for row in chunk]
    fits: dict[float, ConstantFit] = {}
    for alpha in alphas:
        mine = [r for r in rows if r["alpha"] == alpha]
        fits[alpha] = fit_constant(
            [r["ratio"] for r in mine],
            [fit_max_n is None or r["n"] <= fit_max_n for r in mine],
        )
        logger.info("lemniscate_fit", alpha=alpha, **fits[alpha].to_dict())
    return LemniscateSuite(rows, fits, _breakdowns(alphas, degrees, ln_deltas))


def _breakdowns(
    alphas: Sequence[float], degrees: Sequence[int], ln_deltas: Sequence[float]
) -> list[dict[str, Any]]:
    out: list[dict[str, Any]] = []
    for alpha, n, ln_delta in itertools.product(alphas, degrees, ln_deltas):
        entry: dict[str, Any] = {"alpha": alpha, "n": n, "ln_delta": ln_delta}
        try:
            breakdown = lemniscate_bound_rhs(alpha, LogNum(1, ln_delta), n).breakdown
        except NoRoot:
            logger.warning("breakdown_unsolvable", alpha=alpha, n=n, ln_delta=ln_delta)
            breakdown = None
        entry["breakdown"] = None if breakdown is None else breakdown.to_dict()
        entry["xi_in_bracket"] = None if breakdown is None else breakdown.xi_in_bracket
        out.append(entry)
    return out

"""
Remez inequality at content scale and the Jensen zero count.

The Remez ratio sup_{D_1}|P| / sup_E|P| is checked against
12^n exp{C n^2 (ln(n+e))^{-2 alpha/3} / c^2}, c the certified h_alpha content
of E. The sup over E is taken on a finite point sample, which can only
underestimate it, so every check errs on the safe side.
"""

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import NDArray

from obslab.errors import DegenerateSet
from obslab.fitting import ConstantFit, fit_constant
from obslab.fractal import MeasuredSet, frostman_lower
from obslab.gauge import HAlpha
from obslab.lemniscate.polynomial import (
    ENSEMBLES,
    Ensemble,
    Polynomial,
    random_polynomial,
)
from obslab.parallel import parallel_map, trial_rng
from obslab.remez.sup import ln_sup_points, sup_disc

logger = structlog.get_logger(__name__)

LN12: Final = math.log(12.0)
LN2: Final = math.log(2.0)


def remez_growth(n: int, alpha: float) -> float:
    """n^2 (ln(n+e))^{-2 alpha/3}."""
    return n * n * math.log(n + math.e) ** (-2 * alpha / 3)


def certified_content(points_set: MeasuredSet, alpha: float) -> float:
    """Frostman lower bound of the h_alpha content; DegenerateSet when it vanishes."""
    c = frostman_lower(points_set, HAlpha(alpha=alpha)).lower_bound.to_real()
    if c <= 0:
        msg = f"observation set has zero empirical h_{alpha} content"
        raise DegenerateSet(msg)
    return c


@dataclass(frozen=True)
class RemezReport:
    """
    Attributes:
        rows: per-trial ratio and bound
        fit: fitted constant and violations
        content: certified content c of E
        max_ratio_ln: largest observed ln ratio
    """

    rows: list[dict[str, Any]]
    fit: ConstantFit
    content: float
    max_ratio_ln: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "content": self.content,
            "max_ratio_ln": self.max_ratio_ln,
            **self.fit.to_dict(),
        }


def remez_ratio_ln(p: Polynomial, e_points: NDArray[np.float64]) -> float:
    """ln of the upper disc sup over the sample sup."""
    return sup_disc(p, 1.0).upper.ln_mag - ln_sup_points(p, e_points)


def remez_experiment(
    degrees: Sequence[int],
    e_set: MeasuredSet,
    alpha: float,
    trials: int,
    seed: int,
    *,
    ensembles: Sequence[Ensemble] = ENSEMBLES,
    fit_max_n: int | None = None,
) -> RemezReport:
    """Random polynomials against the Remez bound; C fitted on degrees <= fit_max_n."""
    c = certified_content(e_set, alpha)
    e_points = e_set.sample_points()
    instances = list(itertools.product(enumerate(degrees), range(trials)))

    def run(instance: tuple[tuple[int, int], int]) -> dict[str, Any]:
        (ni, n), trial = instance
        ensemble = ensembles[trial % len(ensembles)]
        p = random_polynomial(n, ensemble, trial_rng(seed, ni, trial))
        ratio_ln = remez_ratio_ln(p, e_points)
        required = max(0.0, ratio_ln - n * LN12) * c * c / remez_growth(n, alpha)
        return {
            "trial": trial,
            "n": n,
            "ensemble": ensemble,
            "ratio_ln": ratio_ln,
            "required_C": required,
        }

    rows = parallel_map(run, instances)
    fit = fit_constant(
        [r["required_C"] for r in rows],
        [fit_max_n is None or r["n"] <= fit_max_n for r in rows],
    )
    for r in rows:
        r["rhs_ln"] = r["n"] * LN12 + fit.constant * remez_growth(r["n"], alpha) / c**2
        r["pass"] = r["ratio_ln"] <= r["rhs_ln"] * (1 + 1e-12) + 1e-12
    logger.info("remez_fit", alpha=alpha, content=c, **fit.to_dict())
    return RemezReport(rows, fit, c, max(r["ratio_ln"] for r in rows))


@dataclass(frozen=True)
class JensenCheck:
    """
    Attributes:
        m: zeros with |z| <= 2
        bound: ln sup_{D_4}|P| / ln 2 after normalizing |P(0)| = 1
    """

    m: int
    bound: float

    @property
    def holds(self) -> bool:
        return self.m <= self.bound + 1e-12


def jensen_zero_bound(p: Polynomial) -> JensenCheck:
    """Zero count in D_2 against ln M / ln 2, M = sup over D_4 with |P(0)| = 1."""
    q = p.rescaled_at_origin()
    m = int(np.count_nonzero(np.abs(q.roots) <= 2.0))
    bound = sup_disc(q, 4.0).value.ln_mag / LN2
    return JensenCheck(m, bound)


def jensen_suite(
    degrees: Sequence[int],
    trials: int,
    seed: int,
    ensembles: Sequence[Ensemble] = ENSEMBLES,
) -> list[dict[str, Any]]:
    instances = list(itertools.product(enumerate(degrees), range(trials)))

    def run(instance: tuple[tuple[int, int], int]) -> dict[str, Any]:
        (ni, n), trial = instance
        ensemble = ensembles[trial % len(ensembles)]
        p = random_polynomial(n, ensemble, trial_rng(seed, ni, trial))
        check = jensen_zero_bound(p)
        return {
            "trial": trial,
            "n": n,
            "ensemble": ensemble,
            "m": check.m,
            "bound": check.bound,
            "pass": check.holds,
        }

    return parallel_map(run, instances)

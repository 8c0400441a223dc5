"""
Two-sided estimates of gauge Hausdorff content.

content_upper sums the gauge over a level cover. frostman_lower applies the
mass-distribution principle: with A = max mu(B)/g(d(B)) over the sampled
ball family, c_g(E) >= mu(E)/A. The lower bound is certified only over the
sampled balls and is reported as an empirical Frostman constant.

Classes:
    FrostmanBall: Worst ball found around one center
    FrostmanCertificate: Ball sample, A2_hat and the resulting lower bound
    SubdivisionReport: Best-piece content against the whole-set content
"""

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import structlog

from obslab.fractal.base import BallProfile, MeasuredSet
from obslab.fractal.cantor import CantorLevel
from obslab.gauge import Gauge, LogNum
from obslab.parallel import parallel_map

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class FrostmanBall:
    """
    Attributes:
        center: float center position
        ln_diameter: ln d(B)
        mass: mass upper bound of B
        ln_gauge: ln g(d(B))
    """

    center: float
    ln_diameter: float
    mass: float
    ln_gauge: float

    @property
    def ln_ratio(self) -> float:
        return math.log(self.mass) - self.ln_gauge if self.mass > 0 else -math.inf


@dataclass(frozen=True)
class FrostmanCertificate:
    """
    Attributes:
        balls: worst ball per sampled center
        ln_a2: ln of the largest mass ratio (A2_hat)
        total_mass: mu(E)
        lower_bound: mu(E)/A2_hat
    """

    balls: tuple[FrostmanBall, ...]
    ln_a2: float
    total_mass: float
    lower_bound: LogNum

    @property
    def a2_hat(self) -> float:
        return math.exp(self.ln_a2)

    def to_dict(self, max_balls: int = 32) -> dict[str, Any]:
        worst = sorted(self.balls, key=lambda b: b.ln_ratio, reverse=True)[:max_balls]
        return {
            "label": "empirical Frostman constant",
            "ln_a2_hat": self.ln_a2,
            "total_mass": self.total_mass,
            "lower_bound": self.lower_bound.to_dict(),
            "sampled_centers": len(self.balls),
            "worst_balls": [
                {
                    "center": b.center,
                    "ln_diameter": b.ln_diameter,
                    "mass": b.mass,
                    "ln_gauge": b.ln_gauge,
                }
                for b in worst
            ],
        }


def content_upper(level: MeasuredSet, g: Gauge) -> LogNum:
    """Sum of g over the atoms of the level, an upper bound for c_g of the limit set."""
    return level.cover_sum(g)


def _worst_ball(profile: BallProfile, g: Gauge) -> FrostmanBall:
    ln_g = g.ln_value(profile.ln_diameters)
    with np.errstate(divide="ignore"):
        ln_ratio = np.log(profile.masses) - ln_g
    i = int(np.argmax(ln_ratio))
    return FrostmanBall(
        center=profile.center,
        ln_diameter=float(profile.ln_diameters[i]),
        mass=float(profile.masses[i]),
        ln_gauge=float(ln_g[i]),
    )


def frostman_lower(level: MeasuredSet, g: Gauge) -> FrostmanCertificate:
    """Mass-distribution lower bound mu(E)/A2_hat over the set's ball family."""
    profiles = list(level.ball_profiles())
    if not profiles or level.total_mass <= 0:
        return FrostmanCertificate((), math.inf, 0.0, LogNum.zero())
    balls = tuple(parallel_map(lambda p: _worst_ball(p, g), profiles))
    ln_a2 = max(b.ln_ratio for b in balls)
    lower = LogNum(1, math.log(level.total_mass) - ln_a2)
    logger.debug(
        "frostman_lower",
        centers=len(balls),
        ln_a2_hat=ln_a2,
        lower_bound=lower.to_real(),
    )
    return FrostmanCertificate(balls, ln_a2, level.total_mass, lower)


@dataclass(frozen=True)
class SubdivisionReport:
    """
    Attributes:
        pieces: m0 = ceil(L)
        whole_lower: Frostman bound of the whole set
        piece_lowers: Frostman bound of each piece
        best_index: piece with the largest bound
        holds: best piece bound >= whole bound / m0
    """

    pieces: int
    whole_lower: LogNum
    piece_lowers: tuple[LogNum, ...]
    best_index: int
    holds: bool


def best_subinterval_content(level: CantorLevel, g: Gauge) -> SubdivisionReport:
    """
    Split the base interval into m0 = ceil(L) equal pieces of length <= 1.

    Atoms are assigned to the piece holding their left endpoint, so the
    pieces partition the measure and some piece keeps at least 1/m0 of it.
    """
    a, b = level.spec.base
    length = b - a
    m0 = max(1, math.ceil(length))
    lefts = level.left_floats()
    index = np.minimum(((lefts - a) / (length / m0)).astype(int), m0 - 1)
    whole = frostman_lower(level, g).lower_bound
    lowers = tuple(
        frostman_lower(level.select(index == j), g).lower_bound for j in range(m0)
    )
    best = max(range(m0), key=lambda j: lowers[j])
    holds = lowers[best].ln_mag >= whole.ln_mag - math.log(m0) - 1e-12
    return SubdivisionReport(m0, whole, lowers, best, holds)

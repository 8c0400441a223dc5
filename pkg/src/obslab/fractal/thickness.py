"""
Thickness of periodized sets.

A PeriodicSet repeats one cell set over the integers n with n mod period in
the occupied residues. The window E cap [x, x+L] keeps Cantor atoms that lie
fully inside the window, a subset of the true intersection, and clips
interval atoms exactly.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import structlog

from obslab.errors import ParamError
from obslab.fractal.base import MeasuredSet
from obslab.fractal.cantor import CantorLevel
from obslab.fractal.frostman import frostman_lower
from obslab.fractal.intervals import IntervalUnion
from obslab.gauge import Gauge

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class PeriodicSet:
    """
    Attributes:
        cell: set repeated at integer translates (inside [0, 1) for Cantor cells)
        period: repetition period in cells
        occupied: residues mod period that carry a copy
    """

    cell: CantorLevel | IntervalUnion
    period: int = 1
    occupied: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        if self.period < 1 or any(r < 0 or r >= self.period for r in self.occupied):
            msg = f"invalid periodization: {self.period=}, {self.occupied=}"
            raise ParamError(msg)

    def copies(self, lo: float, hi: float) -> list[int]:
        """Integer shifts whose copy can meet [lo, hi]."""
        first = math.floor(lo) - 1
        last = math.ceil(hi) + 1
        return [n for n in range(first, last + 1) if n % self.period in self.occupied]

    def window(self, x: float, length: float) -> MeasuredSet | None:
        lo, hi = x, x + length
        shifts = self.copies(lo, hi)
        if not shifts:
            return None
        if isinstance(self.cell, CantorLevel):
            tiled = self.cell.tiled(shifts)
            lefts = tiled.left_floats()
            rights = lefts + math.exp(tiled.ln_length)
            inside = (lefts >= lo) & (rights <= hi)
            if not inside.any():
                return None
            return tiled.select(inside)
        pieces = [self.cell.shifted(n).clipped(lo, hi) for n in shifts]
        lefts = np.concatenate([p.lefts for p in pieces])
        rights = np.concatenate([p.rights for p in pieces])
        if lefts.size == 0:
            return None
        return IntervalUnion(lefts=lefts, rights=rights)

    def sample_points(self, lo: float, hi: float) -> np.ndarray:
        points = [self.cell.sample_points() + n for n in self.copies(lo, hi)]
        if not points:
            return np.empty(0)
        merged = np.concatenate(points)
        return merged[(merged >= lo) & (merged <= hi)]


@dataclass(frozen=True)
class ThicknessReport:
    """
    Attributes:
        gamma_hat: min over sampled windows of lower_bound/L
        worst_window: x attaining the minimum
        window_gammas: per-window values in sample order
    """

    gamma_hat: float
    worst_window: float
    window_gammas: tuple[float, ...]


def thickness_report(
    window_set: PeriodicSet, g: Gauge, L: float, x_samples: Sequence[float]
) -> ThicknessReport:
    """Certified lower bound for the thickness constant over the sampled windows."""
    if L <= 0:
        msg = f"window length must be positive, got {L}"
        raise ParamError(msg)
    gammas: list[float] = []
    for x in x_samples:
        window = window_set.window(float(x), L)
        if window is None:
            logger.info("empty_window", x=x)
            gammas.append(0.0)
            continue
        lower = frostman_lower(window, g).lower_bound
        gammas.append(lower.to_real() / L)
    worst = int(np.argmin(gammas))
    return ThicknessReport(
        gamma_hat=gammas[worst],
        worst_window=float(x_samples[worst]),
        window_gammas=tuple(gammas),
    )

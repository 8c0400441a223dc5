from abc import ABC, abstractmethod
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from obslab.gauge import Gauge, LogNum


@dataclass(frozen=True, eq=False)
class BallProfile:
    """
    Candidate balls around one center with certified mass upper bounds.

    Attributes:
        center: float position of the center (for reports only)
        ln_diameters: ln of the ball diameters, nondecreasing
        masses: upper bound on the measure of each ball
    """

    center: float
    ln_diameters: NDArray[np.float64]
    masses: NDArray[np.float64]


class MeasuredSet(ABC):
    """Finite union of atoms carrying a measure, as seen by the content routines."""

    @property
    @abstractmethod
    def total_mass(self) -> float:
        """Measure of the whole set."""

    @property
    @abstractmethod
    def atom_count(self) -> int:
        """Number of atoms (intervals)."""

    @abstractmethod
    def atom_ln_lengths(self) -> NDArray[np.float64]:
        """ln of every atom length."""

    @abstractmethod
    def ball_profiles(self) -> Iterator[BallProfile]:
        """Ball family over which mass ratios are maximized."""

    @abstractmethod
    def sample_points(self) -> NDArray[np.float64]:
        """Float points of the set: atom endpoints and midpoints."""

    def cover_sum(self, gauge: Gauge) -> LogNum:
        """Sum of g over the atoms, each atom covered by itself."""
        lns = np.array(
            [gauge.eval_ln(float(ln_len)) for ln_len in self.atom_ln_lengths()]
        )
        if lns.size == 0:
            return LogNum.zero()
        return LogNum(1, float(np.logaddexp.reduce(lns)))

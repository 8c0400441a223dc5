"""Finite unions of intervals carrying a uniform density."""

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import Final, override

import numpy as np
from numpy.typing import NDArray

from obslab.errors import ParamError
from obslab.fractal.base import BallProfile, MeasuredSet

# extra dyadic radii below the smallest breakpoint
DYADIC_DEPTH: Final = 40


@dataclass(frozen=True, eq=False)
class IntervalUnion(MeasuredSet):
    """
    Disjoint closed intervals with measure density 1 (Lebesgue measure).

    Attributes:
        lefts: sorted left endpoints
        rights: right endpoints, rights[i] < lefts[i + 1]
    """

    lefts: NDArray[np.float64]
    rights: NDArray[np.float64]

    def __post_init__(self) -> None:
        if np.any(self.rights <= self.lefts):
            msg = "IntervalUnion needs every right endpoint above its left endpoint"
            raise ParamError(msg)
        if np.any(self.lefts[1:] <= self.rights[:-1]):
            msg = "IntervalUnion intervals must be sorted and disjoint"
            raise ParamError(msg)

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, float]]) -> "IntervalUnion":
        ordered = sorted(pairs)
        return cls(
            lefts=np.array([p[0] for p in ordered], dtype=float),
            rights=np.array([p[1] for p in ordered], dtype=float),
        )

    @property
    def lengths(self) -> NDArray[np.float64]:
        return self.rights - self.lefts

    @property
    @override
    def atom_count(self) -> int:
        return int(self.lefts.size)

    @property
    @override
    def total_mass(self) -> float:
        return float(self.lengths.sum())

    @override
    def atom_ln_lengths(self) -> NDArray[np.float64]:
        return np.log(self.lengths)

    @override
    def sample_points(self) -> NDArray[np.float64]:
        return np.unique(
            np.concatenate([self.lefts, (self.lefts + self.rights) / 2, self.rights])
        )

    def clipped(self, lo: float, hi: float) -> "IntervalUnion":
        lefts = np.maximum(self.lefts, lo)
        rights = np.minimum(self.rights, hi)
        keep = rights > lefts
        return IntervalUnion(lefts=lefts[keep], rights=rights[keep])

    def shifted(self, offset: float) -> "IntervalUnion":
        return IntervalUnion(lefts=self.lefts + offset, rights=self.rights + offset)

    def ball_masses(
        self, center: float, radii: NDArray[np.float64]
    ) -> NDArray[np.float64]:
        """Exact Lebesgue measure of E within [center - r, center + r]."""
        lo = center - radii[:, None]
        hi = center + radii[:, None]
        overlap = np.minimum(hi, self.rights[None, :]) - np.maximum(
            lo, self.lefts[None, :]
        )
        return np.clip(overlap, 0.0, None).sum(axis=1)

    @override
    def ball_profiles(self) -> Iterator[BallProfile]:
        if self.atom_count == 0:
            return
        endpoints = np.concatenate([self.lefts, self.rights])
        centers = np.concatenate(
            [
                endpoints,
                (self.lefts + self.rights) / 2,
                (self.rights[:-1] + self.lefts[1:]) / 2,
            ]
        )
        span = float(self.rights[-1] - self.lefts[0])
        r_min = float(self.lengths.min()) * 2.0**-DYADIC_DEPTH
        dyadic = span * 2.0 ** -np.arange(math.ceil(math.log2(span / r_min)) + 1)
        for center in centers:
            breaks = np.abs(endpoints - center)
            radii = np.unique(np.concatenate([breaks, dyadic]))
            radii = radii[(radii >= r_min) & (radii <= span)]
            masses = self.ball_masses(float(center), radii)
            yield BallProfile(
                center=float(center),
                ln_diameters=np.log(2.0 * radii),
                masses=masses,
            )

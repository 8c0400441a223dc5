"""
Sup-norm estimates on discs, intervals and point samples.

Classes:
    SupEstimate: Grid maximum with a derivative-bound slack
    Analytic: Anything exposing ln|phi(z)| on complex arrays
"""

import math
from dataclasses import dataclass
from typing import Any, Final, Protocol

import numpy as np
from numpy.typing import ArrayLike, NDArray

from obslab.errors import DomainError
from obslab.gauge import LogNum
from obslab.lemniscate.polynomial import Polynomial

MIN_CIRCLE_POINTS: Final = 4096
POINTS_PER_DEGREE: Final = 64


class Analytic(Protocol):
    def ln_abs(self, z: ArrayLike) -> NDArray[np.float64]: ...


@dataclass(frozen=True)
class SupEstimate:
    """
    Attributes:
        value: grid maximum, a lower bound for the sup
        grid_points: number of grid points
        lipschitz_slack: the true sup lies in [value, value + slack]
    """

    value: LogNum
    grid_points: int
    lipschitz_slack: LogNum

    @property
    def upper(self) -> LogNum:
        return self.value + self.lipschitz_slack

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value.to_dict(),
            "grid_points": self.grid_points,
            "lipschitz_slack": self.lipschitz_slack.to_dict(),
        }


def circle_points(
    radius: float, m: int, center: complex = 0j
) -> NDArray[np.complex128]:
    return center + radius * np.exp(2j * np.pi * np.arange(m) / m)


def sup_disc(p: Polynomial, radius: float, points: int | None = None) -> SupEstimate:
    """
    Maximum of |P| over the boundary circle.

    Between two grid points at angular spacing 2 pi/M, Bernstein's inequality
    |P'| <= (n/R) max|P| bounds the loss by value * x/(1 - x), x = n pi/M.
    """
    if radius <= 0:
        msg = f"radius must be positive, got {radius}"
        raise DomainError(msg)
    n = p.degree
    m = points or max(MIN_CIRCLE_POINTS, POINTS_PER_DEGREE * n)
    ln_max = float(p.ln_abs(circle_points(radius, m)).max())
    value = LogNum(1, ln_max)
    x = n * math.pi / m
    if n == 0:
        slack = LogNum.zero()
    elif x >= 1:
        slack = LogNum(1, math.inf)
    else:
        slack = LogNum(1, ln_max + math.log(x) - math.log1p(-x))
    return SupEstimate(value, m, slack)


def ln_sup_circle(f: Analytic, radius: float, points: int = MIN_CIRCLE_POINTS) -> float:
    """ln max|f| over the circle, which is the disc sup by maximum modulus."""
    return float(np.max(f.ln_abs(circle_points(radius, points))))


def ln_sup_points(f: Analytic, x: ArrayLike) -> float:
    """ln max|f| over a finite real point sample."""
    values = f.ln_abs(np.asarray(x, dtype=float).astype(complex))
    return float(np.max(values)) if values.size else -math.inf

"""
Sign and log-magnitude numbers.

A LogNum stores a real number as (sign, ln|x|) so products and sums of
quantities such as exp(-q^{2.25}) never underflow. Addition of like signs
is a log-sum-exp; opposite signs go through log1p(-exp(.)).

Classes:
    LogNum: Immutable signed log-domain real

Constants:
    LOG_ZERO: ln-magnitude encoding zero
"""

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Final, Self

import numpy as np

LOG_ZERO: Final = -math.inf
ERR_SIGN: Final = "sign must be -1, 0 or +1"


@total_ordering
@dataclass(frozen=True)
class LogNum:
    """
    Real number carried as sign and natural log of its magnitude.

    Attributes:
        sign: -1, 0 or +1
        ln_mag: ln|x|; -inf encodes zero
    """

    sign: int
    ln_mag: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(ERR_SIGN)
        if self.sign == 0 and self.ln_mag != LOG_ZERO:
            object.__setattr__(self, "ln_mag", LOG_ZERO)
        if self.ln_mag == LOG_ZERO and self.sign != 0:
            object.__setattr__(self, "sign", 0)

    @classmethod
    def zero(cls) -> Self:
        return cls(0, LOG_ZERO)

    @classmethod
    def one(cls) -> Self:
        return cls(1, 0.0)

    @classmethod
    def from_real(cls, x: float) -> Self:
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_ln(cls, ln_mag: float, sign: int = 1) -> Self:
        return cls(sign, ln_mag)

    def to_real(self) -> float:
        """Plain float value; overflows to +-inf and underflows to 0."""
        if self.sign == 0:
            return 0.0
        if self.ln_mag > 709.78:  # noqa: PLR2004
            return math.copysign(math.inf, self.sign)
        return self.sign * math.exp(self.ln_mag)

    def is_zero(self) -> bool:
        return self.sign == 0

    def __neg__(self) -> "LogNum":
        return LogNum(-self.sign, self.ln_mag)

    def __abs__(self) -> "LogNum":
        return LogNum(abs(self.sign), self.ln_mag)

    def __add__(self, other: "LogNum | float") -> "LogNum":
        other = _coerce(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.ln_mag >= other.ln_mag else (other, self)
        gap = small.ln_mag - big.ln_mag
        if big.sign == small.sign:
            return LogNum(big.sign, float(np.logaddexp(big.ln_mag, small.ln_mag)))
        if gap == 0.0:
            return LogNum.zero()
        return LogNum(big.sign, big.ln_mag + math.log1p(-math.exp(gap)))

    __radd__ = __add__

    def __sub__(self, other: "LogNum | float") -> "LogNum":
        return self + (-_coerce(other))

    def __rsub__(self, other: "LogNum | float") -> "LogNum":
        return _coerce(other) - self

    def __mul__(self, other: "LogNum | float") -> "LogNum":
        other = _coerce(other)
        if self.sign == 0 or other.sign == 0:
            return LogNum.zero()
        return LogNum(self.sign * other.sign, self.ln_mag + other.ln_mag)

    __rmul__ = __mul__

    def __truediv__(self, other: "LogNum | float") -> "LogNum":
        other = _coerce(other)
        if other.sign == 0:
            msg = "division of LogNum by zero"
            raise ZeroDivisionError(msg)
        if self.sign == 0:
            return LogNum.zero()
        return LogNum(self.sign * other.sign, self.ln_mag - other.ln_mag)

    def __rtruediv__(self, other: "LogNum | float") -> "LogNum":
        return _coerce(other) / self

    def __pow__(self, power: float) -> "LogNum":
        if self.sign == 0:
            return LogNum.zero() if power > 0 else LogNum.one()
        if self.sign < 0 and not float(power).is_integer():
            msg = "fractional power of a negative LogNum"
            raise ValueError(msg)
        sign = -1 if self.sign < 0 and int(power) % 2 else 1
        return LogNum(sign, self.ln_mag * power)

    def __lt__(self, other: "LogNum | float") -> bool:
        other = _coerce(other)
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.sign > 0:
            return self.ln_mag < other.ln_mag
        return self.ln_mag > other.ln_mag

    def to_dict(self) -> dict[str, float | int | None]:
        """Report form: ln-magnitude always, decimal when representable."""
        real = self.to_real()
        return {
            "sign": self.sign,
            "ln_mag": None if self.sign == 0 else self.ln_mag,
            "value": (
                real if self.sign == 0 or (math.isfinite(real) and real != 0) else None
            ),
        }

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        real = self.to_real()
        if math.isfinite(real) and real != 0:
            return f"{real:.12g}"
        return f"{'-' if self.sign < 0 else ''}exp({self.ln_mag:.12g})"


def _coerce(value: "LogNum | float") -> LogNum:
    if isinstance(value, LogNum):
        return value
    return LogNum.from_real(float(value))


def log_sum(values: "list[LogNum]") -> LogNum:
    """Sum of LogNums; like-signed terms are combined with one logsumexp."""
    total = LogNum.zero()
    for sign in (1, -1):
        lns = [v.ln_mag for v in values if v.sign == sign]
        if lns:
            part = LogNum(sign, float(np.logaddexp.reduce(np.asarray(lns))))
            total = total + part
    return total

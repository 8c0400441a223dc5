"""
Iterated-exponential numbers for magnitudes past the float range.

A Tower is sign * exp^height(top). Height zero is an ordinary float; a
positive height is used only when the level below overflows, so magnitudes
order lexicographically by (height, top). This carries quantities such as
ln q_5 = exp(exp(2.4e89)) of the non-observable set construction.

Classes:
    Tower: Signed power-tower number

Constants:
    LN_MAX: Largest argument of exp that stays finite
"""

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Final, Self

LN_MAX: Final = math.log(1.7976931348623157e308)
# below this relative gap a smaller summand no longer changes the larger
NEGLIGIBLE_LN_GAP: Final = -745.0


@total_ordering
@dataclass(frozen=True)
class Tower:
    """
    Signed number sign * exp^height(top).

    Attributes:
        sign: -1, 0 or +1
        height: number of stacked exponentials
        top: innermost float; for height >= 1 it exceeds LN_MAX
    """

    sign: int
    height: int
    top: float

    def __post_init__(self) -> None:
        sign, height, top = self.sign, self.height, abs(self.top)
        while height >= 1 and top <= LN_MAX:
            top = math.exp(top)
            height -= 1
        if top == 0.0:
            sign = 0
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "height", height)
        object.__setattr__(self, "top", top)

    @classmethod
    def from_float(cls, x: float) -> Self:
        if x == 0:
            return cls(0, 0, 0.0)
        return cls(1 if x > 0 else -1, 0, abs(x))

    @classmethod
    def from_ln(cls, ln_mag: "Tower | float", sign: int = 1) -> Self:
        """Number with |x| = exp(ln_mag); magnitudes below e^-745 become zero."""
        ln_mag = _coerce(ln_mag)
        if ln_mag.sign < 0:
            if ln_mag.height == 0:
                return cls(sign, 0, math.exp(-ln_mag.top))
            return cls(0, 0, 0.0)
        if ln_mag.height == 0:
            if ln_mag.top > LN_MAX:
                return cls(sign, 1, ln_mag.top)
            return cls(sign, 0, math.exp(ln_mag.signed_top()))
        return cls(sign, ln_mag.height + 1, ln_mag.top)

    def signed_top(self) -> float:
        return self.sign * self.top

    def is_zero(self) -> bool:
        return self.sign == 0

    def to_float(self) -> float:
        if self.height == 0:
            return self.signed_top()
        return math.copysign(math.inf, self.sign)

    def ln(self) -> "Tower":
        """Natural log of |x|."""
        if self.sign == 0:
            msg = "ln of zero Tower"
            raise ValueError(msg)
        if self.height == 0:
            return Tower.from_float(math.log(self.top))
        return Tower(1, self.height - 1, self.top)

    def exp(self) -> "Tower":
        return Tower.from_ln(self)

    def __neg__(self) -> "Tower":
        return Tower(-self.sign, self.height, self.top)

    def __abs__(self) -> "Tower":
        return Tower(abs(self.sign), self.height, self.top)

    def _magnitude_key(self) -> tuple[int, float]:
        return (self.height, self.top)

    def __add__(self, other: "Tower | float") -> "Tower":
        other = _coerce(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        if self.height == 0 and other.height == 0:
            total = self.signed_top() + other.signed_top()
            if math.isfinite(total):
                return Tower.from_float(total)
        big, small = (
            (self, other)
            if self._magnitude_key() >= other._magnitude_key()
            else (other, self)
        )
        gap = (small.ln() - big.ln()).to_float()
        if gap < NEGLIGIBLE_LN_GAP:
            return big
        if big.sign == small.sign:
            correction = math.log1p(math.exp(gap))
        elif gap == 0.0:
            return Tower(0, 0, 0.0)
        else:
            correction = math.log1p(-math.exp(gap))
        return Tower.from_ln(big.ln() + correction, big.sign)

    __radd__ = __add__

    def __sub__(self, other: "Tower | float") -> "Tower":
        return self + (-_coerce(other))

    def __rsub__(self, other: "Tower | float") -> "Tower":
        return _coerce(other) - self

    def __mul__(self, other: "Tower | float") -> "Tower":
        other = _coerce(other)
        if self.sign == 0 or other.sign == 0:
            return Tower(0, 0, 0.0)
        if self.height == 0 and other.height == 0:
            product = self.signed_top() * other.signed_top()
            if math.isfinite(product) and product != 0.0:
                return Tower.from_float(product)
        return Tower.from_ln(self.ln() + other.ln(), self.sign * other.sign)

    __rmul__ = __mul__

    def __lt__(self, other: "Tower | float") -> bool:
        other = _coerce(other)
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.sign > 0:
            return self._magnitude_key() < other._magnitude_key()
        return self._magnitude_key() > other._magnitude_key()

    def to_dict(self) -> dict[str, float | int]:
        return {"sign": self.sign, "height": self.height, "top": self.top}

    def __str__(self) -> str:
        if self.height == 0:
            return f"{self.signed_top():.12g}"
        prefix = "-" if self.sign < 0 else ""
        return f"{prefix}exp^{self.height}({self.top:.12g})"


def _coerce(value: "Tower | float") -> Tower:
    if isinstance(value, Tower):
        return value
    return Tower.from_float(float(value))

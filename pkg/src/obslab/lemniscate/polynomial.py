"""
Complex polynomials stored by leading coefficient and roots.

Classes:
    Polynomial: A * prod(z - z_j)

Constants:
    ENSEMBLES: Random root ensembles used by the polynomial experiments
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Final, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from obslab.errors import ParamError

Ensemble = Literal["disc", "cluster", "circle"]
ENSEMBLES: Final[tuple[Ensemble, ...]] = ("disc", "cluster", "circle")


@dataclass(frozen=True, eq=False)
class Polynomial:
    """
    Attributes:
        leading: leading coefficient A
        roots: zeros z_1..z_n, repeated by multiplicity
    """

    leading: complex
    roots: NDArray[np.complex128]

    @classmethod
    def monic(cls, roots: Sequence[complex] | NDArray[np.complex128]) -> "Polynomial":
        return cls(1.0 + 0j, np.asarray(roots, dtype=complex))

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[complex]) -> "Polynomial":
        """Coefficients from highest degree down, as numpy.polyval expects."""
        c = np.trim_zeros(np.asarray(coeffs, dtype=complex), trim="f")
        if c.size == 0:
            msg = "zero polynomial has no root representation"
            raise ParamError(msg)
        return cls(complex(c[0]), np.roots(c).astype(complex))

    @property
    def degree(self) -> int:
        return int(self.roots.size)

    def coefficients(self) -> NDArray[np.complex128]:
        return self.leading * np.poly(self.roots)

    def __call__(self, z: ArrayLike) -> NDArray[np.complex128]:
        z_arr = np.asarray(z, dtype=complex)
        return self.leading * np.prod(z_arr[..., None] - self.roots, axis=-1)

    def horner(self, z: ArrayLike) -> NDArray[np.complex128]:
        return np.polyval(self.coefficients(), np.asarray(z, dtype=complex))

    def ln_abs(self, z: ArrayLike) -> NDArray[np.float64]:
        """ln|P(z)| as a sum of logs, finite far beyond float range of |P|."""
        z_arr = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            return np.log(abs(self.leading)) + np.log(
                np.abs(z_arr[..., None] - self.roots)
            ).sum(axis=-1)

    def rescaled_at_origin(self) -> "Polynomial":
        """Same roots with |P(0)| = 1."""
        value = abs(complex(self(0.0)))
        if value == 0:
            msg = "P(0) = 0 cannot be normalized"
            raise ParamError(msg)
        return Polynomial(self.leading / value, self.roots)


def random_roots(
    n: int, ensemble: Ensemble, rng: np.random.Generator
) -> NDArray[np.complex128]:
    """Roots i.i.d. uniform in D_2, all at one point of D_1, or on the unit circle."""
    match ensemble:
        case "disc":
            radius = 2.0 * np.sqrt(rng.random(n))
            return radius * np.exp(2j * np.pi * rng.random(n))
        case "cluster":
            point = np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
            return np.full(n, point, dtype=complex)
        case "circle":
            return np.exp(2j * np.pi * rng.random(n))


def random_polynomial(
    n: int, ensemble: Ensemble, rng: np.random.Generator
) -> Polynomial:
    return Polynomial.monic(random_roots(n, ensemble, rng))

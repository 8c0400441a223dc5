"""
Dirichlet eigen-expansions on (0, L).

phi(x) = sum_k c_k sin(k pi x / L), lambda_k = (k pi / L)^2, so
||phi||^2_{L^2(0,L)} = (L/2) sum c_k^2. Coefficients are stored as sign and
ln|c_k| so that heat-evolved vectors keep their smallest modes.

Classes:
    SpectralVector: Coefficients of an element of E_lambda
"""

import math
from dataclasses import dataclass
from typing import Final

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln, logsumexp

from obslab.errors import BoundViolation, EmptySpace, ParamError, TailError
from obslab.gauge import LogNum
from obslab.remez.sup import SupEstimate

logger = structlog.get_logger(__name__)

MIN_GRID: Final = 4096
GRID_PER_MODE: Final = 8
BOUND_RTOL: Final = 1e-9
TAYLOR_ORDER: Final = 160
TAYLOR_RADIUS: Final = 6.0
# Taylor remainder allowed relative to the partial sum
TAYLOR_RTOL: Final = 1e-8


def dimension(lam: float, L: float) -> int:
    """K = floor(sqrt(lambda) L / pi), the dimension of E_lambda."""
    return math.floor(math.sqrt(lam) * L / math.pi + 1e-12)


@dataclass(frozen=True, eq=False)
class SpectralVector:
    """
    Attributes:
        L: interval length
        ln_coeffs: ln|c_k|, k = 1..K
        signs: sign of c_k
    """

    L: float
    ln_coeffs: NDArray[np.float64]
    signs: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.L <= 0:
            msg = f"interval length must be positive, got {self.L}"
            raise ParamError(msg)

    @classmethod
    def from_coeffs(cls, L: float, coeffs: ArrayLike) -> "SpectralVector":
        c = np.asarray(coeffs, dtype=float)
        with np.errstate(divide="ignore"):
            return cls(L, np.log(np.abs(c)), np.sign(c))

    @property
    def K(self) -> int:
        return int(self.ln_coeffs.size)

    @property
    def coeffs(self) -> NDArray[np.float64]:
        return self.signs * np.exp(self.ln_coeffs)

    @property
    def frequencies(self) -> NDArray[np.float64]:
        return np.arange(1, self.K + 1) * math.pi / self.L

    @property
    def eigenvalues(self) -> NDArray[np.float64]:
        return self.frequencies**2

    def ln_l2_norm(self) -> float:
        """ln ||phi||_{L^2(0,L)}."""
        return 0.5 * (math.log(self.L / 2) + float(logsumexp(2 * self.ln_coeffs)))

    def ln_coeff_norm(self) -> float:
        """ln of the Euclidean norm of the coefficients."""
        return 0.5 * float(logsumexp(2 * self.ln_coeffs))

    def truncated(self, K: int) -> "SpectralVector":
        return SpectralVector(self.L, self.ln_coeffs[:K], self.signs[:K])

    def normalized(self) -> "SpectralVector":
        return SpectralVector(self.L, self.ln_coeffs - self.ln_l2_norm(), self.signs)

    def growth_bound_ln(self, z_abs: ArrayLike, m: int = 0) -> NDArray[np.float64]:
        """ln of ||c|| sqrt(K) lambda_K^{m/2} e^{sqrt(lambda_K)|z|}."""
        top = self.K * math.pi / self.L
        return (
            self.ln_coeff_norm()
            + 0.5 * math.log(self.K)
            + m * math.log(top)
            + top * np.asarray(z_abs, dtype=float)
        )

    def _scaled(self, z: ArrayLike, m: int) -> tuple[NDArray[np.complex128], float]:
        """phi^{(m)}(z) e^{-shift}, shift = max ln|c_k|, checked against the bound."""
        z_arr = np.asarray(z, dtype=complex)
        finite = self.ln_coeffs[np.isfinite(self.ln_coeffs)]
        if finite.size == 0:
            return np.zeros(z_arr.shape, dtype=complex), 0.0
        shift = float(finite.max())
        w = self.frequencies
        scaled = self.signs * np.exp(self.ln_coeffs - shift) * w**m
        with np.errstate(over="ignore", invalid="ignore"):
            values = np.sin(z_arr[..., None] * w + m * math.pi / 2) @ scaled
        if not np.all(np.isfinite(values)):
            msg = f"non-finite expansion value for K={self.K}"
            raise TailError(msg)
        with np.errstate(divide="ignore"):
            ln_values = np.log(np.abs(values)) + shift
        if np.any(ln_values > self.growth_bound_ln(np.abs(z_arr), m) + BOUND_RTOL):
            logger.error("growth_bound_violated", K=self.K, m=m)
            msg = f"|phi^({m})| exceeds its growth bound"
            raise BoundViolation(msg)
        return values, shift

    def evaluate(self, z: ArrayLike, m: int = 0) -> NDArray[np.complex128]:
        """
        phi^{(m)}(z) = sum c_k (k pi/L)^m sin(k pi z/L + m pi/2) on complex z.

        Every value is checked against the Cauchy-Schwarz growth bound.
        """
        values, shift = self._scaled(z, m)
        return values * math.exp(shift)

    def ln_abs(self, z: ArrayLike, m: int = 0) -> NDArray[np.float64]:
        """ln|phi^{(m)}(z)| of the entire extension, free of underflow."""
        values, shift = self._scaled(z, m)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(values)) + shift

    def taylor_tail_ln(self, order: int, radius: float = TAYLOR_RADIUS) -> float:
        """
        ln of a bound on the Taylor remainder past z^{order-1} on |z| <= radius:
        sum_k |c_k| (w_k R)^order / order! / (1 - w_k R / (order + 1)).
        """
        wr = self.frequencies * radius
        if order < 1 or np.any(wr >= order + 1):
            return math.inf
        terms = (
            self.ln_coeffs
            + order * np.log(wr)
            - gammaln(order + 1)
            - np.log1p(-wr / (order + 1))
        )
        return float(logsumexp(terms))

    def certify_taylor(
        self, order: int = TAYLOR_ORDER, radius: float = TAYLOR_RADIUS
    ) -> float:
        """
        Check that the series truncated at z^{order-1} stays within TAYLOR_RTOL of
        its own sup on the disc of the given radius; returns the ln ratio.

        Raises:
            TailError: remainder bound above TAYLOR_RTOL of the partial sum
        """
        ln_tail = self.taylor_tail_ln(order, radius)
        circle = radius * np.exp(2j * np.pi * np.arange(MIN_GRID) / MIN_GRID)
        ln_sup = float(self.ln_abs(circle).max())
        # the partial sum is at least sup|phi| - tail on the circle
        ln_ratio = (
            ln_tail - (LogNum(1, ln_sup) - LogNum(1, ln_tail)).ln_mag
            if ln_tail < ln_sup
            else math.inf
        )
        if ln_ratio > math.log(TAYLOR_RTOL):
            logger.error(
                "taylor_tail_too_large", K=self.K, order=order, ln_tail=ln_tail
            )
            msg = f"Taylor tail e^{ln_tail:.3g} at order {order} for K={self.K}"
            raise TailError(msg)
        return ln_ratio

    def sup_interval(self, a: float, b: float) -> SupEstimate:
        """Grid sup over [a, b] with slack h/2 * sum |c_k| k pi / L."""
        m = max(MIN_GRID, GRID_PER_MODE * self.K)
        ln_max = float(self.ln_abs(np.linspace(a, b, m)).max())
        ln_lipschitz = float(logsumexp(self.ln_coeffs + np.log(self.frequencies)))
        slack = LogNum(1, math.log((b - a) / (2 * (m - 1))) + ln_lipschitz)
        return SupEstimate(LogNum(1, ln_max), m, slack)

    def ln_sup_points(self, x: ArrayLike) -> float:
        values = self.ln_abs(np.asarray(x, dtype=float))
        return float(values.max()) if values.size else -math.inf


def sample_spectral(
    L: float, lam: float, rng: np.random.Generator, K: int | None = None
) -> SpectralVector:
    """Gaussian coefficients on E_lambda normalized to ||phi||_{L^2} = 1."""
    size = dimension(lam, L) if K is None else K
    if size == 0:
        msg = f"E_lambda is empty for lambda={lam} < (pi/L)^2, L={L}"
        raise EmptySpace(msg)
    return SpectralVector.from_coeffs(L, rng.standard_normal(size)).normalized()

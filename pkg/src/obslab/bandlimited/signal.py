"""
Band-limited functions periodized on a window of W unit cells.

u(x) = a_0 + 2 Re sum_{j=1}^{J} a_j e^{i xi_j x}, xi_j = 2 pi j / W <= N, so the
spectrum lies in [-N, N]. Cell sups are taken on a uniform grid of
POINTS_PER_CELL points per cell (plus the right endpoint) computed by irfft.

Classes:
    BandLimited: Real trigonometric polynomial on the circle of length W
"""

import math
from dataclasses import dataclass
from typing import Final

import numpy as np
from numpy.typing import ArrayLike, NDArray

from obslab.errors import ParamError

POINTS_PER_CELL: Final = 128
DEFAULT_WINDOW: Final = 64


@dataclass(frozen=True, eq=False)
class BandLimited:
    """
    Attributes:
        N: bandwidth
        W: window length in cells (circumference)
        coeffs: a_0..a_J with a_0 real
    """

    N: float
    W: int
    coeffs: NDArray[np.complex128]

    def __post_init__(self) -> None:
        if self.N <= 0 or self.W < 1:
            msg = f"need N > 0 and W >= 1, got N={self.N}, W={self.W}"
            raise ParamError(msg)
        if self.coeffs.size - 1 > max_index(self.N, self.W):
            msg = f"{self.coeffs.size - 1} modes exceed bandwidth N={self.N}"
            raise ParamError(msg)

    @property
    def frequencies(self) -> NDArray[np.float64]:
        return 2 * np.pi * np.arange(self.coeffs.size) / self.W

    def derivative_coeffs(self, m: int) -> NDArray[np.complex128]:
        return self.coeffs * (1j * self.frequencies) ** m

    def __call__(self, x: ArrayLike, m: int = 0) -> NDArray[np.float64]:
        """u^{(m)} at arbitrary real points."""
        x_arr = np.asarray(x, dtype=float)
        a = self.derivative_coeffs(m)
        waves = np.exp(1j * x_arr[..., None] * self.frequencies[1:]) @ a[1:]
        return a[0].real + 2 * waves.real

    def grid_values(self, m: int = 0) -> NDArray[np.float64]:
        """u^{(m)} at x = k/POINTS_PER_CELL, k = 0..W*POINTS_PER_CELL - 1."""
        size = self.W * POINTS_PER_CELL
        spectrum = np.zeros(size // 2 + 1, dtype=complex)
        spectrum[: self.coeffs.size] = self.derivative_coeffs(m) * size
        spectrum[0] = spectrum[0].real
        return np.fft.irfft(spectrum, n=size)

    def cell_sups(self, m: int = 0) -> NDArray[np.float64]:
        """||u^{(m)}||_{L^inf(k, k+1)} on the grid, k = 0..W-1."""
        values = np.abs(self.grid_values(m)).reshape(self.W, POINTS_PER_CELL)
        right = np.roll(values[:, 0], -1)
        return np.maximum(values.max(axis=1), right)

    def amalgam_norm(self, m: int = 0) -> float:
        """||u^{(m)}||_{l^2 L^inf} over the window."""
        return float(np.linalg.norm(self.cell_sups(m)))


def max_index(N: float, W: int) -> int:
    """Largest j with 2 pi j / W <= N."""
    return math.floor(N * W / (2 * math.pi) + 1e-12)


def random_bandlimited(
    N: float, rng: np.random.Generator, W: int = DEFAULT_WINDOW
) -> BandLimited:
    """Gaussian coefficients on every admissible mode."""
    J = max_index(N, W)
    re, im = rng.standard_normal((2, J + 1))
    coeffs = (re + 1j * im) / math.sqrt(2)
    coeffs[0] = coeffs[0].real
    return BandLimited(N, W, coeffs)


def single_mode(
    j: int, W: int = DEFAULT_WINDOW, *, phase: float = -math.pi / 2
) -> BandLimited:
    """cos(xi_j x + phase) with bandwidth exactly xi_j; the default phase gives sin."""
    coeffs = np.zeros(j + 1, dtype=complex)
    if j == 0:
        coeffs[0] = math.cos(phase)
    else:
        coeffs[j] = 0.5 * np.exp(1j * phase)
    return BandLimited(max(2 * math.pi * j / W, 1e-12), W, coeffs)

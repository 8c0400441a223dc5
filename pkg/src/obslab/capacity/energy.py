"""
K-energies of discrete measures for kernels K(x, y) = 1/g(|x - y|).

Atoms stand for cells of size delta_cell, so the kernel is evaluated at
max(|x - y|, delta_cell) and the self-energy of an atom is K(delta_cell).
Distances are carried as logarithms: Cantor atoms at depth k are far below
float resolution while their separations are not.
"""

import math
from dataclasses import dataclass
from typing import Final

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy.spatial.distance import cdist

from obslab.errors import ParamError
from obslab.gauge import Gauge, LogNum

logger = structlog.get_logger(__name__)

SIMPLEX_TOL: Final = 1e-12


def point_ln_distances(points: NDArray[np.float64]) -> NDArray[np.float64]:
    """ln |x_i - x_j| for float points of shape (n,) or (n, d); -inf on ties."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    with np.errstate(divide="ignore"):
        return np.log(cdist(pts, pts))


@dataclass(frozen=True)
class KernelSpec:
    """
    K(t) = 1/g(max(t, delta_cell)) for the extended gauge g.

    Attributes:
        gauge: g
        ln_cell: ln delta_cell
    """

    gauge: Gauge
    ln_cell: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.ln_cell):
            msg = f"kernel cell must be a positive length, got e^{self.ln_cell}"
            raise ParamError(msg)

    @classmethod
    def with_cell(cls, gauge: Gauge, cell: float) -> "KernelSpec":
        if cell <= 0:
            msg = f"kernel cell must be positive, got {cell}"
            raise ParamError(msg)
        return cls(gauge, math.log(cell))

    @property
    def cell(self) -> float:
        return math.exp(self.ln_cell)

    def refined(self, factor: float = 4.0) -> "KernelSpec":
        """Same kernel with delta_cell divided by factor."""
        return KernelSpec(self.gauge, self.ln_cell - math.log(factor))

    def ln_kernel(self, ln_t: NDArray[np.float64]) -> NDArray[np.float64]:
        """ln K at lengths e^{ln_t}, regularized below the cell."""
        return -self.gauge.ln_value(np.maximum(ln_t, self.ln_cell))

    def ln_matrix(self, ln_distances: NDArray[np.float64]) -> NDArray[np.float64]:
        """ln K(x_i, x_j) from the pairwise ln distances."""
        return self.ln_kernel(np.asarray(ln_distances, dtype=float))


@dataclass(frozen=True)
class DiscreteMeasure:
    """
    Probability measure on finitely many atoms.

    Attributes:
        atoms: points, shape (n, d) with d in {1, 2}
        weights: masses on the simplex
        cell: length each atom stands for
    """

    atoms: NDArray[np.float64]
    weights: NDArray[np.float64]
    cell: float

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size != len(self.atoms):
            msg = f"{w.size} weights for {len(self.atoms)} atoms"
            raise ParamError(msg)
        if (w < -SIMPLEX_TOL).any() or abs(float(w.sum()) - 1.0) > SIMPLEX_TOL:
            msg = f"weights must lie on the simplex, sum={w.sum()}, min={w.min()}"
            raise ParamError(msg)
        if self.cell <= 0:
            msg = f"cell must be positive, got {self.cell}"
            raise ParamError(msg)

    @classmethod
    def uniform(cls, atoms: NDArray[np.float64], cell: float) -> "DiscreteMeasure":
        n = len(atoms)
        return cls(np.asarray(atoms, dtype=float), np.full(n, 1.0 / n), cell)

    def ln_distances(self) -> NDArray[np.float64]:
        return point_ln_distances(self.atoms)


def ln_quadratic_energy(
    ln_k: NDArray[np.float64], weights: NDArray[np.float64]
) -> float:
    """ln(w^T K w) for a kernel matrix given by its logarithm."""
    shift = float(ln_k.max())
    scaled = np.exp(ln_k - shift)
    return shift + math.log(float(weights @ scaled @ weights))


def energy(mu: DiscreteMeasure, kernel: KernelSpec) -> LogNum:
    """I_K(mu) = sum_ij w_i w_j K(max(|x_i - x_j|, delta_cell))."""
    ln_cell = max(kernel.ln_cell, math.log(mu.cell))
    regularized = KernelSpec(kernel.gauge, ln_cell)
    ln_k = regularized.ln_matrix(mu.ln_distances())
    return LogNum(1, ln_quadratic_energy(ln_k, np.asarray(mu.weights, dtype=float)))

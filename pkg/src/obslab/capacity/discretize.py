"""Atom sets for capacity estimates, each given by its pairwise ln distances."""

import math
from typing import Final

import numpy as np
from numpy.typing import NDArray

from obslab.errors import ParamError
from obslab.fractal import CantorLevel

LN2: Final = math.log(2.0)
# atom rows per block of the Cantor distance computation
ROW_CHUNK: Final = 64


def cantor_ln_distances(level: CantorLevel) -> NDArray[np.float64]:
    """
    ln distance from each atom's midpoint to the nearest point of every other
    atom, symmetrized; -inf on the diagonal.

    Evaluated from the binary paths, so depths where c_k underflows still
    resolve their separations.
    """
    n = level.atom_count
    out = np.empty((n, n))
    mid = np.full(n, level.ln_length - LN2)
    for start in range(0, n, ROW_CHUNK):
        rows = slice(start, start + ROW_CHUNK)
        out[rows] = level.atom_distances(
            level.shifts[rows], level.bits[rows], mid[rows]
        )
    out = np.minimum(out, out.T)
    np.fill_diagonal(out, -np.inf)
    return out


def product_ln_distances(
    ln_dx: NDArray[np.float64], ln_dy: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Euclidean ln distances on the product atoms (i, j), flattened as i * m + j."""
    n, m = ln_dx.shape[0], ln_dy.shape[0]
    combined = 0.5 * np.logaddexp(
        2 * ln_dx[:, None, :, None], 2 * ln_dy[None, :, None, :]
    )
    return combined.reshape(n * m, n * m)


def ball_points(r: float, d: int, per_axis: int) -> tuple[NDArray[np.float64], float]:
    """Cell centers of a per_axis^d grid on [-r, r]^d lying in the closed ball B_r."""
    if r <= 0 or d not in (1, 2) or per_axis < 1:
        msg = f"ball needs r > 0, d in (1, 2), per_axis >= 1; got {r}, {d}, {per_axis}"
        raise ParamError(msg)
    cell = 2 * r / per_axis
    axis = -r + cell * (np.arange(per_axis) + 0.5)
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    inside = np.linalg.norm(grid, axis=1) <= r
    return grid[inside], cell

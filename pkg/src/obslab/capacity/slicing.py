"""
Slicing lower bound for planar product sets.

For E2 = X x Y inside B_r and vertical lines l_a = {x = a}, the offsets whose
slice keeps capacity

    C_{1/h}(E2 cap l_a) >= k r^{-1} C_{1/F}(E2),   F = F_{alpha,beta} in d = 2,

should have measure at least c C_{1/F}(E2) / h(2r). Slices are constant on
each level-k atom of X, so the good-offset measure is exact per atom; the
offset sweep is a Monte-Carlo check of it.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import NDArray

from obslab.capacity.discretize import cantor_ln_distances, product_ln_distances
from obslab.capacity.energy import KernelSpec, point_ln_distances
from obslab.capacity.frank_wolfe import capacity_estimate
from obslab.errors import DegenerateSet, ParamError
from obslab.fitting import FIT_RTOL
from obslab.fractal import CantorLevel
from obslab.gauge import FAlphaBeta, HAlphaBeta, LogNum
from obslab.parallel import parallel_map, trial_rng

logger = structlog.get_logger(__name__)

LN2: Final = math.log(2.0)
# largest admissible radius of the ball containing E2
MAX_RADIUS: Final = math.exp(-3.0) / 2


@dataclass(frozen=True)
class AxisAtoms:
    """
    One factor of a product set: equal-length atoms on a base interval.

    Attributes:
        base: interval holding the atoms
        lefts: float left endpoints
        ln_cell: ln of the common atom length
        ln_distances: pairwise ln distances between atoms
    """

    base: tuple[float, float]
    lefts: NDArray[np.float64]
    ln_cell: float
    ln_distances: NDArray[np.float64]

    @classmethod
    def from_cantor(cls, level: CantorLevel) -> "AxisAtoms":
        return cls(
            base=level.spec.base,
            lefts=level.left_floats(),
            ln_cell=level.ln_length,
            ln_distances=cantor_ln_distances(level),
        )

    @classmethod
    def grid(cls, a: float, b: float, cells: int) -> "AxisAtoms":
        """[a, b] cut into equal cells, every cell kept."""
        if not b > a or cells < 1:
            msg = f"grid needs b > a and cells >= 1, got [{a}, {b}], {cells}"
            raise ParamError(msg)
        width = (b - a) / cells
        lefts = a + width * np.arange(cells)
        return cls((a, b), lefts, math.log(width), point_ln_distances(lefts))

    @classmethod
    def empty(cls, a: float, b: float) -> "AxisAtoms":
        return cls((a, b), np.empty(0), math.log(b - a), np.empty((0, 0)))

    @property
    def count(self) -> int:
        return int(self.lefts.size)

    @property
    def ln_measure(self) -> float:
        return math.log(self.count) + self.ln_cell if self.count else -math.inf


def _ln_capacity(ln_distances: NDArray[np.float64], kernel: KernelSpec) -> float:
    if ln_distances.shape[0] == 0:
        return -math.inf
    return capacity_estimate(ln_distances, kernel).capacity.ln_mag


@dataclass(frozen=True)
class SlicingOutcome:
    """
    Attributes:
        rows: offset, slice_cap, threshold, good (plus their ln forms)
        ln_good_measure: exact ln measure of good offsets
        ln_good_measure_mc: Monte-Carlo estimate from the sweep
        ln_rhs: ln(c C_{1/F}(E2) / h(2r))
    """

    rows: list[dict[str, Any]]
    ln_good_measure: float
    ln_good_measure_mc: float
    ln_rhs: float

    @property
    def holds(self) -> bool:
        return self.ln_good_measure >= self.ln_rhs - FIT_RTOL

    def to_dict(self) -> dict[str, Any]:
        return {
            "good_offset_measure": LogNum(1, self.ln_good_measure).to_real(),
            "ln_good_offset_measure": self.ln_good_measure,
            "ln_good_offset_measure_mc": self.ln_good_measure_mc,
            "ln_rhs": self.ln_rhs,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class SlicingReport:
    """
    Capacities of one product set and of its vertical slices.

    Attributes:
        r: radius of the ball holding E2
        ln_h2r: ln h_{alpha,beta}(2r)
        ln_product_cap: ln C_{1/F}(E2), -inf when E2 is empty
        slice_ln_caps: ln C_{1/h} of the slice through each X atom
        x_axis: the X factor
        offset_atoms: X atom hit by each swept offset, -1 for none
        offsets: swept offsets
    """

    r: float
    ln_h2r: float
    ln_product_cap: float
    slice_ln_caps: NDArray[np.float64]
    x_axis: AxisAtoms
    offset_atoms: NDArray[np.int64]
    offsets: NDArray[np.float64]

    @property
    def ln_k_max(self) -> float | None:
        """Largest ln k for which every nonempty slice is good."""
        nonempty = self.slice_ln_caps[np.isfinite(self.slice_ln_caps)]
        if nonempty.size == 0 or not math.isfinite(self.ln_product_cap):
            return None
        return float(nonempty.min()) + math.log(self.r) - self.ln_product_cap

    def ln_c_required(self, ln_k: float) -> float | None:
        """Largest ln c this set supports at the given k."""
        if not math.isfinite(self.ln_product_cap):
            return None
        return (
            self.evaluate(ln_k, 0.0).ln_good_measure
            - self.ln_product_cap
            + self.ln_h2r
        )

    def evaluate(self, ln_k: float, ln_c: float) -> SlicingOutcome:
        ln_threshold = ln_k - math.log(self.r) + self.ln_product_cap
        good_atoms = np.isfinite(self.slice_ln_caps) & (
            self.slice_ln_caps >= ln_threshold
        )
        rows: list[dict[str, Any]] = []
        for atom, offset in zip(self.offset_atoms, self.offsets, strict=True):
            ln_cap = -math.inf if atom < 0 else float(self.slice_ln_caps[atom])
            rows.append(
                {
                    "offset": float(offset),
                    "slice_cap": LogNum(1, ln_cap).to_real(),
                    "threshold": LogNum(1, ln_threshold).to_real(),
                    "good": bool(atom >= 0 and good_atoms[atom]),
                    "ln_slice_cap": ln_cap,
                    "ln_threshold": ln_threshold,
                }
            )
        count = int(good_atoms.sum())
        ln_good = math.log(count) + self.x_axis.ln_cell if count else -math.inf
        hits = sum(r["good"] for r in rows)
        ln_mc = (
            self.x_axis.ln_measure + math.log(hits / len(rows))
            if hits
            else -math.inf
        )
        ln_rhs = ln_c + self.ln_product_cap - self.ln_h2r
        return SlicingOutcome(rows, ln_good, ln_mc, ln_rhs)


def slicing_experiment(
    x_axis: AxisAtoms,
    y_axis: AxisAtoms,
    alpha: float,
    beta: float,
    offsets: int,
    seed: int,
    keep: float = 1.0,
) -> SlicingReport:
    """
    Capacities of E2 = X x Y (each product atom kept with probability keep)
    and of every vertical slice, plus an offset sweep drawn from X.
    """
    (ax, bx), (ay, by) = x_axis.base, y_axis.base
    r = 0.5 * math.hypot(bx - ax, by - ay)
    if r > MAX_RADIUS:
        msg = f"E2 must lie in a ball of radius <= e^-3/2, got r={r:.4g}"
        raise ParamError(msg)
    if offsets < 1 or not 0 < keep <= 1:
        msg = f"need offsets >= 1 and keep in (0, 1], got {offsets}, {keep}"
        raise ParamError(msg)
    h = HAlphaBeta(alpha, beta)
    f = FAlphaBeta(alpha, beta, d=2)
    kept = trial_rng(seed, 0).random((x_axis.count, y_axis.count)) < keep

    flat = kept.reshape(-1)
    product = product_ln_distances(x_axis.ln_distances, y_axis.ln_distances)
    product_kernel = KernelSpec(f, max(x_axis.ln_cell, y_axis.ln_cell))
    ln_product_cap = _ln_capacity(product[flat][:, flat], product_kernel)

    slice_kernel = KernelSpec(h, y_axis.ln_cell)

    def slice_cap(i: int) -> float:
        mask = kept[i]
        return _ln_capacity(y_axis.ln_distances[mask][:, mask], slice_kernel)

    slice_ln_caps = np.array(parallel_map(slice_cap, range(x_axis.count)))

    rng = trial_rng(seed, 1)
    if x_axis.count:
        atoms = rng.integers(0, x_axis.count, offsets)
        swept = x_axis.lefts[atoms] + rng.random(offsets) * math.exp(x_axis.ln_cell)
    else:
        atoms = np.full(offsets, -1)
        swept = ax + rng.random(offsets) * (bx - ax)

    report = SlicingReport(
        r=r,
        ln_h2r=float(h.ln_value(math.log(2 * r))),
        ln_product_cap=ln_product_cap,
        slice_ln_caps=slice_ln_caps.reshape(x_axis.count),
        x_axis=x_axis,
        offset_atoms=atoms,
        offsets=swept,
    )
    logger.info(
        "slicing_experiment",
        atoms=int(flat.sum()),
        ln_product_cap=ln_product_cap,
        ln_k_max=report.ln_k_max,
    )
    return report


@dataclass(frozen=True)
class SlicingFit:
    """
    Attributes:
        ln_k: fitted ln k, half of the smallest ln k_max
        ln_c: fitted ln c, the smallest supported ln c over the fit sets
        outcomes: every set evaluated at (k, c)
    """

    ln_k: float
    ln_c: float
    outcomes: list[SlicingOutcome]

    @property
    def violations(self) -> int:
        return sum(not o.holds for o in self.outcomes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "fitted_k": math.exp(self.ln_k),
            "fitted_c": math.exp(self.ln_c),
            "ln_k": self.ln_k,
            "ln_c": self.ln_c,
            "instances": len(self.outcomes),
            "violations": self.violations,
        }


def fit_slicing(
    reports: Sequence[SlicingReport], fit_mask: Sequence[bool] | None = None
) -> SlicingFit:
    """Fit (k, c) on the masked reports and evaluate all of them."""
    mask = [True] * len(reports) if fit_mask is None else list(fit_mask)
    k_values = [r.ln_k_max for r in reports]
    usable = [k for k in k_values if k is not None]
    if not usable:
        msg = "no product set with positive capacity and a nonempty slice"
        raise DegenerateSet(msg)
    ln_k = min(usable) - LN2
    supported = [
        c
        for r, m in zip(reports, mask, strict=True)
        if m and (c := r.ln_c_required(ln_k)) is not None
    ]
    if not supported:
        msg = "no fitting instance supports a slicing constant"
        raise DegenerateSet(msg)
    ln_c = min(supported)
    outcomes = [r.evaluate(ln_k, ln_c) for r in reports]
    fit = SlicingFit(ln_k, ln_c, outcomes)
    logger.info("slicing_fit", ln_k=ln_k, ln_c=ln_c, violations=fit.violations)
    return fit

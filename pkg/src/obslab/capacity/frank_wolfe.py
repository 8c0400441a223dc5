"""
Capacity by energy minimization over the probability simplex.

C_K(E) = 1 / min_w w^T K w, minimized with away-step Frank-Wolfe and exact
line search on the quadratic. The gradient Kw is updated from one kernel
column per step. The kernel is rescaled by its largest entry before
iterating; energies and capacities come back as LogNum.
"""

import math
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import NDArray

from obslab.capacity.discretize import ball_points
from obslab.capacity.energy import SIMPLEX_TOL, KernelSpec, point_ln_distances
from obslab.errors import DegenerateSet, NoConvergence, ParamError
from obslab.gauge import Gauge, LogNum
from obslab.parallel import parallel_map, trial_rng
from obslab.settings import settings

logger = structlog.get_logger(__name__)

# iterations between exact recomputations of Kw and the energy
REFRESH_EVERY: Final = 500
REFINE_FACTOR: Final = 4.0


@dataclass(frozen=True)
class CapacityEstimate:
    """
    Attributes:
        capacity: 1/E*
        energy: E*, the minimal energy found
        weights: minimizing measure on the atoms
        duality_gap: Frank-Wolfe gap relative to E*
        iterations: steps taken
    """

    capacity: LogNum
    energy: LogNum
    weights: NDArray[np.float64]
    duality_gap: float
    iterations: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "ln_capacity": self.capacity.ln_mag,
            "capacity": self.capacity.to_real(),
            "ln_energy": self.energy.ln_mag,
            "duality_gap": self.duality_gap,
            "iterations": self.iterations,
            "support": int(np.count_nonzero(self.weights > 0)),
        }


def _away_step_frank_wolfe(
    kernel: NDArray[np.float64], w: NDArray[np.float64], tol: float, max_iter: int
) -> tuple[NDArray[np.float64], float, float, int]:
    """Minimize w^T K w from w; returns weights, energy, relative gap, steps."""
    grad = kernel @ w
    e = float(w @ grad)
    gap = math.inf
    for it in range(max_iter + 1):
        if it and it % REFRESH_EVERY == 0:
            grad = kernel @ w
            e = float(w @ grad)
        s = int(np.argmin(grad))
        gap = 2.0 * (e - float(grad[s]))
        if gap <= tol * e:
            return w, e, max(gap, 0.0) / e, it
        if it == max_iter:
            break
        support = np.flatnonzero(w > 0)
        a = int(support[np.argmax(grad[support])])
        toward = e - grad[s] >= grad[a] - e or w[a] >= 1.0
        if toward:
            slope = float(grad[s]) - e
            curvature = float(kernel[s, s]) - 2.0 * float(grad[s]) + e
            gamma_max = 1.0
            step = kernel[:, s] - grad
        else:
            slope = e - float(grad[a])
            curvature = e - 2.0 * float(grad[a]) + float(kernel[a, a])
            gamma_max = float(w[a] / (1.0 - w[a]))
            step = grad - kernel[:, a]
        gamma = gamma_max if curvature <= 0 else min(-slope / curvature, gamma_max)
        gamma = max(gamma, 0.0)
        if toward:
            w *= 1.0 - gamma
            w[s] += gamma
        else:
            w *= 1.0 + gamma
            w[a] = 0.0 if gamma == gamma_max else w[a] - gamma
        grad += gamma * step
        e += 2.0 * gamma * slope + gamma**2 * curvature
    msg = f"Frank-Wolfe gap {gap / e:.3e} above {tol:.1e} after {max_iter} steps"
    raise NoConvergence(msg)


def capacity_estimate(
    ln_distances: NDArray[np.float64],
    kernel: KernelSpec,
    tol: float | None = None,
    max_iter: int | None = None,
    start: NDArray[np.float64] | None = None,
) -> CapacityEstimate:
    """
    C_K of the atoms whose pairwise ln distances are given.

    Stops once the Frank-Wolfe duality gap is at most tol * E*; the default
    start is the uniform measure.
    """
    tol = settings.fw_tol if tol is None else tol
    max_iter = settings.fw_max_iter if max_iter is None else max_iter
    n = int(ln_distances.shape[0])
    if n == 0:
        msg = "capacity of an empty atom set"
        raise DegenerateSet(msg)
    ln_k = kernel.ln_matrix(ln_distances)
    shift = float(ln_k.max())
    scaled = np.exp(ln_k - shift)
    if start is None:
        w0 = np.full(n, 1.0 / n)
    else:
        w0 = np.array(start, dtype=float)
        if w0.shape != (n,) or (w0 < 0).any() or abs(w0.sum() - 1) > SIMPLEX_TOL:
            msg = f"start must be a point of the {n}-simplex"
            raise ParamError(msg)
    w, e, gap, iterations = _away_step_frank_wolfe(scaled, w0, tol, max_iter)
    ln_energy = shift + math.log(e)
    logger.debug(
        "capacity_converged",
        atoms=n,
        iterations=iterations,
        gap=gap,
        ln_energy=ln_energy,
    )
    return CapacityEstimate(
        capacity=LogNum(1, -ln_energy),
        energy=LogNum(1, ln_energy),
        weights=w,
        duality_gap=gap,
        iterations=iterations,
    )


@dataclass(frozen=True)
class CapacityReport:
    """
    Attributes:
        estimate: uniform start at delta_cell
        restart: random simplex start at delta_cell
        refined: uniform start at delta_cell / 4
    """

    estimate: CapacityEstimate
    restart: CapacityEstimate
    refined: CapacityEstimate

    @property
    def capacity(self) -> LogNum:
        return self.estimate.capacity

    @property
    def restart_agreement(self) -> float:
        """Relative change of the capacity between the two starts."""
        diff = self.restart.capacity.ln_mag - self.estimate.capacity.ln_mag
        return abs(math.expm1(diff))

    @property
    def refinement_ratio(self) -> float:
        """C at delta_cell / 4 over C at delta_cell."""
        return math.exp(self.refined.capacity.ln_mag - self.estimate.capacity.ln_mag)

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.estimate.to_dict(),
            "restart_agreement": self.restart_agreement,
            "refined_ln_capacity": self.refined.capacity.ln_mag,
            "refinement_ratio": self.refinement_ratio,
        }


def capacity_report(
    ln_distances: NDArray[np.float64],
    kernel: KernelSpec,
    seed: int,
    tol: float | None = None,
    max_iter: int | None = None,
) -> CapacityReport:
    """Capacity with its restart check and delta_cell refinement."""
    n = int(ln_distances.shape[0])
    restart_start = trial_rng(seed, n).dirichlet(np.ones(n)) if n else None
    jobs = [
        (kernel, None),
        (kernel, restart_start),
        (kernel.refined(REFINE_FACTOR), None),
    ]
    estimate, restart, refined = parallel_map(
        lambda job: capacity_estimate(ln_distances, job[0], tol, max_iter, job[1]),
        jobs,
    )
    report = CapacityReport(estimate, restart, refined)
    logger.info(
        "capacity_report",
        atoms=n,
        ln_capacity=report.capacity.ln_mag,
        restart_agreement=report.restart_agreement,
        refinement_ratio=report.refinement_ratio,
    )
    return report


@dataclass(frozen=True)
class BallCheck:
    """
    Attributes:
        r: ball radius
        d: dimension
        atoms: cells in the discretization
        report: capacity of the discretized ball for K = 1/g
        ln_bound: ln g(2r)
    """

    r: float
    d: int
    atoms: int
    report: CapacityReport
    ln_bound: float

    @property
    def holds(self) -> bool:
        """Both cell sizes stay under g(2r) up to twice the optimizer tolerance."""
        limit = self.ln_bound + math.log1p(2 * settings.fw_tol)
        return (
            self.report.capacity.ln_mag <= limit
            and self.report.refined.capacity.ln_mag <= limit
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "d": self.d,
            "atoms": self.atoms,
            **self.report.to_dict(),
            "ln_bound": self.ln_bound,
            "holds": self.holds,
        }


def ball_capacity_check(
    gauge: Gauge, r: float, d: int, per_axis: int, seed: int
) -> BallCheck:
    """C_{1/g}(B_r) <= g(2r) on a grid discretization of the ball."""
    points, cell = ball_points(r, d, per_axis)
    kernel = KernelSpec.with_cell(gauge, cell)
    report = capacity_report(point_ln_distances(points), kernel, seed)
    ln_bound = float(gauge.ln_value(math.log(2 * r)))
    return BallCheck(r, d, len(points), report, ln_bound)

"""
Cartan covers of polynomial sublevel sets.

Given radii r_1 < ... < r_n, the greedy selection repeatedly takes the
largest lambda for which some disc of radius r_lambda holds lambda of the
remaining zeros, removes them, and records the concentric ball of radius
2 r_lambda. A point outside every recorded ball then satisfies
|P(z)| > |A| prod r_j, which verify_cover checks by sampling before a cover
is returned.

Classes:
    CoverBall: One ball of a cover
    BallCover: Balls, multiplicities and generating radii
    CoverViolation: A sampled sublevel point outside the cover
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import cdist

from obslab.errors import CoverageFailure
from obslab.gauge import Gauge, LogNum, log_sum
from obslab.lemniscate.polynomial import Polynomial

logger = structlog.get_logger(__name__)

LN4: Final = math.log(4.0)
# relative slack on distance comparisons against a radius
RADIUS_RTOL: Final = 1e-9
# share of verification samples drawn near the sublevel boundary
BOUNDARY_SHARE: Final = 0.9
DEFAULT_VERIFY_SAMPLES: Final = 100_000
DEFAULT_BOX_SAMPLES: Final = 100_000
# samples checked per vectorized block
VERIFY_CHUNK: Final = 20_000


@dataclass(frozen=True)
class CoverBall:
    """
    Attributes:
        center: ball center
        ln_diameter: ln d(B)
        multiplicity: number of zeros assigned to the ball
    """

    center: complex
    ln_diameter: float
    multiplicity: int = 0


@dataclass(frozen=True)
class BallCover:
    """
    Attributes:
        balls: the cover
        ln_radii: ln r_1..ln r_n that generated it (empty for other covers)
    """

    balls: tuple[CoverBall, ...]
    ln_radii: tuple[float, ...] = field(default=())

    @property
    def multiplicities(self) -> list[int]:
        return [b.multiplicity for b in self.balls]

    @property
    def ln_threshold(self) -> float:
        return float(sum(self.ln_radii))

    def scaled(self, factor: float) -> "BallCover":
        """Same centers with every diameter multiplied by factor."""
        shift = math.log(factor)
        return BallCover(
            tuple(
                CoverBall(b.center, b.ln_diameter + shift, b.multiplicity)
                for b in self.balls
            ),
            self.ln_radii,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "balls": [
                {
                    "center": [b.center.real, b.center.imag],
                    "ln_diameter": b.ln_diameter,
                    "multiplicity": b.multiplicity,
                }
                for b in self.balls
            ],
        }


@dataclass(frozen=True)
class CoverViolation:
    """
    Attributes:
        zero_index: zero the sample was drawn around
        ln_distance: ln of the distance from that zero
        theta: direction of the offset
        ln_abs_p: ln|P| at the sample
    """

    zero_index: int
    ln_distance: float
    theta: float
    ln_abs_p: float


def cartan_radii(g: Gauge, H: LogNum, n: int) -> list[LogNum]:
    """r_j = f^{-1}((j/n) f(H)) / 4, with r_n = H/4 exactly."""
    ln_f_h = g.eval(H).ln_mag
    radii = [
        LogNum(1, g.inverse(LogNum(1, math.log(j / n) + ln_f_h)).ln_mag - LN4)
        for j in range(1, n)
    ]
    radii.append(LogNum(1, H.ln_mag - LN4))
    return radii


def _disc_candidates(
    points: NDArray[np.complex128], r: float, lam: int
) -> NDArray[np.complex128]:
    """Zeros plus centers of radius-r circles through close pairs, pruned by lam."""
    xy = np.column_stack([points.real, points.imag])
    dist = cdist(xy, xy)
    close = dist <= 2.0 * r * (1.0 + RADIUS_RTOL)
    viable = close.sum(axis=1) >= lam
    if not viable.any():
        return np.empty(0, dtype=complex)
    pts = points[viable]
    candidates = [pts]
    if lam > 1 and r > 0:
        i, j = np.nonzero(np.triu(close[np.ix_(viable, viable)], k=1))
        a, b = pts[i], pts[j]
        half = np.abs(b - a) / 2
        keep = half > 0
        a, b, half = a[keep], b[keep], half[keep]
        mid = (a + b) / 2
        normal = 1j * (b - a) / (2 * half)
        h = np.sqrt(np.clip(r * r - half * half, 0.0, None))
        candidates.extend([mid + h * normal, mid - h * normal])
    return np.concatenate(candidates)


def _best_disc(
    points: NDArray[np.complex128], r: float, lam: int
) -> tuple[complex, NDArray[np.intp]] | None:
    candidates = _disc_candidates(points, r, lam)
    if candidates.size == 0:
        return None
    dist = np.abs(candidates[:, None] - points[None, :])
    counts = (dist <= r * (1.0 + RADIUS_RTOL)).sum(axis=1)
    best = int(np.argmax(counts))
    if counts[best] < lam:
        return None
    order = np.argsort(dist[best], kind="stable")[:lam]
    return complex(candidates[best]), order


def cartan_cover(
    p: Polynomial,
    radii: Sequence[LogNum],
    *,
    samples: int = DEFAULT_VERIFY_SAMPLES,
    box_samples: int = DEFAULT_BOX_SAMPLES,
    rng: np.random.Generator | None = None,
) -> BallCover:
    """Greedy Cartan selection, gated by verify_cover."""
    if len(radii) != p.degree:
        msg = f"need {p.degree} radii, got {len(radii)}"
        raise ValueError(msg)
    ln_r = [r.ln_mag for r in radii]
    remaining = p.roots.copy()
    balls: list[CoverBall] = []
    while remaining.size:
        for lam in range(remaining.size, 0, -1):
            r = math.exp(ln_r[lam - 1])
            found = _best_disc(remaining, r, lam)
            if found is not None:
                center, members = found
                balls.append(CoverBall(center, ln_r[lam - 1] + LN4, lam))
                remaining = np.delete(remaining, members)
                break
    cover = BallCover(tuple(balls), tuple(ln_r))
    violations = verify_cover(
        p,
        LogNum(1, cover.ln_threshold) * abs(p.leading),
        cover,
        samples,
        box_samples=box_samples,
        rng=rng,
    )
    if violations:
        logger.error("cartan_cover_failed", violations=len(violations))
        msg = f"{len(violations)} sublevel samples outside the Cartan cover"
        raise CoverageFailure(msg)
    return cover


def content_of_cover(cover: BallCover, g: Gauge) -> LogNum:
    """Sum of g(d(B)) over the cover."""
    return log_sum([g.eval(LogNum(1, b.ln_diameter)) for b in cover.balls])


def _coincidence_groups(roots: NDArray[np.complex128]) -> NDArray[np.intp]:
    same = roots[:, None] == roots[None, :]
    _, labels = connected_components(same, directed=False)
    return labels


def _polar_draws(
    s_star: NDArray[np.float64],
    rho_ln: float,
    count: int,
    rng: np.random.Generator,
) -> tuple[NDArray[np.intp], NDArray[np.float64], NDArray[np.float64]]:
    """Zero index, ln-radius and angle of samples drawn around the zeros."""
    j = rng.integers(0, s_star.size, count)
    theta = 2 * np.pi * rng.random(count)
    near = rng.random(count) < BOUNDARY_SHARE
    s = np.where(
        near,
        s_star[j] - 5.0 + 6.0 * rng.random(count),
        rho_ln + 0.5 * np.log(rng.random(count)),
    )
    return j, s, theta


def _box_draws(
    roots: NDArray[np.complex128],
    rho_ln: float,
    count: int,
    rng: np.random.Generator,
) -> tuple[NDArray[np.intp], NDArray[np.float64], NDArray[np.float64]]:
    """
    Uniform points of the root bounding box padded by rho, in polar form about
    the nearest zero. The sublevel set lies in the union of D(z_j, rho).
    """
    pad = math.exp(rho_ln)
    lo = complex(roots.real.min() - pad, roots.imag.min() - pad)
    hi = complex(roots.real.max() + pad, roots.imag.max() + pad)
    z = (
        lo.real
        + (hi.real - lo.real) * rng.random(count)
        + 1j * (lo.imag + (hi.imag - lo.imag) * rng.random(count))
    )
    gaps = z[:, None] - roots[None, :]
    j = np.argmin(np.abs(gaps), axis=1)
    nearest = gaps[np.arange(count), j]
    with np.errstate(divide="ignore"):
        s = np.log(np.abs(nearest))
    return j, s, np.angle(nearest)


def _uncovered(
    p: Polynomial,
    labels: NDArray[np.intp],
    thr: float,
    cover: BallCover,
    draws: tuple[NDArray[np.intp], NDArray[np.float64], NDArray[np.float64]],
) -> tuple[list[CoverViolation], int]:
    """Violations among the draws and the number that fell in the sublevel set."""
    roots = p.roots
    j, s, theta = draws
    points = roots[j] + np.exp(s) * np.exp(1j * theta)
    coincide = labels[None, :] == labels[j][:, None]
    with np.errstate(divide="ignore"):
        ln_dist = np.where(
            coincide,
            s[:, None],
            np.log(np.abs(points[:, None] - roots[None, :])),
        )
    ln_abs = math.log(abs(p.leading)) + ln_dist.sum(axis=1)
    in_sublevel = ln_abs <= thr

    covered = np.zeros(j.size, dtype=bool)
    for ball in cover.balls:
        ln_radius = ball.ln_diameter - math.log(2.0)
        at_zero = roots[j] == ball.center
        with np.errstate(divide="ignore"):
            ln_to_center = np.where(at_zero, s, np.log(np.abs(points - ball.center)))
        covered |= ln_to_center <= ln_radius + RADIUS_RTOL
    bad = np.nonzero(in_sublevel & ~covered)[0]
    violations = [
        CoverViolation(int(j[i]), float(s[i]), float(theta[i]), float(ln_abs[i]))
        for i in bad
    ]
    return violations, int(in_sublevel.sum())


def verify_cover(
    p: Polynomial,
    threshold: LogNum,
    cover: BallCover,
    samples: int,
    *,
    box_samples: int = 0,
    rng: np.random.Generator | None = None,
) -> list[CoverViolation]:
    """
    Sample {|P| <= threshold} and return the samples outside every ball.

    Samples are drawn around each zero in polar form, mostly with ln-radius
    near the boundary level s* of the sublevel component, the rest uniform
    in the disc of radius threshold^{1/n}. On top of those, box_samples
    uniform points of the padded root bounding box are kept when they land
    in the sublevel set.
    """
    rng = rng or np.random.default_rng(0)
    n = p.degree
    if n == 0 or samples + box_samples <= 0:
        return []
    roots = p.roots
    thr = threshold.ln_mag
    labels = _coincidence_groups(roots)
    multiplicity = np.bincount(labels)[labels]
    with np.errstate(divide="ignore"):
        ln_gaps = np.log(np.abs(roots[:, None] - roots[None, :]))
    far = np.where(labels[:, None] == labels[None, :], 0.0, ln_gaps).sum(axis=1)
    s_star = (thr - math.log(abs(p.leading)) - far) / multiplicity
    rho_ln = (thr - math.log(abs(p.leading))) / n

    violations: list[CoverViolation] = []
    accepted = 0
    for start in range(0, samples, VERIFY_CHUNK):
        count = min(VERIFY_CHUNK, samples - start)
        found, _ = _uncovered(
            p, labels, thr, cover, _polar_draws(s_star, rho_ln, count, rng)
        )
        violations.extend(found)
    for start in range(0, box_samples, VERIFY_CHUNK):
        count = min(VERIFY_CHUNK, box_samples - start)
        found, hits = _uncovered(
            p, labels, thr, cover, _box_draws(roots, rho_ln, count, rng)
        )
        violations.extend(found)
        accepted += hits
    if box_samples:
        logger.debug("box_samples_accepted", accepted=accepted, drawn=box_samples)
    return violations

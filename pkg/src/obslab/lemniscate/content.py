"""
Smallness thresholds and contents of polynomial lemniscates E(P; delta).

Classes:
    CartanBoundBreakdown: H, A and Xi behind the lemniscate content bound
    LemniscateBound: Constant-free shape plus breakdown
"""

import math
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from obslab.errors import DomainError, NoConvergence, NoRoot, QuadratureError
from obslab.gauge import Gauge, HAlpha, LogNum, log_sum
from obslab.lemniscate.cartan import BallCover, CoverBall
from obslab.lemniscate.polynomial import Polynomial

logger = structlog.get_logger(__name__)

LN4: Final = math.log(4.0)
QUAD_RTOL: Final = 1e-9
# lowest ln H searched when solving threshold(H) = delta^n
LN_H_FLOOR: Final = -1e4
# quadtree limits per zero; MAX_LEVEL keeps int64 cell indices exact
MAX_CELLS: Final = 256
MAX_LEVEL: Final = 50
FIXED_POINT_STEPS: Final = 200
# widest gauge domain used when solving for H
BREAKDOWN_CUTOFF_LN: Final = -1e-6
QUADRANTS: Final = np.array([[0, 0], [0, 1], [1, 0], [1, 1]])


def lubinsky_threshold(g: Gauge, H: LogNum, n: int) -> LogNum:
    """
    (g_n(H)/4)^n = 4^{-n} exp{n(ln H - I/g(H))}, I = int_{t_1}^{H} g(s)/s ds.

    t_1 = g^{-1}(g(H)/n). With s = e^{-x} and x = e^u the integral becomes
    int exp(Phi(e^u)) e^u du over [ln ln 1/H, ln ln 1/t_1].
    """
    if n < 1:
        msg = f"degree must be positive, got {n}"
        raise DomainError(msg)
    if n == 1:
        return LogNum(1, H.ln_mag - LN4)
    ln_g_h = g.eval(H).ln_mag
    t1 = g.inverse(LogNum(1, ln_g_h - math.log(n)))
    u_lo, u_hi = math.log(-H.ln_mag), math.log(-t1.ln_mag)

    # integrand scaled by 1/g(H) to stay O(1)
    def integrand(u: float) -> float:
        x = math.exp(u)
        return math.exp(float(g.log_profile(np.asarray(x))) - ln_g_h + u)

    value, error = quad(integrand, u_lo, u_hi, epsrel=QUAD_RTOL, epsabs=0.0, limit=200)
    if not math.isfinite(value) or value <= 0 or error > 10 * QUAD_RTOL * value:
        logger.error("threshold_quadrature_failed", value=value, error=error, n=n)
        msg = f"threshold integral unresolved: value={value}, error={error}"
        raise QuadratureError(msg)
    return LogNum(1, -n * LN4 + n * (H.ln_mag - value))


def xi_fixed_point(alpha: float, x_h: float, n: int) -> float:
    """x_t = ln 1/t solving x_t = n^2 x_H (ln x_H / ln x_t)^{2 alpha} by iteration."""
    x = n * n * x_h
    for _ in range(FIXED_POINT_STEPS):
        nxt = n * n * x_h * (math.log(x_h) / math.log(x)) ** (2 * alpha)
        if abs(nxt - x) <= 1e-14 * x:
            return nxt
        x = nxt
    logger.error("fixed_point_not_converged", alpha=alpha, x_h=x_h, n=n, x=x)
    msg = f"fixed point for alpha={alpha}, n={n} not reached"
    raise NoConvergence(msg)


@dataclass(frozen=True)
class CartanBoundBreakdown:
    """
    Attributes:
        H: radius solving threshold(H) = delta^n
        n: degree
        A: ln ln(1/H) / (ln n^2 + ln ln(1/H) + Xi)
        xi: Xi
        xi_bracket: [-(2 alpha/(2 alpha + 1)) ln n^2, 0]
        ln_threshold: n ln delta
        h_chain_holds: ln 1/H >= ln(1/(4 delta))/(2 n A^alpha - 1)
    """

    H: LogNum
    n: int
    A: float
    xi: float
    xi_bracket: tuple[float, float]
    ln_threshold: float
    h_chain_holds: bool

    @property
    def xi_in_bracket(self) -> bool:
        lo, hi = self.xi_bracket
        return lo - 1e-9 <= self.xi <= hi + 1e-9

    def to_dict(self) -> dict[str, Any]:
        return {
            "H": self.H.to_dict(),
            "n": self.n,
            "A": self.A,
            "xi": self.xi,
            "xi_bracket": list(self.xi_bracket),
            "ln_threshold": self.ln_threshold,
            "h_chain_holds": self.h_chain_holds,
        }


@dataclass(frozen=True)
class LemniscateBound:
    """
    Attributes:
        shape: (ln 1/(4 delta))^{-1/2} n^{1/2} (ln(n + e))^{-alpha/3}
        breakdown: radius analysis, absent when delta^n lies beyond the solvable range
    """

    shape: LogNum
    breakdown: CartanBoundBreakdown | None


def _solve_radius(g: Gauge, n: int, ln_target: float) -> float:
    def residual(ln_h: float) -> float:
        return lubinsky_threshold(g, LogNum(1, ln_h), n).ln_mag - ln_target

    hi = g.cutoff_ln
    if residual(hi) < 0:
        msg = f"threshold {ln_target} above (g_n(H)/4)^n on the gauge domain"
        raise NoRoot(msg)
    if residual(LN_H_FLOOR) > 0:
        msg = f"threshold {ln_target} below the searched range"
        raise NoRoot(msg)
    return brentq(residual, LN_H_FLOOR, hi, xtol=1e-12, rtol=1e-14, maxiter=500)


def lemniscate_bound_rhs(
    alpha: float, delta: LogNum, n: int, *, breakdown: bool = True
) -> LemniscateBound:
    """Constant-free content bound for E(P; delta) with its H, A and Xi breakdown."""
    if delta.sign != 1 or delta.ln_mag >= -LN4:
        msg = f"delta={delta} must lie in (0, 1/4)"
        raise DomainError(msg)
    ln_quarter = -LN4 - delta.ln_mag
    shape = LogNum(
        1,
        -0.5 * math.log(ln_quarter)
        + 0.5 * math.log(n)
        - (alpha / 3) * math.log(math.log(n + math.e)),
    )
    if not breakdown or n == 1:
        return LemniscateBound(shape, None)
    g = HAlpha(alpha=alpha, cutoff_ln=BREAKDOWN_CUTOFF_LN - (1.0 if alpha > 0 else 0.0))
    ln_target = n * delta.ln_mag
    ln_h = _solve_radius(g, n, ln_target)
    x_h = -ln_h
    x_t = -g.inverse(LogNum(1, g.eval_ln(ln_h) - math.log(n))).ln_mag
    ln_n2 = 2 * math.log(n)
    xi = math.log(x_t) - ln_n2 - math.log(x_h)
    A = math.log(x_h) / (ln_n2 + math.log(x_h) + xi)
    denom = 2 * n * A**alpha - 1
    h_chain = denom <= 0 or x_h >= ln_quarter / denom
    result = CartanBoundBreakdown(
        H=LogNum(1, ln_h),
        n=n,
        A=A,
        xi=xi,
        xi_bracket=(-(2 * alpha / (2 * alpha + 1)) * ln_n2, 0.0),
        ln_threshold=ln_target,
        h_chain_holds=h_chain,
    )
    logger.debug("lemniscate_breakdown", **result.to_dict())
    return LemniscateBound(shape, result)


def _cells_lower_ln(
    leading: complex,
    offsets: NDArray[np.complex128],
    rel_roots: NDArray[np.complex128],
    half_diag: float,
) -> NDArray[np.float64]:
    """Lower bound of ln|P| over square cells given by their center offsets."""
    gaps = np.abs(offsets[:, None] - rel_roots[None, :]) - half_diag
    with np.errstate(divide="ignore"):
        return math.log(abs(leading)) + np.log(np.clip(gaps, 0.0, None)).sum(axis=1)


def _quadtree(
    p: Polynomial, anchor: complex, ln_thr: float, rho: float
) -> tuple[NDArray[np.int64], float]:
    """Grid indices of marked cells around one zero and their side length."""
    rel = p.roots - anchor
    side = 2.0 * rho
    # cell (i, j) at level k has center offset -rho + (i + 1/2) side_k
    cells = np.zeros((1, 2), dtype=np.int64)
    for _ in range(MAX_LEVEL):
        child_side = side / 2
        children = (cells[:, None, :] * 2 + QUADRANTS).reshape(-1, 2)
        centers = -rho + (children[:, 0] + 0.5) * child_side + 1j * (
            -rho + (children[:, 1] + 0.5) * child_side
        )
        half_diag = child_side / math.sqrt(2)
        nearest = np.abs(centers[:, None] - rel[None, :]).min(axis=1)
        owned = np.abs(centers) <= nearest + 2 * half_diag
        marked = owned & (_cells_lower_ln(p.leading, centers, rel, half_diag) <= ln_thr)
        if marked.sum() > MAX_CELLS or child_side < 1e-300:
            break
        cells, side = children[marked], child_side
    return cells, side


def _component_balls(
    cells: NDArray[np.int64], side: float, rho: float, anchor: complex
) -> list[CoverBall]:
    if cells.size == 0:
        return []
    index = {(int(i), int(j)): k for k, (i, j) in enumerate(cells)}
    rows: list[int] = []
    cols: list[int] = []
    for k, (i, j) in enumerate(cells):
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                other = index.get((int(i) + di, int(j) + dj))
                if other is not None:
                    rows.append(k)
                    cols.append(other)
    size = len(cells)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    count, labels = connected_components(graph, directed=False)
    balls: list[CoverBall] = []
    for c in range(count):
        members = cells[labels == c]
        lo = members.min(axis=0)
        hi = members.max(axis=0) + 1
        width = (hi - lo) * side
        center = complex(
            anchor.real - rho + (lo[0] + hi[0]) / 2 * side,
            anchor.imag - rho + (lo[1] + hi[1]) / 2 * side,
        )
        ln_diameter = math.log(math.hypot(width[0], width[1]))
        balls.append(CoverBall(center, ln_diameter, len(members)))
    return balls


def extended_content(cover: BallCover, g: Gauge) -> LogNum:
    """Sum of the extended gauge over the cover, for diameters past the cutoff."""
    return log_sum([LogNum(1, float(g.ln_value(b.ln_diameter))) for b in cover.balls])


def empirical_lemniscate_content(
    p: Polynomial, delta: LogNum, g: Gauge
) -> tuple[BallCover, LogNum]:
    """
    Cover {|P| <= delta^n} by quadtree cells, merge 8-connected cells, bound
    each component by its circumscribed ball and sum the extended gauge.

    A cell is dropped only when a lower bound for ln|P| over it exceeds the
    threshold, so the cells cover the lemniscate.
    """
    n = p.degree
    ln_thr = n * delta.ln_mag
    rho = math.exp(delta.ln_mag - math.log(abs(p.leading)) / n)
    anchors = list(dict.fromkeys(complex(z) for z in p.roots))
    balls: list[CoverBall] = []
    for anchor in anchors:
        cells, side = _quadtree(p, anchor, ln_thr, rho)
        balls.extend(_component_balls(cells, side, rho, anchor))
    cover = BallCover(tuple(balls))
    content = extended_content(cover, g)
    logger.debug("lemniscate_content", n=n, balls=len(balls), content=content.to_real())
    return cover, content

"""
Lebeau-Robbiano time schedule for the heat equation on (0, L).

With psi(t) = t ln t and phi(lambda) = (ln lambda)^{2 alpha/3}, the time slice
at frequency lambda is tau(lambda) = 1 / psi^{-1}(phi(lambda) / 4C). Slices
are taken at lambda_k = (5/4)^{k-1} lambda_1 and T_n = sum_{k>=n} tau_k. The
series converges exactly when 2 alpha / 3 > 1.

Everything is computed in the variable mu = ln lambda. The tail of the
series is bounded by the integral test together with W(y) <= ln y for
y >= e, which gives a closed form.
"""

import math
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray
from scipy.special import lambertw

from obslab.errors import DomainError, NoConvergence, NoFeasibleN

logger = structlog.get_logger(__name__)

RATIO: Final = 5 / 4
LN_RATIO: Final = math.log(RATIO)
NEWTON_RTOL: Final = 1e-12
NEWTON_STEPS: Final = 50
DEFAULT_N_MAX: Final = 200
DIRECT_SUM_LIMIT: Final = 10**6
A0: Final = (2 * math.pi) ** -0.25
# p = 2 alpha / 3 within this distance of 1 is treated as the boundary case
BOUNDARY_TOL: Final = 1e-12


def _exponent(alpha: float, C: float) -> float:
    if alpha <= 0 or C <= 0:
        msg = f"need alpha > 0 and C > 0, got alpha={alpha}, C={C}"
        raise DomainError(msg)
    return 2 * alpha / 3


def psi_inverse(y: ArrayLike) -> NDArray[np.float64]:
    """t > 1 with t ln t = y, from Lambert W and polished by Newton."""
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr <= 0):
        msg = "psi^{-1} needs y > 0"
        raise DomainError(msg)
    t = y_arr / lambertw(y_arr).real
    for _ in range(NEWTON_STEPS):
        step = (t * np.log(t) - y_arr) / (np.log(t) + 1)
        t = np.maximum(t - step, 1.0 + 1e-15)
        if np.all(np.abs(step) <= NEWTON_RTOL * t):
            return t
    msg = "Newton polish of psi^{-1} did not settle"
    raise NoConvergence(msg)


def lambda_threshold(alpha: float, C: float) -> float:
    """Smallest lambda with phi(lambda) / 4C >= e."""
    p = _exponent(alpha, C)
    return math.exp((4 * C * math.e) ** (1 / p))


def tau_of_mu(mu: ArrayLike, alpha: float, C: float) -> NDArray[np.float64]:
    """tau at lambda = e^mu."""
    p = _exponent(alpha, C)
    mu_arr = np.asarray(mu, dtype=float)
    y = np.where(mu_arr > 0, np.abs(mu_arr) ** p, 0.0) / (4 * C)
    if np.any(y < math.e * (1 - 1e-12)):
        msg = f"tau needs lambda >= {lambda_threshold(alpha, C):.6g}"
        raise DomainError(msg)
    return 1 / psi_inverse(y)


def tau(lam: float, alpha: float, C: float) -> float:
    if lam <= 1:
        msg = f"tau needs lambda >= {lambda_threshold(alpha, C):.6g}, got {lam}"
        raise DomainError(msg)
    return float(tau_of_mu(math.log(lam), alpha, C))


def tail_integral_bound(mu_start: float, alpha: float, C: float) -> float:
    """
    Upper bound on int_{mu_start}^inf tau(e^mu) dmu from tau <= ln y / y.

    Infinite when 2 alpha / 3 <= 1.
    """
    p = _exponent(alpha, C)
    if p <= 1 + BOUNDARY_TOL:
        return math.inf
    a = p - 1
    bracket = p * (math.log(mu_start) / a + 1 / a**2) - math.log(4 * C) / a
    return 4 * C * mu_start**-a * bracket


@dataclass(frozen=True)
class LRSchedule:
    """
    Attributes:
        alpha: gauge exponent
        C: spectral-inequality constant
        L: interval length
        lam1: first frequency
        rows: k, lambda_k, tau_k, T_k, f_k, ln_f_k for k = 1..n_max
        tail: certified bound on sum_{k > n_max} tau_k
    """

    alpha: float
    C: float
    L: float
    lam1: float
    rows: list[dict[str, Any]]
    tail: float

    @property
    def converges(self) -> bool:
        return math.isfinite(self.tail)

    @property
    def lambdas(self) -> NDArray[np.float64]:
        return np.array([r["lambda_k"] for r in self.rows])

    @property
    def taus(self) -> NDArray[np.float64]:
        return np.array([r["tau_k"] for r in self.rows])

    @property
    def suffix_times(self) -> NDArray[np.float64]:
        return np.array([r["T_k"] for r in self.rows])

    def ln_f(self, k: int) -> float:
        return self.rows[k - 1]["ln_f_k"]


def ln_f(lam: float, tau_value: float, L: float) -> float:
    """ln f(lambda) = -ln(2 sqrt L) - lambda tau / 4."""
    return -math.log(2 * math.sqrt(L)) - lam * tau_value / 4


def schedule(
    alpha: float,
    C: float,
    L: float,
    lam1: float | None = None,
    n_max: int = DEFAULT_N_MAX,
) -> LRSchedule:
    """Table of lambda_k, tau_k, T_k and f_k with the integral-test tail."""
    lam1 = lambda_threshold(alpha, C) if lam1 is None else lam1
    mus = math.log(lam1) + LN_RATIO * np.arange(n_max)
    taus = tau_of_mu(mus, alpha, C)
    tail = tail_integral_bound(float(mus[-1]), alpha, C) / LN_RATIO
    suffix = np.cumsum(taus[::-1])[::-1] + tail
    rows = []
    for k, (mu, t, T_k) in enumerate(zip(mus, taus, suffix, strict=True), start=1):
        lam = math.exp(mu)
        ln_f_k = ln_f(lam, float(t), L)
        rows.append(
            {
                "k": k,
                "lambda_k": lam,
                "tau_k": float(t),
                "T_k": float(T_k),
                "f_k": math.exp(ln_f_k),
                "ln_f_k": ln_f_k,
            }
        )
    logger.debug("lr_schedule", alpha=alpha, C=C, lam1=lam1, n_max=n_max, tail=tail)
    return LRSchedule(alpha, C, L, lam1, rows, tail)


@dataclass(frozen=True)
class ConvergenceResult:
    """
    Attributes:
        converges: whether sum tau_k is finite
        t1_bound: certified upper bound on T_1 (inf when divergent)
        target: bound the divergence witness must exceed
        witness_index: n with sum_{k<=n} tau_k >= target by the integral test
        witness_partial_sum: direct partial sum at witness_index when computable
    """

    converges: bool
    t1_bound: float
    target: float | None = None
    witness_index: float | None = None
    witness_partial_sum: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "converges": self.converges,
            "t1_bound": self.t1_bound,
            "target": self.target,
            "witness_index": self.witness_index,
            "witness_partial_sum": self.witness_partial_sum,
        }


def _divergence_witness(
    alpha: float, C: float, lam1: float, target: float
) -> tuple[float, float | None]:
    """Index n with (1/ln q) int_{mu_1}^{mu_{n+1}} 4C mu^{-p} dmu >= target."""
    p = _exponent(alpha, C)
    mu1 = math.log(lam1)
    needed = target * LN_RATIO / (4 * C)
    if abs(p - 1) <= BOUNDARY_TOL:
        ln_end = math.log(mu1) + needed
        mu_end = math.exp(ln_end) if ln_end < 700 else math.inf
    else:
        try:
            mu_end = (mu1 ** (1 - p) + (1 - p) * needed) ** (1 / (1 - p))
        except OverflowError:
            mu_end = math.inf
    index = math.ceil((mu_end - mu1) / LN_RATIO) if math.isfinite(mu_end) else math.inf
    partial = None
    if index <= DIRECT_SUM_LIMIT:
        mus = mu1 + LN_RATIO * np.arange(int(index))
        partial = float(tau_of_mu(mus, alpha, C).sum())
    return float(index), partial


def convergence_test(
    alpha: float,
    C: float,
    lam1: float | None = None,
    target: float | None = None,
    n_max: int = DEFAULT_N_MAX,
) -> ConvergenceResult:
    """
    Certified T_1 when 2 alpha / 3 > 1, otherwise an index past which the
    partial sums provably exceed target (default 10 T_1 at alpha = 2).
    """
    lam1 = lambda_threshold(alpha, C) if lam1 is None else lam1
    if 2 * alpha / 3 > 1 + BOUNDARY_TOL:
        plan = schedule(alpha, C, 1.0, lam1, n_max)
        return ConvergenceResult(converges=True, t1_bound=plan.rows[0]["T_k"])
    if target is None:
        target = 10 * convergence_test(2.0, C, n_max=n_max).t1_bound
    index, partial = _divergence_witness(alpha, C, lam1, target)
    logger.info("lr_divergent", alpha=alpha, target=target, witness_index=index)
    return ConvergenceResult(
        converges=False,
        t1_bound=math.inf,
        target=target,
        witness_index=index,
        witness_partial_sum=partial,
    )


def t0_threshold(alpha: float, C: float, lambdas: ArrayLike) -> float:
    """
    Largest tau(lambda) on the grid below which the slice inequality

        (1/tau) e^{C lambda / phi} <= e^{tau psi(1/tau) C lambda / phi}

    holds at every grid point. Since tau psi(1/tau) = ln(1/tau), with
    a = C lambda / phi and b = ln(1/tau) it reads a + b <= a b.
    """
    lam_arr = np.sort(np.asarray(lambdas, dtype=float))
    mus = np.log(lam_arr)
    taus = tau_of_mu(mus, alpha, C)
    a = C * lam_arr / mus ** _exponent(alpha, C)
    b = -np.log(taus)
    holds = a + b <= a * b
    failing = taus[~holds]
    limit = float(failing.min()) if failing.size else math.inf
    admissible = taus[holds & (taus < limit)]
    return float(admissible.max()) if admissible.size else 0.0


@dataclass(frozen=True)
class CostConstant:
    """
    Attributes:
        N: first schedule index with T_N <= min(T, T0)
        T_N: suffix time at N
        T0: slice threshold used
        ln_C_obs: ln(2 sqrt(L) e^{lambda_N tau_N / 4})
    """

    N: int
    T_N: float
    T0: float
    ln_C_obs: float

    def to_dict(self) -> dict[str, Any]:
        return {"N": self.N, "T_N": self.T_N, "T0": self.T0, "ln_C_obs": self.ln_C_obs}


def cost_constant(
    T: float,
    alpha: float,
    C: float,
    L: float,
    lam1: float | None = None,
    n_max: int = DEFAULT_N_MAX,
    T0: float | None = None,
) -> CostConstant:
    """Observability constant 1/f(lambda_N) from the schedule."""
    if T <= 0:
        msg = f"observation time must be positive, got {T}"
        raise DomainError(msg)
    plan = schedule(alpha, C, L, lam1, n_max)
    if not plan.converges:
        msg = f"sum tau_k diverges for alpha={alpha} <= 3/2"
        raise DomainError(msg)
    T0 = t0_threshold(alpha, C, plan.lambdas) if T0 is None else T0
    budget = min(T, T0)
    for row in plan.rows:
        if row["T_k"] <= budget:
            result = CostConstant(
                N=row["k"], T_N=row["T_k"], T0=T0, ln_C_obs=-row["ln_f_k"]
            )
            logger.info("lr_cost_constant", T=T, alpha=alpha, **result.to_dict())
            return result
    msg = f"no N <= {n_max} with T_N <= {budget:.6g}"
    raise NoFeasibleN(msg)


def absorption_crossover(
    alpha: float, C: float, L: float, lambdas: ArrayLike | None = None
) -> float | None:
    """
    Smallest grid lambda from which on

        a0 (6/tau)^{1/4} e^{-lambda tau/3} + f(lambda) e^{-lambda tau} <= f(5 lambda/4),

    a0 = (2 pi)^{-1/4}; None when the inequality fails at the last grid point.
    """
    if lambdas is None:
        start = lambda_threshold(alpha, C) * (1 + 1e-9)
        lambdas = np.geomspace(start, start * 1e12, 400)
    lam_arr = np.sort(np.asarray(lambdas, dtype=float))
    mus = np.log(lam_arr)
    taus = tau_of_mu(mus, alpha, C)
    taus_next = tau_of_mu(mus + LN_RATIO, alpha, C)
    ln_2sqrt_l = math.log(2 * math.sqrt(L))
    ln_f_here = -ln_2sqrt_l - lam_arr * taus / 4
    lhs = np.logaddexp(
        math.log(A0) + 0.25 * np.log(6 / taus) - lam_arr * taus / 3,
        ln_f_here - lam_arr * taus,
    )
    rhs = -ln_2sqrt_l - RATIO * lam_arr * taus_next / 4
    holds = lhs <= rhs
    if not holds[-1]:
        return None
    failing = np.flatnonzero(~holds)
    first = int(failing[-1]) + 1 if failing.size else 0
    return float(lam_arr[first])

"""
A closed set of positive f_eps content on which the heat equation is not observable.

E_inf = {x in (0,1) irrational : ||q_k x|| < q_k e^{-q_k^{p}} for every k},
p = 2 + eps_1, q_1 = 4 and ln q_k = q_{k-1}^p / eps_2 (the smallest admissible
choice). Level-k intervals have length e^{-q_k^p} and there are J_k of them.

Nothing is ever materialized: q_k is carried as ln q_k in a Tower and
every level quantity is written as a multiple of ln q_k plus a remainder
from the previous level. With the minimal choice q_{k-1}^p = eps_2 ln q_k, so

    S_k = ln(q_1 ... q_k) - sum_{l<k} q_l^p = (1 - eps_2) ln q_k + S_{k-1},

and J_k, J'_k follow from S_k by their recursions with J_1 = q_1 and
J'_1 = q_1 - 1.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Final

import structlog

from obslab.errors import ParamError
from obslab.gauge import Tower

logger = structlog.get_logger(__name__)

Q1: Final = 4
LN2: Final = math.log(2.0)
EPS2_CAP: Final = 0.25


@dataclass(frozen=True)
class EInfSpec:
    """
    Attributes:
        eps: target gauge exponent of f_eps
        eps1: level-length exponent, (2 + eps)(1 - eps2) = 2 + eps1
        eps2: denominator growth parameter
        N: upper growth factor, floor(1/eps2) + 1
        ln_q: ln q_k for k = 1..levels
        core: S_k = ln(q_1 ... q_k) - sum_{l<k} q_l^p
    """

    eps: float
    eps1: float
    eps2: float
    N: int
    ln_q: tuple[Tower, ...]
    core: tuple[Tower, ...] = field(repr=False)

    @property
    def levels(self) -> int:
        return len(self.ln_q)

    @property
    def p(self) -> float:
        return 2.0 + self.eps1

    def level_q(self, k: int) -> Tower:
        if not 1 <= k <= self.levels:
            msg = f"level {k} outside 1..{self.levels}"
            raise ParamError(msg)
        return self.ln_q[k - 1]

    def ln_length(self, k: int) -> Tower:
        """ln|I_{k,j}| = -q_k^p."""
        return -Tower.from_ln(self.level_q(k) * self.p)

    def j_offset(self, k: int) -> float:
        """ln J_k - S_k for the recursive count J_k = 2 J_{k-1} q_k e^{-q_{k-1}^p}."""
        return (k - 1) * LN2

    def j_prime_offset(self, k: int) -> float:
        """ln J'_k - S_k for J'_1 = q_1 - 1 halved at every level."""
        return math.log((Q1 - 1) / Q1) - (k - 1) * LN2

    def ln_J(self, k: int) -> Tower:
        return self.core[k - 1] + self.j_offset(k)

    def ln_J_prime(self, k: int) -> Tower:
        return self.core[k - 1] + self.j_prime_offset(k)

    def count_offsets(self) -> list[tuple[float, float]]:
        """
        (ln J'_k - S_k, ln J_k - S_k) from counting indices level by level.

        Level 1 keeps the q_1 - 1 interior indices and all q_1 + 1 indices.
        A level-(k-1) interval of length e^{-q_{k-1}^p} holds at least y - 2
        whole level-k intervals and meets at most y + 1, y = q_k e^{-q_{k-1}^p}.
        """
        lo = math.log((Q1 - 1) / Q1)
        hi = math.log((Q1 + 1) / Q1)
        out = [(lo, hi)]
        for k in range(2, self.levels + 1):
            ln_y = self.level_q(k) - Tower.from_ln(self.level_q(k - 1) * self.p)
            inv_y = Tower.from_ln(-ln_y).to_float()
            lo = lo + math.log1p(-2 * inv_y) if 2 * inv_y < 1 else -math.inf
            hi += math.log1p(inv_y)
            out.append((lo, hi))
        return out

    def invariants(self) -> dict[str, bool]:
        """Parameter identity, growth window for q_k and both count bounds."""
        lo_ok = hi_ok = True
        for k in range(2, self.levels + 1):
            grown = self.level_q(k - 1) * self.p
            lower = Tower.from_ln(grown + math.log(1 / self.eps2))
            upper = Tower.from_ln(grown + math.log(self.N))
            lo_ok &= not self.level_q(k) < lower
            hi_ok &= not upper < self.level_q(k)
        counted = list(enumerate(self.count_offsets(), start=1))
        return {
            "eps_identity": abs((2 + self.eps) * (1 - self.eps2) - self.p) <= 1e-12,
            "q_lower": lo_ok,
            "q_upper": hi_ok,
            "j_prime_below_j": all(lo <= hi for _, (lo, hi) in counted),
            "j_prime_lower": all(lo > -k * LN2 for k, (lo, _) in counted),
            "j_upper": all(hi <= k * LN2 for k, (_, hi) in counted),
            "mass_recursion_below_count": all(
                self.j_prime_offset(k) <= lo for k, (lo, _) in counted
            ),
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "eps": self.eps,
            "eps1": self.eps1,
            "eps2": self.eps2,
            "N": self.N,
            "levels": self.levels,
            "ln_q": [str(v) for v in self.ln_q],
        }


def build_counterexample(eps: float, levels: int) -> EInfSpec:
    """Minimal q_k sequence and level data for the given eps."""
    if eps <= 0 or levels < 1:
        msg = f"need eps > 0 and levels >= 1, got eps={eps}, levels={levels}"
        raise ParamError(msg)
    eps2 = min(eps / 4, EPS2_CAP)
    eps1 = (2 + eps) * (1 - eps2) - 2
    if not 0 < eps1 < eps:
        msg = f"derived eps1={eps1} outside (0, {eps})"
        raise ParamError(msg)
    p = 2 + eps1
    ln_q = [Tower.from_float(math.log(Q1))]
    core = [Tower.from_float(math.log(Q1))]
    for _ in range(1, levels):
        ln_q.append(Tower.from_ln(ln_q[-1] * p + math.log(1 / eps2)))
        core.append(ln_q[-1] * (1 - eps2) + core[-1])
    spec = EInfSpec(
        eps=eps,
        eps1=eps1,
        eps2=eps2,
        N=math.floor(1 / eps2) + 1,
        ln_q=tuple(ln_q),
        core=tuple(core),
    )
    logger.info("counterexample_built", eps=eps, eps1=eps1, eps2=eps2, levels=levels)
    return spec


def counterexample_ratio(spec: EInfSpec, k: int, T: float) -> Tower:
    """
    ln of the bound on int_0^T sup_E|u| / ||u(T)|| for u_0 = sin(q_k pi x):

        -ln(pi q_k) - q_k^p + q_k^2 pi^2 T + ln sqrt 2.

    The numerator uses |sin(a pi)| <= pi ||a||; the denominator is exact
    since int_0^1 sin^2(q_k pi x) dx = 1/2.
    """
    if T <= 0:
        msg = f"observation time must be positive, got {T}"
        raise ParamError(msg)
    ln_q = spec.level_q(k)
    decay = Tower.from_ln(ln_q * spec.p)
    growth = Tower.from_ln(ln_q * 2.0 + math.log(math.pi**2 * T))
    return growth - decay - ln_q + (0.5 * LN2 - math.log(math.pi))


def _ln_count_plus_one_remainder(spec: EInfSpec, k: int) -> Tower:
    """ln(J_k + 1) - (1 - eps_2) ln q_k."""
    if k == 1:
        ln_j1 = spec.ln_J(1).to_float()
        return Tower.from_float(
            math.log(math.exp(ln_j1) + 1) - (1 - spec.eps2) * math.log(Q1)
        )
    return spec.core[k - 2] + spec.j_offset(k)


@dataclass(frozen=True)
class EInfContent:
    """
    Level-k cover sums sum_{j=0}^{J_k} g(|I_{k,j}|) in the log domain.

    Attributes:
        k: level
        ln_feps_sum: g = f_eps
        ln_f0_sum: g = f_0
        ln_halpha_sum: g = h_alpha
        ln_f0_bound: ln(3 q_k^{-eps_1/2})
        f0_margin: ln f0 bound minus ln f0 sum, formed without cancellation
        ln_gauge_gap: ln f0 sum minus ln h_alpha sum
        ln_mu: ln mu(I_{k,j}) = -ln J'_k
    """

    k: int
    ln_feps_sum: Tower
    ln_f0_sum: Tower
    ln_halpha_sum: Tower
    ln_f0_bound: Tower
    f0_margin: Tower
    ln_gauge_gap: Tower
    ln_mu: Tower

    @property
    def f0_within_bound(self) -> bool:
        return self.f0_margin.sign >= 0

    @property
    def halpha_below_f0(self) -> bool:
        return self.ln_gauge_gap.sign > 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "ln_feps_sum": str(self.ln_feps_sum),
            "ln_f0_sum": str(self.ln_f0_sum),
            "ln_halpha_sum": str(self.ln_halpha_sum),
            "ln_f0_bound": str(self.ln_f0_bound),
            "ln_mu": str(self.ln_mu),
            "f0_within_bound": self.f0_within_bound,
            "halpha_below_f0": self.halpha_below_f0,
        }


def f0_margin(spec: EInfSpec, k: int) -> Tower:
    """
    ln 3 + eps_2 ln q_k - (ln(J_k + 1) - (1 - eps_2) ln q_k); nonnegative iff
    the f_0 level sum obeys its 3 q_k^{-eps_1/2} bound.

    For k >= 2, eps_2 ln q_k = q_{k-1}^p is formed directly so the margin
    never subtracts two numbers of the size of ln q_k.
    """
    remainder = _ln_count_plus_one_remainder(spec, k)
    if k == 1:
        head = Tower.from_float(spec.eps2 * math.log(Q1))
    else:
        head = Tower.from_ln(spec.level_q(k - 1) * spec.p)
    return head + math.log(3) - remainder


def einf_content_report(spec: EInfSpec, k: int, alpha: float = 1.0) -> EInfContent:
    """
    Cover sums of the level-k intervals for f_eps, f_0 and h_alpha.

    With |I_k| = e^{-q_k^p}: f_eps(|I_k|) = q_k^{-(1-eps_2)},
    f_0(|I_k|) = q_k^{-(1+eps_1/2)} and h_alpha = f_0 (ln(1/|I_k|))^{-alpha}.
    """
    ln_q = spec.level_q(k)
    remainder = _ln_count_plus_one_remainder(spec, k)
    ln_f0 = ln_q * (-(spec.eps2 + spec.eps1 / 2)) + remainder
    gap = (ln_q.ln() + math.log(spec.p)) * alpha
    return EInfContent(
        k=k,
        ln_feps_sum=remainder,
        ln_f0_sum=ln_f0,
        ln_halpha_sum=ln_f0 - gap,
        ln_f0_bound=ln_q * (-spec.eps1 / 2) + math.log(3),
        f0_margin=f0_margin(spec, k),
        ln_gauge_gap=gap,
        ln_mu=-spec.ln_J_prime(k),
    )


def einf_frostman_profile(spec: EInfSpec, k: int) -> Tower:
    """
    ln(mu(I_{k,j}) / f_eps(|I_{k,j}|)) = -ln J'_k + (1 - eps_2) ln q_k.

    For k >= 2 the ln q_k terms cancel exactly, leaving -S_{k-1} minus the
    J' offset.
    """
    if k == 1:
        return Tower.from_float(
            -spec.ln_J_prime(1).to_float() + (1 - spec.eps2) * math.log(Q1)
        )
    return -(spec.core[k - 2] + spec.j_prime_offset(k))

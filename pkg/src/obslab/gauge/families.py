"""
Gauge-function families.

Every family is evaluated through its log profile Phi(x) = ln g(e^{-x}) in
the variable x = ln(1/t), which keeps t = e^{-10^6} and smaller inside
float range. Beyond the cutoff the gauge continues as the tangent line at
the cutoff, so it is defined, continuous and increasing on (0, inf).

Classes:
    Gauge: Abstract gauge with strict, extended and inverse evaluation
    HAlpha: (log 1/t)^{-1/2} (loglog 1/t)^{-alpha}
    HAlphaBeta: (log 1/t)^{-beta} (loglog 1/t)^{-alpha}
    FAlphaBeta: t^{d-1} h_{alpha,beta}(t)
    PowerDelta: t^delta
    FEps: (log 1/t)^{-1/(2+eps)}

Constants:
    DEFAULT_CUTOFF_LN: ln of the default cutoff e^{-3}
    MAX_LN_X: ln of the largest x = ln(1/t) searched by the inverse
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Final, override

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import brentq

from obslab.errors import DomainError, NoConvergence, ParamError
from obslab.gauge.lognum import LogNum

logger = structlog.get_logger(__name__)

DEFAULT_CUTOFF_LN: Final = -3.0
MAX_LN_X: Final = math.log(1e8)
# slack on the cutoff comparison for lengths produced by the inverse itself
CUTOFF_SLACK: Final = 1e-12
NEWTON_POLISH_STEPS: Final = 3


class Gauge(ABC):
    """Gauge function g with log profile Phi(x) = ln g(e^{-x})."""

    @property
    @abstractmethod
    def cutoff_ln(self) -> float:
        """ln of the upper end of the strict-formula domain."""

    @property
    @abstractmethod
    def family(self) -> str:
        """Config name of the family."""

    @abstractmethod
    def log_profile(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """Phi(x) for x >= ln(1/cutoff)."""

    @abstractmethod
    def log_profile_slope(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        """Phi'(x); strictly negative on the domain."""

    @abstractmethod
    def parameters(self) -> dict[str, Any]:
        """Shape parameters as they appear in configuration."""

    def log_profile_parts(
        self, x: NDArray[np.float64]
    ) -> tuple[float, NDArray[np.float64]]:
        """(p, R) with Phi(x) = -p x + R(x); p carries the t^p power factor."""
        return 0.0, self.log_profile(x)

    def closed_inverse(self, ln_y: float) -> float | None:  # noqa: ARG002
        """x solving Phi(x) = ln_y when a closed form exists."""
        return None

    @property
    def x_cut(self) -> float:
        return -self.cutoff_ln

    def to_config(self) -> dict[str, Any]:
        return {"family": self.family, **self.parameters(), "cutoff_ln": self.cutoff_ln}

    def _check_cutoff(self, *, needs_loglog: bool) -> None:
        limit = -1.0 if needs_loglog else 0.0
        if self.cutoff_ln >= limit:
            msg = f"{self.family}: cutoff e^{self.cutoff_ln} must lie below e^{limit}"
            raise ParamError(msg)

    def eval(self, t: LogNum) -> LogNum:
        """Strict formula g(t) on (0, cutoff]."""
        if t.sign != 1 or t.ln_mag > self.cutoff_ln + CUTOFF_SLACK:
            msg = f"{self.family}: t={t} outside (0, e^{self.cutoff_ln}]"
            raise DomainError(msg)
        x = max(-t.ln_mag, self.x_cut)
        return LogNum(1, float(self.log_profile(np.asarray(x))))

    def eval_ln(self, ln_t: float) -> float:
        """ln g(e^{ln_t}) by the strict formula."""
        return self.eval(LogNum(1, ln_t)).ln_mag

    def value_at_cutoff(self) -> float:
        return math.exp(float(self.log_profile(np.asarray(self.x_cut))))

    def slope_at_cutoff(self) -> float:
        x = np.asarray(self.x_cut)
        g = math.exp(float(self.log_profile(x)))
        return -g * float(self.log_profile_slope(x)) / math.exp(self.cutoff_ln)

    def value(self, t: ArrayLike) -> NDArray[np.float64]:
        """Extended gauge on [0, inf): strict below the cutoff, tangent line above."""
        t_arr = np.asarray(t, dtype=float)
        return np.exp(self.ln_value(np.log(np.where(t_arr > 0, t_arr, 1.0)))) * (
            t_arr > 0
        )

    def ln_value(self, ln_t: ArrayLike) -> NDArray[np.float64]:
        """ln of the extended gauge at t = e^{ln_t}, vectorized."""
        ln_arr = np.asarray(ln_t, dtype=float)
        inside = ln_arr <= self.cutoff_ln
        x = np.where(inside, -ln_arr, self.x_cut)
        strict = self.log_profile(x)
        t_out = np.exp(np.where(inside, self.cutoff_ln, np.minimum(ln_arr, 700.0)))
        linear = self.value_at_cutoff() + self.slope_at_cutoff() * (
            t_out - math.exp(self.cutoff_ln)
        )
        return np.where(inside, strict, np.log(linear))

    def derivative(self, t: ArrayLike) -> NDArray[np.float64]:
        """g'(t) of the extended gauge."""
        t_arr = np.asarray(t, dtype=float)
        inside = t_arr <= math.exp(self.cutoff_ln)
        safe_t = np.where(inside & (t_arr > 0), t_arr, math.exp(self.cutoff_ln))
        x = -np.log(safe_t)
        g = np.exp(self.log_profile(x))
        strict = -g * self.log_profile_slope(x) / safe_t
        return np.where(inside, strict, self.slope_at_cutoff())

    def inverse(self, y: LogNum) -> LogNum:
        """t in (0, cutoff] with g(t) = y, solved on ln ln(1/t)."""
        ln_top = float(self.log_profile(np.asarray(self.x_cut)))
        if y.sign != 1 or y.ln_mag > ln_top + CUTOFF_SLACK:
            msg = f"{self.family}: y={y} outside (0, g(cutoff)]"
            raise DomainError(msg)
        ln_y = min(y.ln_mag, ln_top)
        x = self.closed_inverse(ln_y)
        if x is None:
            x = self._solve_profile(ln_y)
        return LogNum(1, -max(x, self.x_cut))

    def _solve_profile(self, ln_y: float) -> float:
        u_lo, u_hi = math.log(self.x_cut), MAX_LN_X

        def residual(u: float) -> float:
            return float(self.log_profile(np.asarray(math.exp(u)))) - ln_y

        if residual(u_hi) > 0:
            msg = f"{self.family}: ln y={ln_y} below g(e^-1e8)"
            raise DomainError(msg)
        if residual(u_lo) <= 0:
            return self.x_cut
        try:
            u = brentq(residual, u_lo, u_hi, xtol=1e-15, rtol=1e-15, maxiter=500)
        except RuntimeError as e:
            logger.exception("gauge_inverse_failed", family=self.family, ln_y=ln_y)
            raise NoConvergence(str(e)) from e
        x_root = math.exp(u)
        x, x_lo, x_hi = x_root, math.exp(u_lo), math.exp(u_hi)
        best = abs(residual(u))
        for _ in range(NEWTON_POLISH_STEPS):
            xs = np.asarray(x)
            step = (float(self.log_profile(xs)) - ln_y) / float(
                self.log_profile_slope(xs)
            )
            candidate = x - step
            if not (math.isfinite(candidate) and x_lo <= candidate <= x_hi):
                logger.debug("newton_polish_left_bracket", family=self.family)
                return x_root
            miss = abs(float(self.log_profile(np.asarray(candidate))) - ln_y)
            if miss > best:
                break
            x, best = candidate, miss
        return x


def _loglog_terms(
    x: NDArray[np.float64], alpha: float
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    ln_x = np.log(x)
    if alpha == 0:
        return np.zeros_like(ln_x), np.zeros_like(ln_x)
    return alpha * np.log(ln_x), alpha / (x * ln_x)


@dataclass(frozen=True)
class HAlpha(Gauge):
    """h_alpha(t) = (log 1/t)^{-1/2} (loglog 1/t)^{-alpha}."""

    alpha: float = 0.0
    cutoff_ln: float = DEFAULT_CUTOFF_LN

    def __post_init__(self) -> None:
        if self.alpha < 0:
            msg = f"h_alpha needs alpha >= 0, got {self.alpha}"
            raise ParamError(msg)
        self._check_cutoff(needs_loglog=self.alpha > 0)

    @property
    @override
    def family(self) -> str:
        return "h_alpha"

    @override
    def parameters(self) -> dict[str, Any]:
        return {"alpha": self.alpha}

    @override
    def log_profile(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        loglog, _ = _loglog_terms(np.asarray(x, dtype=float), self.alpha)
        return -0.5 * np.log(x) - loglog

    @override
    def log_profile_slope(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        _, slope = _loglog_terms(x, self.alpha)
        return -0.5 / x - slope

    @override
    def closed_inverse(self, ln_y: float) -> float | None:
        if self.alpha == 0:
            return math.exp(-2.0 * ln_y)
        return None


@dataclass(frozen=True)
class HAlphaBeta(Gauge):
    """h_{alpha,beta}(t) = (log 1/t)^{-beta} (loglog 1/t)^{-alpha}."""

    alpha: float = 0.0
    beta: float = 1.0
    cutoff_ln: float = DEFAULT_CUTOFF_LN

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.beta < 0:
            msg = f"h_alpha_beta needs alpha, beta >= 0, got {self.alpha}, {self.beta}"
            raise ParamError(msg)
        if self.alpha == 0 and self.beta == 0:
            msg = "h_alpha_beta with alpha = beta = 0 is constant"
            raise ParamError(msg)
        self._check_cutoff(needs_loglog=self.alpha > 0)

    @property
    @override
    def family(self) -> str:
        return "h_alpha_beta"

    @override
    def parameters(self) -> dict[str, Any]:
        return {"alpha": self.alpha, "beta": self.beta}

    @override
    def log_profile(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        loglog, _ = _loglog_terms(np.asarray(x, dtype=float), self.alpha)
        return -self.beta * np.log(x) - loglog

    @override
    def log_profile_slope(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        _, slope = _loglog_terms(x, self.alpha)
        return -self.beta / x - slope

    @override
    def closed_inverse(self, ln_y: float) -> float | None:
        if self.alpha == 0:
            return math.exp(-ln_y / self.beta)
        return None


@dataclass(frozen=True)
class FAlphaBeta(Gauge):
    """F_{alpha,beta}(t) = t^{d-1} h_{alpha,beta}(t) in dimension d."""

    alpha: float = 0.0
    beta: float = 1.0
    d: int = 1
    cutoff_ln: float = DEFAULT_CUTOFF_LN

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.beta < 0 or self.d < 1:
            msg = f"f_alpha_beta needs alpha, beta >= 0 and d >= 1, got {self}"
            raise ParamError(msg)
        if self.alpha == 0 and self.beta == 0 and self.d == 1:
            msg = "f_alpha_beta with alpha = beta = 0 and d = 1 is constant"
            raise ParamError(msg)
        self._check_cutoff(needs_loglog=self.alpha > 0)

    @property
    @override
    def family(self) -> str:
        return "f_alpha_beta"

    @override
    def parameters(self) -> dict[str, Any]:
        return {"alpha": self.alpha, "beta": self.beta, "d": self.d}

    @override
    def log_profile(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        loglog, _ = _loglog_terms(x, self.alpha)
        return -(self.d - 1) * x - self.beta * np.log(x) - loglog

    @override
    def log_profile_slope(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=float)
        _, slope = _loglog_terms(x, self.alpha)
        return -(self.d - 1) - self.beta / x - slope

    @override
    def log_profile_parts(
        self, x: NDArray[np.float64]
    ) -> tuple[float, NDArray[np.float64]]:
        x = np.asarray(x, dtype=float)
        loglog, _ = _loglog_terms(x, self.alpha)
        return float(self.d - 1), -self.beta * np.log(x) - loglog

    @override
    def closed_inverse(self, ln_y: float) -> float | None:
        if self.alpha == 0 and self.d == 1:
            return math.exp(-ln_y / self.beta)
        if self.alpha == 0 and self.beta == 0:
            return -ln_y / (self.d - 1)
        return None


@dataclass(frozen=True)
class PowerDelta(Gauge):
    """g_delta(t) = t^delta; the cutoff may be any positive number."""

    delta: float = 1.0
    cutoff_ln: float = DEFAULT_CUTOFF_LN

    def __post_init__(self) -> None:
        if self.delta <= 0:
            msg = f"power gauge needs delta > 0, got {self.delta}"
            raise ParamError(msg)

    @property
    @override
    def family(self) -> str:
        return "power"

    @override
    def parameters(self) -> dict[str, Any]:
        return {"delta": self.delta}

    @override
    def log_profile(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return -self.delta * np.asarray(x, dtype=float)

    @override
    def log_profile_slope(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.full_like(np.asarray(x, dtype=float), -self.delta)

    @override
    def log_profile_parts(
        self, x: NDArray[np.float64]
    ) -> tuple[float, NDArray[np.float64]]:
        return self.delta, np.zeros_like(np.asarray(x, dtype=float))

    @override
    def closed_inverse(self, ln_y: float) -> float | None:
        return -ln_y / self.delta


@dataclass(frozen=True)
class FEps(Gauge):
    """f_eps(t) = (log 1/t)^{-1/(2+eps)}; eps = 0 gives f_0 = h_0."""

    eps: float = 0.0
    cutoff_ln: float = DEFAULT_CUTOFF_LN

    def __post_init__(self) -> None:
        if self.eps < 0:
            msg = f"f_eps needs eps >= 0, got {self.eps}"
            raise ParamError(msg)
        self._check_cutoff(needs_loglog=False)

    @property
    @override
    def family(self) -> str:
        return "f_eps"

    @override
    def parameters(self) -> dict[str, Any]:
        return {"eps": self.eps}

    @property
    def exponent(self) -> float:
        return 1.0 / (2.0 + self.eps)

    @override
    def log_profile(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return -self.exponent * np.log(np.asarray(x, dtype=float))

    @override
    def log_profile_slope(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return -self.exponent / np.asarray(x, dtype=float)

    @override
    def closed_inverse(self, ln_y: float) -> float | None:
        return math.exp(-ln_y / self.exponent)

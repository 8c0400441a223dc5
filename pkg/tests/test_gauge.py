import math
from dataclasses import dataclass
from typing import override

import numpy as np
import pytest
import structlog
from numpy.typing import NDArray

from obslab.errors import DomainError, ParamError
from obslab.gauge import (
    FAlphaBeta,
    FEps,
    Gauge,
    GaugeConfig,
    HAlpha,
    HAlphaBeta,
    LogNum,
    PowerDelta,
    Tower,
    log_sum,
)

logger = structlog.get_logger(__name__)

LN_RTOL = 1e-12


@pytest.fixture
def h0() -> HAlpha:
    """Fixture to provide the alpha = 0 gauge (log 1/t)^{-1/2}"""
    return HAlpha(alpha=0.0)


@pytest.fixture
def h1() -> HAlpha:
    """Fixture to provide h_1"""
    return HAlpha(alpha=1.0)


def test_h0_at_e_minus_4(h0: HAlpha) -> None:
    assert h0.eval(LogNum(1, -4.0)).to_real() == pytest.approx(0.5, rel=LN_RTOL)


def test_h1_at_e_minus_e_squared(h1: HAlpha) -> None:
    value = h1.eval(LogNum(1, -math.e**2)).to_real()
    assert value == pytest.approx(1 / (2 * math.e), rel=1e-12)
    assert value == pytest.approx(0.183940, abs=1e-6)


@pytest.mark.parametrize("k", range(1, 21))
def test_h0_on_cantor_lengths(h0: HAlpha, k: int) -> None:
    """h_0(e^{-4^k}) = 2^{-k}"""
    ln_value = h0.eval_ln(-(4.0**k))
    assert ln_value == pytest.approx(-k * math.log(2), rel=LN_RTOL)


def test_eval_vanishes_at_tiny_t(h0: HAlpha) -> None:
    assert h0.eval(LogNum(1, -1e6)).to_real() < 1e-2
    assert h0.eval_ln(-1e6) == pytest.approx(-0.5 * math.log(1e6))


def test_eval_rejects_t_above_cutoff(h0: HAlpha) -> None:
    with pytest.raises(DomainError):
        h0.eval(LogNum(1, -1.0))
    with pytest.raises(DomainError):
        h0.eval(LogNum.zero())


def test_h0_inverse_closed_form(h0: HAlpha) -> None:
    assert h0.inverse(LogNum.from_real(0.5)).ln_mag == pytest.approx(-4.0)


@pytest.mark.parametrize(
    "gauge",
    [
        HAlpha(alpha=1.0),
        HAlphaBeta(alpha=2.0, beta=0.3),
        FAlphaBeta(alpha=1.5, beta=1.0, d=2),
        FEps(eps=1.0),
    ],
)
@pytest.mark.parametrize("ln_t", [-5.0, -50.0, -1e4])
def test_inverse_recovers_t(gauge: Gauge, ln_t: float) -> None:
    y = gauge.eval(LogNum(1, ln_t))
    assert gauge.inverse(y).ln_mag == pytest.approx(ln_t, rel=1e-9)


def test_h1_inverse_of_scaled_value(h1: HAlpha) -> None:
    """h^{-1}(h(H)/n) is a t with g(t) = g(H)/n and lies below H"""
    H, n = LogNum(1, -10.0), 8
    t = h1.inverse(h1.eval(H) / n)
    assert t < H
    assert h1.eval(t).ln_mag == pytest.approx(h1.eval(H).ln_mag - math.log(n))


@dataclass(frozen=True)
class FlatSlopeHAlpha(HAlpha):
    """h_alpha whose reported slope is far too flat for Newton steps"""

    @override
    def log_profile_slope(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.full_like(np.asarray(x, dtype=float), -1e-30)


def test_inverse_keeps_bracketed_root_when_polish_escapes() -> None:
    g = FlatSlopeHAlpha(alpha=1.0)
    y = g.eval(LogNum(1, -50.0))
    assert g.inverse(y).ln_mag == pytest.approx(-50.0, rel=1e-9)


def test_extension_is_continuous_and_increasing() -> None:
    g = HAlpha(alpha=1.0)
    at_cutoff = float(g.ln_value(g.cutoff_ln))
    just_above = float(g.ln_value(g.cutoff_ln + 1e-9))
    assert just_above == pytest.approx(at_cutoff, abs=1e-8)
    far = g.ln_value(np.array([0.0, 1.0, 5.0]))
    assert np.all(np.diff(far) > 0)
    assert float(g.value(0.0)) == 0.0


@pytest.mark.parametrize("t", [1e-6, 1e-3, 0.02, 0.5])
def test_derivative_matches_finite_difference(t: float) -> None:
    g = HAlphaBeta(alpha=1.0, beta=0.5)
    h = t * 1e-6
    numeric = (float(g.value(t + h)) - float(g.value(t - h))) / (2 * h)
    assert float(g.derivative(t)) == pytest.approx(numeric, rel=1e-5)


def test_power_gauge_closed_inverse() -> None:
    g = PowerDelta(delta=0.5)
    assert g.eval_ln(-8.0) == pytest.approx(-4.0)
    assert g.inverse(LogNum(1, -4.0)).ln_mag == pytest.approx(-8.0)


@pytest.mark.parametrize(
    ("factory", "kwargs"),
    [
        (HAlphaBeta, {"alpha": 0.0, "beta": 0.0}),
        (HAlpha, {"alpha": 1.0, "cutoff_ln": -0.5}),
        (HAlpha, {"alpha": -1.0}),
        (FAlphaBeta, {"alpha": 0.0, "beta": 0.0, "d": 1}),
        (PowerDelta, {"delta": 0.0}),
        (FEps, {"eps": -0.1}),
    ],
)
def test_invalid_parameters(factory: type, kwargs: dict[str, float]) -> None:
    with pytest.raises(ParamError):
        factory(**kwargs)


def test_config_builds_and_round_trips() -> None:
    config = GaugeConfig(family="f_alpha_beta", alpha=1.0, beta=2.0, d=2)
    g = config.build()
    assert isinstance(g, FAlphaBeta)
    assert GaugeConfig.model_validate(g.to_config()).build() == g


def test_config_rejects_unknown_keys() -> None:
    with pytest.raises(ValueError, match="gamma"):
        GaugeConfig.model_validate({"family": "h_alpha", "gamma": 1.0})


def test_lognum_arithmetic() -> None:
    a, b = LogNum.from_real(3.0), LogNum.from_real(-2.0)
    assert (a + b).to_real() == pytest.approx(1.0)
    assert (a * b).to_real() == pytest.approx(-6.0)
    assert (a / b).to_real() == pytest.approx(-1.5)
    assert (a - a).is_zero()
    assert b < a
    assert (a**2).to_real() == pytest.approx(9.0)
    assert log_sum([a, b, LogNum.from_real(4.0)]).to_real() == pytest.approx(5.0)


def test_lognum_beyond_float_range() -> None:
    huge = LogNum(1, 1e4)
    assert huge.to_real() == math.inf
    assert huge.to_dict()["value"] is None
    assert (huge / huge).to_real() == pytest.approx(1.0)
    assert str(huge).startswith("exp(")


def test_tower_stacks_exponentials() -> None:
    x = Tower.from_ln(1000.0)
    assert x.height == 1
    assert x.to_float() == math.inf
    assert str(x) == "exp^1(1000)"
    assert (x + x).ln().to_float() == pytest.approx(1000 + math.log(2))
    assert (x - x).is_zero()
    assert Tower.from_float(1e300) < x
    assert Tower.from_ln(Tower.from_ln(1000.0)).height == 2


def test_tower_small_values_stay_plain() -> None:
    x = Tower.from_ln(2.0)
    assert x.height == 0
    assert x.to_float() == pytest.approx(math.exp(2.0))
    assert (x * 3.0).to_float() == pytest.approx(3 * math.exp(2.0))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

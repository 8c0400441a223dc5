import math

import numpy as np
import pytest
import structlog
from pydantic import ValidationError

from obslab.errors import ParamError, SeparationError
from obslab.fractal import (
    CantorLevel,
    CantorSetConfig,
    CantorSpec,
    IntervalUnion,
    PeriodicSet,
    best_subinterval_content,
    build_cantor,
    content_upper,
    frostman_lower,
    thickness_report,
)
from obslab.gauge import HAlpha, PowerDelta

logger = structlog.get_logger(__name__)

FROSTMAN_DEPTH = 6


@pytest.fixture
def h0() -> HAlpha:
    """Fixture to provide the gauge driving the classical construction"""
    return HAlpha(alpha=0.0)


@pytest.fixture
def h0_spec(h0: HAlpha) -> CantorSpec:
    """Fixture to provide the h_0 Cantor rule c_k = e^{-4^k} on [0, 1]"""
    return CantorSpec(gauge=h0)


@pytest.fixture
def h0_level(h0_spec: CantorSpec) -> CantorLevel:
    """Fixture to provide the h_0 Cantor level used for Frostman checks"""
    return build_cantor(h0_spec, FROSTMAN_DEPTH)


def test_depth_zero_is_the_base(h0_spec: CantorSpec) -> None:
    level = build_cantor(h0_spec, 0)
    assert level.intervals() == [(0.0, 1.0)]


def test_depth_one_intervals(h0_spec: CantorSpec) -> None:
    (a0, b0), (a1, b1) = build_cantor(h0_spec, 1).intervals()
    c1 = math.exp(-4.0)
    assert (a0, b0) == pytest.approx((0.0, c1))
    assert (a1, b1) == pytest.approx((1 - c1, 1.0))


def test_depth_three_lengths(h0_spec: CantorSpec) -> None:
    level = build_cantor(h0_spec, 3)
    assert level.atom_count == 8
    assert level.ln_length == pytest.approx(-64.0)
    assert level.total_mass == pytest.approx(1.0)


def test_lengths_far_below_float_resolution(h0_spec: CantorSpec) -> None:
    level = build_cantor(h0_spec, 8)
    assert level.ln_length == pytest.approx(-(4.0**8))
    assert np.all(np.diff(level.left_floats()) >= 0)


def test_separation_is_enforced() -> None:
    with pytest.raises(SeparationError):
        build_cantor(CantorSpec(ln_lengths=(-0.5,)), 1)


def test_spec_needs_exactly_one_rule(h0: HAlpha) -> None:
    with pytest.raises(ParamError):
        CantorSpec()
    with pytest.raises(ParamError):
        CantorSpec(ln_lengths=(-4.0,), gauge=h0)


@pytest.mark.parametrize("depth", [1, 5, 12, 16, 20])
def test_h0_content_is_one(h0_spec: CantorSpec, h0: HAlpha, depth: int) -> None:
    upper = content_upper(build_cantor(h0_spec, depth), h0)
    assert upper.to_real() == pytest.approx(1.0, rel=1e-12)


def test_deepest_level_paths(h0_spec: CantorSpec) -> None:
    level = build_cantor(h0_spec, 20)
    assert level.atom_count == 2**20
    assert level.bits.shape == (2**20, 20)
    assert not level.bits[0].any()
    assert level.bits[-1].all()
    np.testing.assert_array_equal(level.bits[5, -3:], [1, 0, 1])
    with pytest.raises(ParamError):
        build_cantor(h0_spec, 21)


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_power_gauge_content_vanishes(h0_spec: CantorSpec, depth: int) -> None:
    """2^k e^{-delta 4^k} with delta = 1"""
    upper = content_upper(build_cantor(h0_spec, depth), PowerDelta(delta=1.0))
    assert upper.ln_mag == pytest.approx(depth * math.log(2) - 4.0**depth)


def test_single_interval_content(h0: HAlpha) -> None:
    union = IntervalUnion.from_pairs([(0.0, math.exp(-4.0))])
    assert content_upper(union, h0).to_real() == pytest.approx(0.5)


def test_frostman_lower_bound_on_h0_cantor(h0_level: CantorLevel, h0: HAlpha) -> None:
    certificate = frostman_lower(h0_level, h0)
    lower = certificate.lower_bound.to_real()
    assert lower >= 0.25 - 0.05
    assert lower <= content_upper(h0_level, h0).to_real() + 1e-12
    assert certificate.to_dict()["label"] == "empirical Frostman constant"


def test_frostman_on_lebesgue_interval() -> None:
    certificate = frostman_lower(
        IntervalUnion.from_pairs([(0.0, 1.0)]), PowerDelta(delta=1.0)
    )
    assert certificate.a2_hat <= 1 + 1e-9
    assert certificate.lower_bound.to_real() >= 1 - 1e-9


def test_frostman_single_atom_saturates(h0_spec: CantorSpec, h0: HAlpha) -> None:
    level = build_cantor(h0_spec, 2)
    single = level.select(np.arange(level.atom_count) == 0)
    certificate = frostman_lower(single, h0)
    ln_g = h0.eval_ln(single.ln_length)
    assert certificate.ln_a2 == pytest.approx(math.log(0.25) - ln_g, abs=1e-12)
    assert certificate.lower_bound.ln_mag == pytest.approx(ln_g, abs=1e-12)


def test_subdivision_keeps_a_share(h0: HAlpha) -> None:
    level = build_cantor(CantorSpec(base=(0.0, 3.0), gauge=h0), 4)
    report = best_subinterval_content(level, h0)
    assert report.pieces == 3
    assert report.holds


def test_periodized_h0_cantor_is_thick(h0: HAlpha) -> None:
    cell = build_cantor(CantorSpec(gauge=h0), 5)
    report = thickness_report(PeriodicSet(cell), h0, 2.0, np.linspace(0, 1, 5))
    assert report.gamma_hat >= (0.25 - 0.05) / 2


def test_empty_cell_window_has_zero_thickness(h0: HAlpha) -> None:
    cell = build_cantor(CantorSpec(gauge=h0), 4)
    window_set = PeriodicSet(cell, period=2, occupied=(0,))
    report = thickness_report(window_set, h0, 1.0, [0.0, 1.0])
    assert report.gamma_hat == 0.0
    assert report.worst_window == 1.0


def test_classical_thick_set() -> None:
    gamma = 0.3
    window_set = PeriodicSet(IntervalUnion.from_pairs([(0.0, gamma)]))
    x_samples = np.linspace(0.0, 1.0, 8, endpoint=False)
    report = thickness_report(window_set, PowerDelta(delta=1.0), 1.0, x_samples)
    assert report.gamma_hat == pytest.approx(gamma, abs=1e-9)


def test_invalid_periodization(h0_level: CantorLevel) -> None:
    with pytest.raises(ParamError):
        PeriodicSet(h0_level, period=2, occupied=(2,))


def test_cantor_config_builds() -> None:
    config = CantorSetConfig.model_validate(
        {"rule": {"gauge": {"family": "h_alpha"}}, "depth": 3}
    )
    assert config.build().atom_count == 8
    explicit = CantorSetConfig.model_validate(
        {"rule": {"ln_lengths": [-4.0, -16.0]}, "depth": 2}
    )
    assert explicit.build().ln_length == pytest.approx(-16.0)


def test_cantor_config_rejects_unknown_keys() -> None:
    with pytest.raises(ValidationError):
        CantorSetConfig.model_validate(
            {"rule": {"ln_lengths": [-4.0]}, "depth": 1, "colour": "red"}
        )
    with pytest.raises(ValidationError):
        CantorSetConfig.model_validate({"rule": {"ln_lengths": [-4.0]}, "depth": 21})


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

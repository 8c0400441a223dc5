import math

import numpy as np
import pytest
import structlog

from obslab.bandlimited import (
    BandLimited,
    bernstein_check,
    bernstein_ratio,
    cell_tail_certificate,
    classify_cells,
    max_index,
    random_bandlimited,
    required_constant,
    single_mode,
    uncertainty_bound_ln,
    uncertainty_experiment,
    uncertainty_ratio_ln,
)
from obslab.bandlimited.signal import POINTS_PER_CELL
from obslab.errors import DegenerateSet, MassViolation, ParamError
from obslab.fractal import CantorSpec, PeriodicSet, build_cantor
from obslab.gauge import HAlpha

logger = structlog.get_logger(__name__)

BANDWIDTH = 4.0


@pytest.fixture
def rng() -> np.random.Generator:
    """Fixture to provide a fixed random stream"""
    return np.random.default_rng(99)


@pytest.fixture
def sine() -> BandLimited:
    """Fixture to provide sin(pi x / 8), period sixteen cells"""
    return single_mode(4)


@pytest.fixture
def h0_periodic() -> PeriodicSet:
    """Fixture to provide Z + the h_0 Cantor set at depth 4"""
    return PeriodicSet(build_cantor(CantorSpec(gauge=HAlpha(alpha=0.0)), 4))


def test_modes_within_bandwidth() -> None:
    assert max_index(math.pi / 8, 64) == 4
    with pytest.raises(ParamError):
        BandLimited(math.pi / 8, 64, np.ones(6, dtype=complex))
    with pytest.raises(ParamError):
        BandLimited(0.0, 64, np.ones(1, dtype=complex))


def test_pointwise_matches_fft_grid(rng: np.random.Generator) -> None:
    u = random_bandlimited(BANDWIDTH, rng)
    x = np.arange(u.W * POINTS_PER_CELL) / POINTS_PER_CELL
    np.testing.assert_allclose(u(x), u.grid_values(), atol=1e-9)
    np.testing.assert_allclose(u(x, 2), u.grid_values(2), atol=1e-9)


def test_sine_saturates_bernstein(sine: BandLimited) -> None:
    assert bernstein_ratio(sine, 1) == pytest.approx(1.0, rel=1e-9)
    assert bernstein_ratio(sine, 3) == pytest.approx(1.0, rel=1e-9)


def test_bernstein_check_fits_every_order() -> None:
    rows, fit = bernstein_check(BANDWIDTH, 4, 5, seed=6)
    assert len(rows) == 20
    assert fit.violations == 0
    assert fit.constant > 0


def test_bernstein_order_is_capped() -> None:
    with pytest.raises(ValueError, match="m_max"):
        bernstein_check(BANDWIDTH, 9, 1, seed=0)


def test_bernstein_constant_is_stable_across_trial_counts() -> None:
    _, few = bernstein_check(BANDWIDTH, 8, 100, seed=21)
    _, many = bernstein_check(BANDWIDTH, 8, 1000, seed=21)
    assert few.constant <= many.constant
    assert many.constant <= 1.10 * few.constant


def test_tail_certificate_at_twice_the_constant() -> None:
    certificate = cell_tail_certificate(1.3, 2.6, 12)
    assert certificate == pytest.approx(0.25**12 / 0.75, rel=1e-12)
    assert certificate < 1e-6


@pytest.mark.parametrize(
    ("ratio", "m_cap"),
    [(0.5, 12), (1.7, 12), (math.sqrt(3.0), 12), (2.0, 4)],
)
def test_tail_certificate_rejects_small_thresholds(ratio: float, m_cap: int) -> None:
    with pytest.raises(ParamError):
        cell_tail_certificate(1.0, ratio, m_cap)


def test_classification_carries_the_certificate(rng: np.random.Generator) -> None:
    u = random_bandlimited(BANDWIDTH, rng)
    _, fit = bernstein_check(BANDWIDTH, 8, 5, seed=12)
    cells = classify_cells(u, 2 * fit.constant, bernstein_C=fit.constant)
    assert cells.tail_certificate is not None
    assert cells.tail_certificate < 1e-6
    assert classify_cells(u, 2 * fit.constant).tail_certificate is None
    with pytest.raises(ParamError):
        classify_cells(u, fit.constant, bernstein_C=fit.constant)


def test_constant_cells_are_good() -> None:
    u = BandLimited(1.0, 64, np.array([2.0 + 0j]))
    cells = classify_cells(u, 1.0)
    assert cells.good.all()
    assert cells.bad_mass_fraction == 0.0


def test_sine_cells_are_good_with_margin(sine: BandLimited) -> None:
    """sin(pi/8) > 1/4 bounds every cell sup from below"""
    cells = classify_cells(sine, 4.0)
    assert cells.good.all()


def test_random_cells_keep_half_the_mass(rng: np.random.Generator) -> None:
    _, fit = bernstein_check(BANDWIDTH, 8, 5, seed=12)
    u = random_bandlimited(BANDWIDTH, rng)
    cells = classify_cells(u, 2 * fit.constant)
    assert cells.bad_mass_fraction <= 0.5
    assert cells.chain_holds
    assert np.array_equal(cells.good, ~cells.bad)
    assert cells.good.size == u.W


def test_tiny_a_breaks_the_mass_split(rng: np.random.Generator) -> None:
    u = random_bandlimited(BANDWIDTH, rng)
    with pytest.raises(MassViolation):
        classify_cells(u, 0.01)


def test_full_line_observation_has_unit_ratio(rng: np.random.Generator) -> None:
    u = random_bandlimited(BANDWIDTH, rng)
    e_points = np.arange(u.W * POINTS_PER_CELL) / POINTS_PER_CELL
    assert uncertainty_ratio_ln(u, e_points, 1.0) == pytest.approx(0.0, abs=1e-9)


def test_required_constant_floor_and_root() -> None:
    L, gamma = 1.0, 0.5
    assert required_constant(0.0, 8.0, L, gamma, 0.0) == pytest.approx(1 / 8)
    C = required_constant(100.0, 8.0, L, gamma, 1.0)
    assert C > 1 / 8
    assert uncertainty_bound_ln(C, 8.0, L, gamma, 1.0) == pytest.approx(100.0)


def test_uncertainty_on_periodic_cantor(h0_periodic: PeriodicSet) -> None:
    report = uncertainty_experiment(h0_periodic, 0.0, 2.0, [4.0, 8.0], 3, seed=21)
    assert report.gamma > 0
    assert len(report.rows) == 6
    assert report.fit.violations == 0
    assert all(r["pass"] for r in report.rows)


def test_uncertainty_rejects_thin_sets(h0_periodic: PeriodicSet) -> None:
    with pytest.raises(DegenerateSet):
        uncertainty_experiment(h0_periodic, 0.0, 2.0, [4.0], 1, seed=0, gamma=0.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

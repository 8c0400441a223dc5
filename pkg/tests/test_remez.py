import math

import numpy as np
import pytest
import structlog

from obslab.errors import DomainError
from obslab.fractal import CantorSpec, IntervalUnion, build_cantor
from obslab.gauge import HAlpha
from obslab.lemniscate import Polynomial, random_polynomial
from obslab.remez import (
    SupTriple,
    certified_content,
    eps_grid,
    jensen_suite,
    jensen_zero_bound,
    propagation_experiment,
    remez_experiment,
    remez_ratio_ln,
    required_eps_constant,
    required_power_constant,
    sup_disc,
)

logger = structlog.get_logger(__name__)

UNIT_GRID = np.linspace(0.0, 1.0, 4097)


def constant(value: float) -> Polynomial:
    return Polynomial(complex(value), np.array([], dtype=complex))


@pytest.fixture
def cantor_points() -> np.ndarray:
    """Fixture to provide sample points of the h_0 Cantor set at depth 5"""
    return build_cantor(CantorSpec(gauge=HAlpha(alpha=0.0)), 5).sample_points()


@pytest.mark.parametrize("n", [1, 4, 16])
def test_sup_of_monomial(n: int) -> None:
    estimate = sup_disc(Polynomial.monic([0j] * n), 1.0)
    assert estimate.value.ln_mag == pytest.approx(0.0, abs=1e-12)
    assert estimate.grid_points == max(4096, 64 * n)


def test_sup_of_shifted_linear() -> None:
    assert sup_disc(Polynomial.monic([-1.0]), 1.0).value.to_real() == pytest.approx(2.0)


def test_sup_refinement_stays_inside_slack() -> None:
    p = random_polynomial(16, "disc", np.random.default_rng(11))
    coarse = sup_disc(p, 1.0)
    fine = sup_disc(p, 1.0, points=2 * coarse.grid_points)
    assert fine.value.ln_mag >= coarse.value.ln_mag - 1e-12
    assert fine.value.ln_mag <= coarse.upper.ln_mag + 1e-12


def test_sup_rejects_nonpositive_radius() -> None:
    with pytest.raises(DomainError):
        sup_disc(Polynomial.monic([0j]), 0.0)


def test_jensen_constant_has_no_zeros() -> None:
    check = jensen_zero_bound(constant(1.0))
    assert check.m == 0
    assert check.bound == pytest.approx(0.0, abs=1e-12)


def test_jensen_linear_factor() -> None:
    """sup of |z - 1| over the disc of radius 4 is 5"""
    check = jensen_zero_bound(Polynomial.monic([1.0]))
    assert check.m == 1
    assert check.bound == pytest.approx(math.log(5) / math.log(2), rel=1e-9)
    assert check.holds


def test_jensen_suite_has_no_exceptions() -> None:
    rows = jensen_suite([2, 8, 32], trials=6, seed=3)
    assert len(rows) == 18
    assert all(r["pass"] for r in rows)


def test_constant_remez_ratio_is_one(cantor_points: np.ndarray) -> None:
    assert remez_ratio_ln(constant(2.0), cantor_points) == pytest.approx(0.0)


def test_remez_suite_fits_without_violations() -> None:
    level = build_cantor(CantorSpec(gauge=HAlpha(alpha=0.0)), 5)
    report = remez_experiment([2, 4], level, 0.0, trials=4, seed=1)
    assert report.fit.violations == 0
    assert all(r["pass"] for r in report.rows)
    assert all(r["ratio_ln"] >= 0 for r in report.rows)
    assert report.content == pytest.approx(certified_content(level, 0.0))


def test_remez_fit_on_small_degrees_is_reported() -> None:
    level = build_cantor(CantorSpec(gauge=HAlpha(alpha=0.0)), 4)
    report = remez_experiment([2, 4, 8], level, 1.0, trials=3, seed=5, fit_max_n=4)
    assert report.fit.fit_instances == 6
    assert report.fit.instances == 9
    assert report.to_dict()["fitted_C"] == report.fit.constant
    assert all(r["pass"] for r in report.rows if r["n"] <= 4)


def test_remez_constant_is_stable_across_trial_counts() -> None:
    unit = IntervalUnion.from_pairs([(0.0, 1.0)])
    few = remez_experiment([4, 8], unit, 0.0, trials=100, seed=13)
    many = remez_experiment([4, 8], unit, 0.0, trials=1000, seed=13)
    assert math.isfinite(many.fit.constant)
    assert few.fit.constant <= many.fit.constant
    assert many.fit.constant == pytest.approx(few.fit.constant, rel=0.2, abs=1e-12)
    assert many.fit.violations == 0


def test_eps_grid_spacing() -> None:
    assert eps_grid(4) == pytest.approx([-3.0, -6.0, -9.0, -12.0])


def test_eps_above_threshold_is_rejected() -> None:
    sups = SupTriple(ln_interval=0.0, ln_outer=1.0, ln_set=-1.0)
    with pytest.raises(DomainError):
        required_eps_constant(sups, -2.0, 0.0)


def test_power_form_needs_no_constant_when_m9_dominates() -> None:
    sups = SupTriple(ln_interval=0.0, ln_outer=2.0, ln_set=-1.0)
    assert required_power_constant(sups, 1.0, 0.5) == 0.0


def test_constant_function_propagates_with_zero_constant(
    cantor_points: np.ndarray,
) -> None:
    report = propagation_experiment(
        [constant(3.0)], cantor_points, 1.0, 0.2, eps_grid(4)
    )
    assert report.eps_fit.constant == 0.0
    assert report.power_fit.constant == 0.0
    assert report.violations == 0


def test_full_interval_needs_no_constant() -> None:
    quartic = Polynomial.monic([0.1, 0.4, 0.7 + 0.2j, 0.7 - 0.2j])
    report = propagation_experiment([quartic], UNIT_GRID, 0.0, 1.0, [-3.0])
    assert report.eps_fit.constant == 0.0
    assert all(r["pass"] for r in report.rows)


def test_random_polynomials_share_one_constant(cantor_points: np.ndarray) -> None:
    rng = np.random.default_rng(8)
    functions = [random_polynomial(6, "disc", rng) for _ in range(5)]
    report = propagation_experiment(functions, cantor_points, 0.0, 0.2, eps_grid(5))
    assert len(report.rows) == 25
    assert report.violations == 0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

import math

import numpy as np
import pytest
import structlog
from scipy.integrate import quad

from obslab.capacity import (
    AxisAtoms,
    DiscreteMeasure,
    KernelSpec,
    ball_capacity_check,
    capacity_estimate,
    capacity_report,
    content_capacity_check,
    energy,
    fit_slicing,
    gauge_shape,
    integrability,
    ln_kernel_density,
    point_ln_distances,
    shifted_kernel_gauge,
    slicing_experiment,
)
from obslab.errors import DegenerateSet, ParamError
from obslab.fractal import CantorSpec, build_cantor
from obslab.gauge import FAlphaBeta, HAlpha, HAlphaBeta, PowerDelta

logger = structlog.get_logger(__name__)

LN_CELL = -6.0
FW_TOL = 1e-6


@pytest.fixture
def h0() -> HAlpha:
    """Fixture to provide h_0, whose kernel is sqrt(ln 1/t)"""
    return HAlpha(alpha=0.0)


@pytest.fixture
def kernel(h0: HAlpha) -> KernelSpec:
    """Fixture to provide K = 1/h_0 regularized at e^-6"""
    return KernelSpec(h0, LN_CELL)


@pytest.fixture
def rng() -> np.random.Generator:
    """Fixture to provide a fixed random stream"""
    return np.random.default_rng(5)


def test_single_atom_energy(kernel: KernelSpec) -> None:
    mu = DiscreteMeasure.uniform(np.array([[0.01]]), kernel.cell)
    assert energy(mu, kernel).to_real() == pytest.approx(math.sqrt(6.0))


def test_two_atom_energy(kernel: KernelSpec) -> None:
    """K(e^-4) = 1 / h_0(e^-4) = 2"""
    mu = DiscreteMeasure.uniform(np.array([[0.0], [math.exp(-4.0)]]), kernel.cell)
    expected = 0.5 * math.sqrt(6.0) + 0.5 * 2.0
    assert energy(mu, kernel).to_real() == pytest.approx(expected, rel=1e-9)


def test_energy_is_convex(kernel: KernelSpec, rng: np.random.Generator) -> None:
    atoms = rng.uniform(0.0, 0.04, (10, 1))
    for _ in range(5):
        a, b = rng.dirichlet(np.ones(10), 2)
        e_a = energy(DiscreteMeasure(atoms, a, kernel.cell), kernel).to_real()
        e_b = energy(DiscreteMeasure(atoms, b, kernel.cell), kernel).to_real()
        mid = DiscreteMeasure(atoms, (a + b) / 2, kernel.cell)
        assert energy(mid, kernel).to_real() <= (e_a + e_b) / 2 + 1e-12


def test_weights_must_lie_on_the_simplex() -> None:
    with pytest.raises(ParamError):
        DiscreteMeasure(np.zeros((2, 1)), np.array([0.7, 0.7]), 0.1)
    with pytest.raises(ParamError):
        KernelSpec.with_cell(HAlpha(alpha=0.0), 0.0)


def test_single_atom_capacity(kernel: KernelSpec) -> None:
    estimate = capacity_estimate(np.array([[-math.inf]]), kernel)
    assert estimate.capacity.to_real() == pytest.approx(1 / math.sqrt(6.0))


def test_symmetric_pair_splits_evenly(kernel: KernelSpec) -> None:
    ln_d = point_ln_distances(np.array([0.0, 0.03]))
    estimate = capacity_estimate(ln_d, kernel)
    np.testing.assert_allclose(estimate.weights, [0.5, 0.5], atol=1e-9)
    assert estimate.duality_gap <= FW_TOL


def test_empty_atom_set_is_degenerate(kernel: KernelSpec) -> None:
    with pytest.raises(DegenerateSet):
        capacity_estimate(np.empty((0, 0)), kernel)


def test_capacity_grows_with_the_set(kernel: KernelSpec) -> None:
    points = np.linspace(0.0, 0.04, 24)
    small = capacity_estimate(point_ln_distances(points[::3]), kernel)
    large = capacity_estimate(point_ln_distances(points), kernel)
    assert small.capacity.ln_mag <= large.capacity.ln_mag + 2 * FW_TOL


def test_restart_agrees_with_uniform_start(kernel: KernelSpec) -> None:
    points = np.linspace(0.0, 0.04, 30)
    report = capacity_report(point_ln_distances(points), kernel, seed=1)
    assert report.restart_agreement < 2 * FW_TOL
    assert report.refinement_ratio > 0


@pytest.mark.parametrize(("d", "per_axis"), [(1, 32), (2, 12)])
def test_ball_capacity_below_gauge(d: int, per_axis: int) -> None:
    check = ball_capacity_check(HAlphaBeta(alpha=1.0, beta=1.0), 0.01, d, per_axis, 0)
    assert check.holds
    assert check.to_dict()["atoms"] == check.atoms


def test_h0_cantor_content_dominates_capacity(h0: HAlpha) -> None:
    level = build_cantor(CantorSpec(gauge=h0), 4)
    report = content_capacity_check(level, h0, 0.5)
    assert report.holds
    assert report.integrability is None
    assert report.ln_ratio_floor is None


def test_shifted_kernel_rows_over_depths(h0: HAlpha) -> None:
    level = build_cantor(CantorSpec(gauge=h0), 3)
    g = FAlphaBeta(alpha=2.0, beta=1.5, d=1)
    report = content_capacity_check(level, g, 0.5, depths=(2, 3))
    assert [r["depth"] for r in report.ratio_rows] == [2, 3]
    assert report.integrability is not None
    assert report.integrability.finite
    assert report.ln_ratio_floor is not None


def closed_form_integral(alpha: float, beta: float, d: int, eps: float) -> float:
    """int u^{-1-eps} ((d - 1) + (beta + alpha/u) e^{-u}) du from ln 3"""
    u0 = math.log(3.0)
    value, _ = quad(
        lambda u: u ** (-1 - eps) * (beta + alpha / u) * math.exp(-u), u0, math.inf
    )
    return value + (d - 1) * u0 ** (-eps) / eps


@pytest.mark.parametrize(
    ("alpha", "beta", "d", "eps"),
    [(2.0, 1.5, 1, 0.5), (50.0, 9.0, 1, 0.5), (2.0, 1.5, 2, 0.5), (4.0, 1.0, 3, 1.0)],
)
def test_integrability_matches_closed_form(
    alpha: float, beta: float, d: int, eps: float
) -> None:
    result = integrability(FAlphaBeta(alpha=alpha, beta=beta, d=d), eps)
    assert result.finite
    assert result.value == pytest.approx(
        closed_form_integral(alpha, beta, d, eps), rel=1e-6
    )
    expected_kh = -result.u - (1 + eps) * np.log(result.u)
    np.testing.assert_allclose(result.ln_kh, expected_kh, rtol=1e-12, atol=1e-9)
    assert result.kh_vanishes


def test_integral_depends_on_the_gauge() -> None:
    low = integrability(FAlphaBeta(alpha=2.0, beta=1.5, d=1), 0.5)
    high = integrability(FAlphaBeta(alpha=50.0, beta=9.0, d=1), 0.5)
    assert high.value > low.value
    h = integrability(HAlphaBeta(alpha=2.0, beta=1.5), 0.5)
    assert h.value == pytest.approx(low.value, rel=1e-9)


def test_unshifted_kernel_in_the_plane_diverges() -> None:
    result = integrability(FAlphaBeta(alpha=2.0, beta=1.5, d=2), 0.0)
    assert not result.finite
    assert result.value == math.inf
    assert result.to_dict()["value"] is None


@pytest.mark.parametrize("u", [1.2, 2.0, 3.0])
def test_density_is_kernel_times_gauge_derivative(u: float) -> None:
    """K(t) g'(t) dt with t = exp(-e^u) and dt = -t e^u du"""
    g = FAlphaBeta(alpha=2.0, beta=1.5, d=1)
    shifted = shifted_kernel_gauge(g, 0.5)
    x = math.exp(u)
    t = math.exp(-x)
    expected = float(g.derivative(t)) * t * x / float(shifted.value(t))
    density = math.exp(float(ln_kernel_density(g, shifted, u)))
    assert density == pytest.approx(expected, rel=1e-9)


def test_shifted_kernel_parameters(h0: HAlpha) -> None:
    shifted = shifted_kernel_gauge(FAlphaBeta(alpha=2.0, beta=1.5, d=1), 0.5)
    assert (shifted.alpha, shifted.beta, shifted.d) == (0.5, 0.5, 1)
    with pytest.raises(ParamError):
        shifted_kernel_gauge(h0, 0.5)
    assert gauge_shape(PowerDelta(delta=1.0)) is None


def test_full_square_slices_are_all_good() -> None:
    side = 0.02
    axis = AxisAtoms.grid(0.0, side, 8)
    report = slicing_experiment(axis, axis, 1.0, 1.0, offsets=200, seed=0)
    fit = fit_slicing([report])
    (outcome,) = fit.outcomes
    assert outcome.ln_good_measure == pytest.approx(math.log(side))
    assert outcome.ln_good_measure_mc == pytest.approx(math.log(side))
    assert fit.violations == 0


def test_empty_factor_has_no_slices() -> None:
    x = AxisAtoms.grid(0.0, 0.02, 8)
    report = slicing_experiment(x, AxisAtoms.empty(0.0, 0.02), 1.0, 1.0, 50, seed=0)
    assert np.all(np.isneginf(report.slice_ln_caps))
    assert report.ln_k_max is None
    with pytest.raises(DegenerateSet):
        fit_slicing([report])


def test_slicing_rejects_large_sets() -> None:
    axis = AxisAtoms.grid(0.0, 1.0, 4)
    with pytest.raises(ParamError):
        slicing_experiment(axis, axis, 1.0, 1.0, 10, seed=0)


def test_cantor_product_slicing() -> None:
    spec = CantorSpec(base=(0.0, 0.02), ln_lengths=(-6.0, -9.0, -13.0))
    axis = AxisAtoms.from_cantor(build_cantor(spec, 3))
    report = slicing_experiment(axis, axis, 1.0, 1.0, offsets=300, seed=4)
    fit = fit_slicing([report])
    assert fit.violations == 0
    assert len(fit.outcomes[0].rows) == 300


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

import math

import numpy as np
import pytest
import structlog

from obslab.errors import DomainError, NoConvergence
from obslab.gauge import HAlpha, LogNum, PowerDelta
from obslab.lemniscate import (
    ENSEMBLES,
    BallCover,
    CoverBall,
    Polynomial,
    cartan_cover,
    cartan_radii,
    content_of_cover,
    empirical_lemniscate_content,
    lemniscate_bound_rhs,
    lemniscate_suite,
    lubinsky_threshold,
    random_polynomial,
    verify_cover,
    xi_fixed_point,
)
from obslab.lemniscate import content as lemniscate_content
from obslab.lemniscate.polynomial import Ensemble

logger = structlog.get_logger(__name__)

LN4 = math.log(4.0)
H9 = LogNum(1, -9.0)


@pytest.fixture
def h0() -> HAlpha:
    """Fixture to provide h_0 with its closed-form inverse"""
    return HAlpha(alpha=0.0)


@pytest.fixture
def rng() -> np.random.Generator:
    """Fixture to provide a fixed random stream"""
    return np.random.default_rng(2024)


@pytest.mark.parametrize("n", [1, 3, 8])
def test_radii_for_identity_gauge(n: int) -> None:
    H = LogNum(1, -4.0)
    radii = cartan_radii(PowerDelta(delta=1.0), H, n)
    expected = [math.log(j / n) + H.ln_mag - LN4 for j in range(1, n + 1)]
    assert [r.ln_mag for r in radii] == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("n", [2, 5, 16])
def test_radii_for_h0(h0: HAlpha, n: int) -> None:
    radii = cartan_radii(h0, H9, n)
    expected = [-9.0 * (n / j) ** 2 - LN4 for j in range(1, n + 1)]
    assert [r.ln_mag for r in radii] == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("n", [2, 4, 7])
def test_threshold_for_identity_gauge(n: int) -> None:
    H = LogNum(1, -4.0)
    threshold = lubinsky_threshold(PowerDelta(delta=1.0), H, n)
    expected = -n * LN4 + n * H.ln_mag - (n - 1)
    assert threshold.ln_mag == pytest.approx(expected, rel=1e-8)


def test_threshold_degree_one_is_quarter_h(h0: HAlpha) -> None:
    assert lubinsky_threshold(h0, H9, 1).ln_mag == pytest.approx(-9.0 - LN4)
    with pytest.raises(DomainError):
        lubinsky_threshold(h0, H9, 0)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_threshold_for_h0(h0: HAlpha, n: int) -> None:
    """4^{-n} H^{n(2n-1)}"""
    threshold = lubinsky_threshold(h0, H9, n)
    assert threshold.ln_mag == pytest.approx(-n * LN4 - 9.0 * n * (2 * n - 1), rel=1e-8)


def test_single_root_cover(h0: HAlpha) -> None:
    a = 0.3 - 0.1j
    radii = cartan_radii(h0, H9, 1)
    cover = cartan_cover(Polynomial.monic([a]), radii)
    (ball,) = cover.balls
    assert ball.center == a
    assert ball.multiplicity == 1
    assert ball.ln_diameter == pytest.approx(radii[0].ln_mag + LN4)


def test_coinciding_roots_share_one_ball(h0: HAlpha) -> None:
    n = 5
    p = Polynomial.monic([0.2 + 0.4j] * n)
    cover = cartan_cover(p, cartan_radii(h0, H9, n))
    (ball,) = cover.balls
    assert ball.multiplicity == n
    assert ball.ln_diameter == pytest.approx(H9.ln_mag)


def test_random_cover_counts_every_zero(
    h0: HAlpha, rng: np.random.Generator
) -> None:
    n = 16
    p = random_polynomial(n, "disc", rng)
    cover = cartan_cover(p, cartan_radii(h0, H9, n), samples=20_000, rng=rng)
    assert sum(cover.multiplicities) == n


@pytest.mark.parametrize("ensemble", ENSEMBLES)
def test_cover_content_equals_gauge_of_h(
    h0: HAlpha, rng: np.random.Generator, ensemble: Ensemble
) -> None:
    n = 6
    g = HAlpha(alpha=1.0)
    p = random_polynomial(n, ensemble, rng)
    cover = cartan_cover(p, cartan_radii(g, H9, n), rng=rng)
    content = content_of_cover(cover, g)
    assert content.ln_mag == pytest.approx(g.eval(H9).ln_mag, abs=1e-10)


def test_cover_content_edge_cases(h0: HAlpha) -> None:
    single = BallCover((CoverBall(0j, -4.0, 1),))
    assert content_of_cover(single, h0).to_real() == pytest.approx(0.5)
    assert content_of_cover(BallCover(()), h0).is_zero()


def test_shrunk_cover_misses_sublevel_points(rng: np.random.Generator) -> None:
    """A clustered zero makes the Cartan ball tight enough to shrink past"""
    n = 8
    p = random_polynomial(n, "cluster", rng)
    radii = cartan_radii(PowerDelta(delta=1.0), LogNum(1, -4.0), n)
    cover = cartan_cover(p, radii, rng=rng)
    threshold = LogNum(1, cover.ln_threshold)
    assert verify_cover(p, threshold, cover, 4000, rng=rng) == []
    assert verify_cover(p, threshold, cover.scaled(0.1), 4000, rng=rng)


def test_single_root_shrink(h0: HAlpha, rng: np.random.Generator) -> None:
    p = Polynomial.monic([0.5j])
    radii = cartan_radii(h0, H9, 1)
    cover = cartan_cover(p, radii, rng=rng)
    threshold = radii[0]
    assert verify_cover(p, threshold, cover, 2000, rng=rng) == []
    assert verify_cover(p, threshold, cover.scaled(0.4), 2000, rng=rng)


def test_box_samples_find_a_shrunk_ball(h0: HAlpha, rng: np.random.Generator) -> None:
    p = Polynomial.monic([0.5j])
    radii = cartan_radii(h0, H9, 1)
    cover = cartan_cover(p, radii, samples=0, box_samples=2000, rng=rng)
    threshold = radii[0]
    assert verify_cover(p, threshold, cover, 0, box_samples=2000, rng=rng) == []
    missed = verify_cover(p, threshold, cover.scaled(0.4), 0, box_samples=2000, rng=rng)
    assert missed
    assert all(v.zero_index == 0 for v in missed)
    assert all(v.ln_abs_p <= threshold.ln_mag for v in missed)


def test_cartan_cover_rejects_bad_radius_count(h0: HAlpha) -> None:
    with pytest.raises(ValueError, match="radii"):
        cartan_cover(Polynomial.monic([0j, 1j]), cartan_radii(h0, H9, 1))


def test_bound_shape_arithmetic() -> None:
    delta = LogNum(1, -100.0 - LN4)
    bound = lemniscate_bound_rhs(0.0, delta, 1)
    assert bound.shape.to_real() == pytest.approx(0.1)
    assert bound.breakdown is None
    quadrupled = lemniscate_bound_rhs(0.0, delta, 4, breakdown=False)
    assert quadrupled.shape.to_real() == pytest.approx(0.2)


def test_bound_shape_under_squared_delta() -> None:
    delta = LogNum(1, -1000.0)
    base = lemniscate_bound_rhs(1.0, delta, 3, breakdown=False).shape
    squared = lemniscate_bound_rhs(1.0, delta**2, 3, breakdown=False).shape
    assert (squared / base).to_real() == pytest.approx(1 / math.sqrt(2), rel=1e-3)


def test_bound_rejects_large_delta() -> None:
    with pytest.raises(DomainError):
        lemniscate_bound_rhs(0.0, LogNum.from_real(0.3), 2)


def test_empirical_content_of_a_disc(h0: HAlpha) -> None:
    """{|z| <= delta} is covered by one ball of diameter between 2 delta and its box"""
    delta = LogNum(1, -6.0)
    cover, content = empirical_lemniscate_content(Polynomial.monic([0j]), delta, h0)
    (ball,) = cover.balls
    assert ball.ln_diameter >= math.log(2) + delta.ln_mag - 1e-12
    assert ball.ln_diameter <= math.log(2 * math.sqrt(2)) + delta.ln_mag + 1e-9
    assert content.ln_mag == pytest.approx(float(h0.ln_value(ball.ln_diameter)))


def test_polynomial_evaluation() -> None:
    p = Polynomial.from_coefficients([2.0, -6.0, 4.0])
    assert sorted(p.roots.real) == pytest.approx([1.0, 2.0])
    z = np.array([0.5 + 1j, -3.0])
    np.testing.assert_allclose(p(z), p.horner(z))
    assert np.exp(p.ln_abs(z)) == pytest.approx(np.abs(p(z)))
    assert abs(complex(p.rescaled_at_origin()(0.0))) == pytest.approx(1.0)


@pytest.mark.parametrize("ensemble", ENSEMBLES)
def test_root_ensembles(rng: np.random.Generator, ensemble: Ensemble) -> None:
    roots = random_polynomial(12, ensemble, rng).roots
    assert roots.size == 12
    assert np.all(np.abs(roots) <= 2.0 + 1e-12)


def test_suite_fits_without_violations() -> None:
    suite = lemniscate_suite([0.0, 1.0], [2, 3], [-3.0], 2, seed=7)
    assert len(suite.rows) == 2 * 2 * 2 * 2
    assert suite.violations == 0
    assert set(suite.fits) == {0.0, 1.0}
    assert len(suite.breakdowns) == 4


def test_suite_fits_on_low_degrees_only() -> None:
    suite = lemniscate_suite([0.0], [2, 3], [-3.0], 2, seed=7, fit_max_n=2)
    fit = suite.fits[0.0]
    assert fit.instances == 8
    assert fit.fit_instances == 4
    low = [r["ratio"] for r in suite.rows if r["n"] == 2]
    assert max(low) <= fit.constant


def test_scaled_inverse_matches_fixed_point() -> None:
    """h_1^{-1}(h_1(H)/n) = exp(-x_t) with x_t = n^2 x_H (ln x_H / ln x_t)^2"""
    g, H, n = HAlpha(alpha=1.0), LogNum(1, -10.0), 8
    t = g.inverse(LogNum(1, g.eval(H).ln_mag - math.log(n)))
    assert -t.ln_mag == pytest.approx(xi_fixed_point(1.0, 10.0, n), rel=1e-6)


def test_fixed_point_reports_exhaustion(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(lemniscate_content, "FIXED_POINT_STEPS", 1)
    with pytest.raises(NoConvergence):
        xi_fixed_point(1.0, 10.0, 8)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

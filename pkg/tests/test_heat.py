import math

import numpy as np
import pytest
import structlog

from obslab.errors import DomainError, ParamError
from obslab.fractal import CantorSpec, build_cantor
from obslab.gauge import HAlpha, Tower
from obslab.heat import (
    EInfSpec,
    build_counterexample,
    counterexample_ratio,
    einf_content_report,
    einf_frostman_profile,
    heat_solution,
    ln_observation_integral,
    observability_ratio,
)
from obslab.spectral import SpectralVector, sample_spectral

logger = structlog.get_logger(__name__)

LN_Q2 = 4.0**3.25


def mode(n: int) -> SpectralVector:
    coeffs = np.zeros(n)
    coeffs[-1] = 1.0
    return SpectralVector.from_coeffs(1.0, coeffs)


@pytest.fixture
def v0() -> SpectralVector:
    """Fixture to provide a normalized random element of E_400 on (0, 1)"""
    return sample_spectral(1.0, 400.0, np.random.default_rng(17))


@pytest.fixture
def spec() -> EInfSpec:
    """Fixture to provide the eps = 1 construction with four levels"""
    return build_counterexample(1.0, 4)


def test_time_zero_is_identity(v0: SpectralVector) -> None:
    np.testing.assert_array_equal(heat_solution(v0, 0.0).ln_coeffs, v0.ln_coeffs)


def test_single_mode_decay() -> None:
    u = heat_solution(mode(3), 0.2)
    assert u.ln_coeffs[-1] == pytest.approx(-9 * math.pi**2 * 0.2)


def test_semigroup_property(v0: SpectralVector) -> None:
    chained = heat_solution(heat_solution(v0, 0.03), 0.05)
    direct = heat_solution(v0, 0.08)
    np.testing.assert_allclose(chained.ln_coeffs, direct.ln_coeffs, atol=1e-12)


def test_norm_decays_at_first_eigenvalue(v0: SpectralVector) -> None:
    t = 0.1
    decayed = heat_solution(v0, t).ln_l2_norm()
    assert decayed <= v0.ln_l2_norm() - math.pi**2 * t + 1e-12


def test_negative_time_is_rejected(v0: SpectralVector) -> None:
    with pytest.raises(DomainError):
        heat_solution(v0, -1.0)
    with pytest.raises(DomainError):
        observability_ratio(v0, 0.0, np.array([0.5]))


@pytest.mark.parametrize(("n", "T"), [(1, 1.0), (2, 0.1), (3, 0.05)])
def test_single_mode_on_the_whole_interval(n: int, T: float) -> None:
    """sup_x |sin(n pi x)| = 1, so both integrals are exact"""
    lam = (n * math.pi) ** 2
    e_points = np.linspace(0.0, 1.0, 4 * n + 1)
    expected = -lam * T - 0.5 * math.log(2) - math.log(-math.expm1(-lam * T) / lam)
    ratio = observability_ratio(mode(n), T, e_points)
    assert ratio.ln_mag == pytest.approx(expected, abs=1e-5)


def test_nodal_point_gives_infinite_ratio() -> None:
    ratio = observability_ratio(mode(2), 1.0, np.array([0.5]))
    assert ratio.ln_mag == math.inf


def test_ratio_is_scale_invariant(v0: SpectralVector) -> None:
    e_points = np.linspace(0.2, 0.3, 11)
    scaled = SpectralVector(v0.L, v0.ln_coeffs + 7.0, v0.signs)
    a = observability_ratio(v0, 0.5, e_points)
    b = observability_ratio(scaled, 0.5, e_points)
    assert a.ln_mag == pytest.approx(b.ln_mag, abs=1e-6)


def test_cantor_ratio_is_stable_under_refinement(v0: SpectralVector) -> None:
    e_points = build_cantor(CantorSpec(gauge=HAlpha(alpha=0.0)), 6).sample_points()
    coarse = ln_observation_integral(v0, 1.0, e_points, nodes=65)
    fine = ln_observation_integral(v0, 1.0, e_points, nodes=257)
    assert math.isfinite(coarse)
    assert fine == pytest.approx(coarse, abs=1e-5)
    assert math.isfinite(observability_ratio(v0, 1.0, e_points).ln_mag)


def test_parameters_for_eps_one(spec: EInfSpec) -> None:
    assert spec.eps2 == pytest.approx(0.25)
    assert spec.eps1 == pytest.approx(0.25)
    assert spec.p == pytest.approx(2.25)
    assert spec.N == 5
    assert spec.level_q(1).to_float() == pytest.approx(math.log(4))
    assert spec.level_q(2).to_float() == pytest.approx(LN_Q2, rel=1e-12)


@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0, 3.0])
def test_invariants_hold(eps: float) -> None:
    spec = build_counterexample(eps, 4)
    assert all(spec.invariants().values())
    assert 0 < spec.eps1 < eps


def test_counted_offsets_for_eps_one(spec: EInfSpec) -> None:
    offsets = spec.count_offsets()
    assert len(offsets) == spec.levels
    assert offsets[0] == pytest.approx((math.log(0.75), math.log(1.25)))
    inv_y2 = math.exp(-(LN_Q2 - 4.0**2.25))
    assert offsets[1][1] - offsets[0][1] == pytest.approx(inv_y2, rel=1e-6)
    assert offsets[0][0] - offsets[1][0] == pytest.approx(2 * inv_y2, rel=1e-6)


def test_too_small_q_breaks_the_count_bound() -> None:
    ln_q = (Tower.from_float(math.log(4.0)), Tower.from_float(4.0**2.25 + 0.1))
    crowded = EInfSpec(eps=1.0, eps1=0.25, eps2=0.25, N=5, ln_q=ln_q, core=ln_q)
    assert crowded.count_offsets()[1][0] == -math.inf
    checks = crowded.invariants()
    assert not checks["j_prime_lower"]
    assert not checks["q_lower"]
    assert checks["j_upper"]


def test_bad_construction_parameters(spec: EInfSpec) -> None:
    with pytest.raises(ParamError):
        build_counterexample(0.0, 3)
    with pytest.raises(ParamError):
        build_counterexample(1.0, 0)
    with pytest.raises(ParamError):
        spec.level_q(5)
    with pytest.raises(ParamError):
        counterexample_ratio(spec, 1, 0.0)


def test_first_level_ratio(spec: EInfSpec) -> None:
    expected = (
        -16 * (4**0.25 - math.pi**2) - math.log(4 * math.pi) + 0.5 * math.log(2)
    )
    assert counterexample_ratio(spec, 1, 1.0).to_float() == pytest.approx(expected)


def test_second_level_ratio_is_astronomically_negative(spec: EInfSpec) -> None:
    ratio = counterexample_ratio(spec, 2, 1.0)
    assert ratio < Tower.from_float(-1e300)
    assert (-ratio).ln().to_float() == pytest.approx(2.25 * LN_Q2, rel=1e-9)


def test_ratio_decreases_from_level_two(spec: EInfSpec) -> None:
    ratios = [counterexample_ratio(spec, k, 1.0) for k in range(2, spec.levels + 1)]
    assert all(b < a for a, b in zip(ratios, ratios[1:], strict=False))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_level_cover_sums(spec: EInfSpec, k: int) -> None:
    content = einf_content_report(spec, k)
    assert content.f0_within_bound
    assert content.halpha_below_f0
    assert content.to_dict()["k"] == k


def test_level_measure_decreases(spec: EInfSpec) -> None:
    masses = [einf_content_report(spec, k).ln_mu for k in range(1, 5)]
    assert all(b < a for a, b in zip(masses, masses[1:], strict=False))


def test_first_level_frostman_profile(spec: EInfSpec) -> None:
    """mu(I_1) / f_eps(|I_1|) = 4^{0.75} / 3"""
    profile = einf_frostman_profile(spec, 1).to_float()
    assert profile == pytest.approx(0.75 * math.log(4) - math.log(3))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

"""Cartan covers, lemniscate contents, Remez and propagation suites, Jensen bound."""

import itertools
import math
from typing import Any, Final

import structlog

from obslab.errors import CoverageFailure
from obslab.experiments.base import ExperimentResult, experiment
from obslab.experiments.params import (
    CartanParams,
    JensenParams,
    LemniscateParams,
    PropagationParams,
    RemezParams,
)
from obslab.gauge import LogNum
from obslab.lemniscate import (
    cartan_cover,
    cartan_radii,
    content_of_cover,
    lemniscate_suite,
    random_polynomial,
)
from obslab.parallel import parallel_map, trial_rng
from obslab.remez import (
    certified_content,
    eps_grid,
    jensen_suite,
    propagation_experiment,
    remez_experiment,
)
from obslab.remez.sup import Analytic
from obslab.spectral import sample_spectral

logger = structlog.get_logger(__name__)

CONTENT_RTOL: Final = 1e-10


@experiment("cartan", CartanParams)
def run_cartan(params: CartanParams, seed: int) -> ExperimentResult:
    """Cartan covers of random polynomials with their content identity."""
    g = params.gauge.build()
    instances = list(
        itertools.product(
            enumerate(params.degrees),
            enumerate(params.ensembles),
            range(params.trials),
            enumerate(params.ln_H),
        )
    )

    def run(instance: Any) -> dict[str, Any]:
        (ni, n), (ei, ensemble), trial, (hi, ln_h) = instance
        p = random_polynomial(n, ensemble, trial_rng(seed, ni, ei, trial))
        H = LogNum(1, ln_h)
        row: dict[str, Any] = {
            "n": n,
            "ensemble": ensemble,
            "trial": trial,
            "ln_H": ln_h,
        }
        try:
            cover = cartan_cover(
                p,
                cartan_radii(g, H, n),
                samples=params.samples,
                box_samples=params.box_samples,
                rng=trial_rng(seed, ni, ei, trial, hi, 1),
            )
        except CoverageFailure:
            logger.warning("cartan_coverage_failure", n=n, trial=trial, ln_H=ln_h)
            return {**row, "covered": False, "pass": False}
        ln_content = content_of_cover(cover, g).ln_mag
        ln_gh = g.eval(H).ln_mag
        multiplicity = sum(cover.multiplicities)
        identity = abs(ln_content - ln_gh) <= CONTENT_RTOL
        return {
            **row,
            "covered": True,
            "balls": len(cover.balls),
            "multiplicity_sum": multiplicity,
            "ln_content": ln_content,
            "ln_gH": ln_gh,
            "pass": identity and multiplicity == n,
        }

    rows = parallel_map(run, instances)
    violations = sum(not r["pass"] for r in rows)
    logger.info("cartan", instances=len(rows), violations=violations)
    return ExperimentResult(rows, {"gauge": g.to_config()}, violations)


@experiment("lemniscate", LemniscateParams)
def run_lemniscate(params: LemniscateParams, seed: int) -> ExperimentResult:
    suite = lemniscate_suite(
        params.alphas,
        params.degrees,
        params.ln_deltas,
        params.trials,
        seed,
        ensembles=params.ensembles,
        fit_max_n=params.fit_max_n,
    )
    summary = {
        "fits": {str(alpha): fit.to_dict() for alpha, fit in suite.fits.items()},
        "breakdowns": suite.breakdowns,
    }
    return ExperimentResult(suite.rows, summary, suite.violations)


@experiment("remez", RemezParams)
def run_remez(params: RemezParams, seed: int) -> ExperimentResult:
    report = remez_experiment(
        params.degrees,
        params.cantor.build(),
        params.alpha,
        params.trials,
        seed,
        ensembles=params.ensembles,
        fit_max_n=params.fit_max_n,
    )
    return ExperimentResult(report.rows, report.to_dict(), report.fit.violations)


@experiment("propagation", PropagationParams)
def run_propagation(params: PropagationParams, seed: int) -> ExperimentResult:
    """
    Both propagation-of-smallness forms on random polynomials and on random
    Dirichlet expansions whose Taylor series is certified on D_6.
    """
    e_set = params.cantor.build()
    content = certified_content(e_set, params.alpha)
    functions: list[Analytic] = [
        random_polynomial(n, "disc", trial_rng(seed, ni, trial))
        for (ni, n), trial in itertools.product(
            enumerate(params.degrees), range(params.trials)
        )
    ]
    taylor_ln_ratios: list[float] = []
    for trial in range(params.spectral_trials):
        rng = trial_rng(seed, len(params.degrees), trial)
        v = sample_spectral(1.0, params.lam, rng)
        taylor_ln_ratios.append(v.certify_taylor(params.taylor_order))
        functions.append(v)
    report = propagation_experiment(
        functions,
        e_set.sample_points(),
        params.alpha,
        content,
        eps_grid(params.eps_count, params.ln_eps_lo),
    )
    summary = {
        "content": content,
        "eps_fit": report.eps_fit.to_dict(),
        "power_fit": report.power_fit.to_dict(),
        "taylor_ln_ratio_max": max(taylor_ln_ratios, default=-math.inf),
    }
    return ExperimentResult(report.rows, summary, report.violations)


@experiment("jensen", JensenParams)
def run_jensen(params: JensenParams, seed: int) -> ExperimentResult:
    rows = jensen_suite(params.degrees, params.trials, seed, params.ensembles)
    violations = sum(not r["pass"] for r in rows)
    worst = max((r["m"] - r["bound"] for r in rows), default=-math.inf)
    return ExperimentResult(rows, {"worst_excess": worst}, violations)

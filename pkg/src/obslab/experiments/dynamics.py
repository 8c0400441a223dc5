"""Heat observability ratios, the non-observable set and the cost schedule."""

import itertools
import math
from typing import Any

import structlog

from obslab.experiments.base import ExperimentResult, experiment
from obslab.experiments.params import (
    CounterexampleParams,
    HeatRatioParams,
    LRScheduleParams,
    TelescopingParams,
)
from obslab.gauge import Tower
from obslab.heat import (
    build_counterexample,
    counterexample_ratio,
    einf_content_report,
    einf_frostman_profile,
    observability_ratio,
)
from obslab.lr import (
    LRSchedule,
    absorption_crossover,
    convergence_test,
    cost_constant,
    schedule,
    t0_threshold,
    telescoping_check,
)
from obslab.parallel import parallel_map, trial_rng
from obslab.spectral import sample_spectral

logger = structlog.get_logger(__name__)


@experiment("heat-ratio", HeatRatioParams)
def run_heat_ratio(params: HeatRatioParams, seed: int) -> ExperimentResult:
    """||u(T)|| over int_0^T sup_E|u| for random data in E_lambda."""
    e_points = params.cantor.build().sample_points()
    instances = list(itertools.product(range(params.trials), params.times))

    def run(instance: tuple[int, float]) -> dict[str, Any]:
        trial, T = instance
        v0 = sample_spectral(params.L, params.lam, trial_rng(seed, trial))
        ratio = observability_ratio(v0, T, e_points)
        return {
            "trial": trial,
            "T": T,
            "K": v0.K,
            "ln_ratio": ratio.ln_mag,
            "ratio": ratio.to_real(),
        }

    rows = parallel_map(run, instances)
    worst: dict[str, float] = {}
    for row in rows:
        key = str(row["T"])
        worst[key] = max(worst.get(key, -math.inf), row["ln_ratio"])
    unobserved = sum(math.isinf(r["ln_ratio"]) for r in rows)
    logger.info("heat_ratio", instances=len(rows), unobserved=unobserved)
    return ExperimentResult(rows, {"ln_ratio_max": worst}, unobserved)


def _tower_field(value: Tower) -> dict[str, Any]:
    """String form always; float form only when it fits in a double."""
    as_float = value.to_float()
    return {"tower": str(value), "float": as_float if math.isfinite(as_float) else None}


@experiment("counterexample", CounterexampleParams)
def run_counterexample(
    params: CounterexampleParams,
    seed: int,  # noqa: ARG001
) -> ExperimentResult:
    """
    Level table of the non-observable set: observability ratio bound for
    u_0 = sin(q_k pi x), the level cover sums and the Frostman profile.
    """
    spec = build_counterexample(params.eps, params.levels)
    invariants = spec.invariants()
    rows: list[dict[str, Any]] = []
    ratios: list[Tower] = []
    f0_failures = 0
    for k in range(1, spec.levels + 1):
        ratio = counterexample_ratio(spec, k, params.T)
        content = einf_content_report(spec, k, params.alpha)
        profile = einf_frostman_profile(spec, k)
        ratios.append(ratio)
        f0_failures += not content.f0_within_bound
        ln_ratio = _tower_field(ratio)
        ln_profile = _tower_field(profile)
        rows.append(
            {
                **content.to_dict(),
                "ln_q": str(spec.level_q(k)),
                "ln_ratio": ln_ratio["tower"],
                "ln_ratio_float": ln_ratio["float"],
                "ln_frostman": ln_profile["tower"],
                "ln_frostman_float": ln_profile["float"],
            }
        )
    # from level 2 on the ratio bound must fall strictly
    decreasing = all(b < a for a, b in itertools.pairwise(ratios[1:]))
    violations = (
        sum(not ok for ok in invariants.values()) + (not decreasing) + f0_failures
    )
    summary = {
        "set": spec.to_dict(),
        "invariants": invariants,
        "ratio_decreasing": decreasing,
    }
    logger.info("counterexample", levels=spec.levels, violations=violations)
    return ExperimentResult(rows, summary, violations)


def _telescoping(
    plan: LRSchedule, params: TelescopingParams, seed: int
) -> tuple[list[dict[str, Any]], dict[str, Any], int]:
    e_points = params.cantor.build().sample_points()
    v0 = sample_spectral(
        plan.L, float(plan.lambdas[-1]), trial_rng(seed, 0), params.modes
    )
    last = min(params.last, len(plan.rows))
    report = telescoping_check(plan, v0, e_points, params.first, last)
    rows = [{**r, "kind": "telescoping"} for r in report.rows]
    summary = {
        "telescoped_holds": report.telescoped_holds,
        "telescoped_lhs": report.telescoped_lhs.to_dict(),
        "telescoped_rhs": report.telescoped_rhs.to_dict(),
    }
    return rows, summary, report.violations + (not report.telescoped_holds)


@experiment("lr-schedule", LRScheduleParams)
def run_lr_schedule(params: LRScheduleParams, seed: int) -> ExperimentResult:
    """Schedule table, convergence verdict and, when T is set, the cost constant."""
    plan = schedule(params.alpha, params.C, params.L, params.lam1, params.n_max)
    verdict = convergence_test(
        params.alpha, params.C, plan.lam1, params.target, params.n_max
    )
    rows: list[dict[str, Any]] = [{**r, "kind": "schedule"} for r in plan.rows]
    summary: dict[str, Any] = {
        "lam1": plan.lam1,
        "tail": plan.tail,
        "convergence": verdict.to_dict(),
        "T0": t0_threshold(params.alpha, params.C, plan.lambdas),
        "absorption_crossover": absorption_crossover(
            params.alpha, params.C, params.L
        ),
    }
    violations = 0
    if params.T is not None and plan.converges:
        cost = cost_constant(
            params.T, params.alpha, params.C, params.L, plan.lam1, params.n_max
        )
        summary["cost"] = cost.to_dict()
    if params.telescoping is not None:
        tele_rows, tele_summary, tele_violations = _telescoping(
            plan, params.telescoping, seed
        )
        rows.extend(tele_rows)
        summary["telescoping"] = tele_summary
        violations += tele_violations
    return ExperimentResult(rows, summary, violations)

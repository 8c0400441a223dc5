"""Content against capacity, ball capacities and the slicing inequality."""

from typing import Any

import structlog

from obslab.capacity import (
    AxisAtoms,
    SlicingReport,
    ball_capacity_check,
    content_capacity_check,
    fit_slicing,
    slicing_experiment,
)
from obslab.experiments.base import ExperimentResult, experiment
from obslab.experiments.params import CapacityParams, SlicingParams
from obslab.fractal import build_cantor
from obslab.settings import settings

logger = structlog.get_logger(__name__)


@experiment("capacity", CapacityParams)
def run_capacity(params: CapacityParams, seed: int) -> ExperimentResult:
    """
    g-content against 1/g-capacity on the configured Cantor level, the
    shifted-kernel ratios over the extra depths and the ball bounds.
    """
    g = params.gauge.build()
    report = content_capacity_check(
        params.cantor.build(), g, params.eps_shift, params.depths, seed
    )
    rows: list[dict[str, Any]] = [{**r, "kind": "ratio"} for r in report.ratio_rows]
    restarts_ok = report.capacity.restart_agreement <= 2 * settings.fw_tol
    violations = (not report.holds) + (not restarts_ok)
    balls: list[dict[str, Any]] = []
    for index, ball in enumerate(params.balls):
        check = ball_capacity_check(g, ball.r, ball.d, ball.per_axis, seed + index)
        balls.append(check.to_dict())
        violations += not check.holds
    rows.extend({**b, "kind": "ball"} for b in balls)
    summary = {
        "gauge": g.to_config(),
        "transference": report.to_dict(),
        "restarts_agree": restarts_ok,
        "balls": balls,
    }
    logger.info("capacity", holds=report.holds, violations=violations)
    return ExperimentResult(rows, summary, violations)


@experiment("slicing", SlicingParams)
def run_slicing(params: SlicingParams, seed: int) -> ExperimentResult:
    """Slice capacities of X x Y over several depths with one fitted (k, c)."""
    x_spec, y_spec = params.x.spec(), params.y.spec()
    reports: list[SlicingReport] = []
    for index, depth in enumerate(params.depths):
        x_axis = AxisAtoms.from_cantor(build_cantor(x_spec, depth))
        y_axis = AxisAtoms.from_cantor(build_cantor(y_spec, depth))
        reports.append(
            slicing_experiment(
                x_axis,
                y_axis,
                params.alpha,
                params.beta,
                params.offsets,
                seed + index,
                params.keep,
            )
        )
    fit_count = len(reports) if params.fit_count is None else params.fit_count
    fit = fit_slicing(reports, [i < fit_count for i in range(len(reports))])
    rows: list[dict[str, Any]] = []
    per_depth: list[dict[str, Any]] = []
    for depth, report, outcome in zip(
        params.depths, reports, fit.outcomes, strict=True
    ):
        rows.extend({"depth": depth, **r} for r in outcome.rows)
        per_depth.append(
            {
                "depth": depth,
                "r": report.r,
                "ln_product_cap": report.ln_product_cap,
                "ln_k_max": report.ln_k_max,
                **outcome.to_dict(),
            }
        )
    summary = {**fit.to_dict(), "depths": per_depth}
    return ExperimentResult(rows, summary, fit.violations)

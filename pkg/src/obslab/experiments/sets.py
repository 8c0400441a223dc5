"""Content and thickness of the configured sets."""

from typing import Any, Final

import numpy as np
import structlog

from obslab.errors import ParamError
from obslab.experiments.base import ExperimentResult, experiment
from obslab.experiments.params import ContentParams, ThicknessParams
from obslab.fractal import (
    ExplicitRule,
    best_subinterval_content,
    build_cantor,
    content_upper,
    frostman_lower,
    thickness_report,
)
from obslab.gauge import Gauge

logger = structlog.get_logger(__name__)

# Frostman balls are quadratic in the atom count; deeper levels report covers only
FROSTMAN_MAX_DEPTH: Final = 12


def _content_gauge(params: ContentParams) -> Gauge:
    if params.gauge is not None:
        return params.gauge.build()
    if isinstance(params.cantor.rule, ExplicitRule):
        msg = "content with an explicit length rule needs a gauge"
        raise ParamError(msg)
    return params.cantor.rule.gauge.build()


@experiment("content", ContentParams)
def run_content(params: ContentParams, seed: int) -> ExperimentResult:  # noqa: ARG001
    """Cover-sum upper bound at every depth, Frostman lower bound up to a cap."""
    g = _content_gauge(params)
    spec = params.cantor.spec()
    rows: list[dict[str, Any]] = []
    violations = 0
    for depth in range(1, params.cantor.depth + 1):
        level = build_cantor(spec, depth)
        upper = content_upper(level, g)
        row: dict[str, Any] = {
            "depth": depth,
            "ln_length": level.ln_length,
            "ln_upper": upper.ln_mag,
            "upper": upper.to_real(),
        }
        if depth <= FROSTMAN_MAX_DEPTH:
            lower = frostman_lower(level, g).lower_bound
            row["ln_lower"] = lower.ln_mag
            row["lower"] = lower.to_real()
            row["ordered"] = not upper < lower
            violations += not row["ordered"]
        rows.append(row)
    frostman_depth = min(params.cantor.depth, FROSTMAN_MAX_DEPTH)
    level = build_cantor(spec, frostman_depth)
    certificate = frostman_lower(level, g)
    subdivision = best_subinterval_content(level, g)
    summary = {
        "gauge": g.to_config(),
        "upper": rows[-1]["upper"] if rows else content_upper(level, g).to_real(),
        "frostman_depth": frostman_depth,
        "lower": certificate.lower_bound.to_real(),
        "frostman": certificate.to_dict(),
        "subdivision": {
            "pieces": subdivision.pieces,
            "best_index": subdivision.best_index,
            "holds": subdivision.holds,
        },
    }
    violations += not subdivision.holds
    return ExperimentResult(rows, summary, violations)


@experiment("thickness", ThicknessParams)
def run_thickness(
    params: ThicknessParams,
    seed: int,  # noqa: ARG001
) -> ExperimentResult:
    """Certified thickness constant over evenly spaced windows of one period."""
    window_set = params.window_set.build()
    x_samples = np.linspace(
        0.0, float(window_set.period), params.windows, endpoint=False
    )
    report = thickness_report(window_set, params.gauge.build(), params.L, x_samples)
    rows = [
        {"x": float(x), "gamma": gamma}
        for x, gamma in zip(x_samples, report.window_gammas, strict=True)
    ]
    summary = {"gamma_hat": report.gamma_hat, "worst_window": report.worst_window}
    logger.info("thickness", **summary)
    return ExperimentResult(rows, summary)

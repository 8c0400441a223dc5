"""Spectral cost, Nazarov-Turan, Bernstein and uncertainty experiments."""

from functools import partial
from typing import Any

import structlog

from obslab.bandlimited import (
    bernstein_check,
    cell_tail_certificate,
    classify_cells,
    random_bandlimited,
    uncertainty_experiment,
)
from obslab.errors import MassViolation
from obslab.experiments.base import ExperimentResult, experiment
from obslab.experiments.params import (
    BernsteinParams,
    NazarovTuranParams,
    SpectralCostParams,
    UncertaintyParams,
)
from obslab.fitting import fit_constant
from obslab.parallel import parallel_map, trial_rng
from obslab.spectral import nazarov_turan_experiment, spectral_cost_experiment

logger = structlog.get_logger(__name__)


@experiment("spectral-cost", SpectralCostParams)
def run_spectral_cost(params: SpectralCostParams, seed: int) -> ExperimentResult:
    report = spectral_cost_experiment(
        params.cantor.build(),
        params.alpha,
        params.lambdas,
        params.trials,
        seed,
        params.L,
    )
    summary = {
        "content": report.content,
        "monotone": report.monotone,
        **report.fit.to_dict(),
    }
    return ExperimentResult(report.rows, summary, report.fit.violations)


@experiment("nazarov-turan", NazarovTuranParams)
def run_nazarov_turan(params: NazarovTuranParams, seed: int) -> ExperimentResult:
    """One fitted C across all orders; each order also reports its own fit."""
    observed = params.observed.build()
    rows: list[dict[str, Any]] = []
    per_order: dict[str, Any] = {}
    for index, n in enumerate(params.orders):
        order_rows, fit = nazarov_turan_experiment(
            n,
            params.trials,
            seed + index,
            observed,
            params.interval,
            params.re_max,
            params.im_max,
        )
        rows.extend(order_rows)
        per_order[str(n)] = fit.to_dict()
    fit = fit_constant([r["required_C"] for r in rows])
    summary = {**fit.to_dict(), "per_order": per_order}
    return ExperimentResult(rows, summary, fit.violations)


def _cell_row(
    params: BernsteinParams,
    stream: int,
    N: float,
    A: float,
    C: float,
    trial: int,
) -> dict[str, Any]:
    u = random_bandlimited(N, trial_rng(stream, trial), params.W)
    row: dict[str, Any] = {"kind": "cells", "trial": trial, "N": N}
    try:
        cells = classify_cells(u, A, params.m_cap, bernstein_C=C)
    except MassViolation:
        return {**row, "pass": False}
    return {
        **row,
        "bad_mass_fraction": cells.bad_mass_fraction,
        "good_cells": int(cells.good.sum()),
        "chain_holds": cells.chain_holds,
        "pass": cells.chain_holds,
    }


@experiment("bernstein", BernsteinParams)
def run_bernstein(params: BernsteinParams, seed: int) -> ExperimentResult:
    """
    Bernstein constant per bandwidth, then the good/bad cell split with
    A = A_factor * C on the same trials.
    """
    rows: list[dict[str, Any]] = []
    fits: dict[str, Any] = {}
    violations = 0
    for ni, N in enumerate(params.bandwidths):
        stream = seed + ni
        bernstein_rows, fit = bernstein_check(
            N, params.m_max, params.trials, stream, params.W
        )
        A = params.A_factor * fit.constant
        certificate = cell_tail_certificate(fit.constant, A, params.m_cap)
        fits[str(N)] = {**fit.to_dict(), "A": A, "tail_certificate": certificate}
        cell_rows = parallel_map(
            partial(_cell_row, params, stream, N, A, fit.constant),
            range(params.trials),
        )
        violations += fit.violations + sum(not r["pass"] for r in cell_rows)
        rows.extend({**r, "kind": "bernstein"} for r in bernstein_rows)
        rows.extend(cell_rows)
    logger.info("bernstein", bandwidths=len(params.bandwidths), violations=violations)
    return ExperimentResult(rows, {"fits": fits}, violations)


@experiment("uncertainty", UncertaintyParams)
def run_uncertainty(params: UncertaintyParams, seed: int) -> ExperimentResult:
    report = uncertainty_experiment(
        params.window_set.build(),
        params.alpha,
        params.L,
        params.bandwidths,
        params.trials,
        seed,
        params.W,
        params.gamma,
    )
    summary = {"gamma": report.gamma, **report.fit.to_dict()}
    return ExperimentResult(report.rows, summary, report.fit.violations)

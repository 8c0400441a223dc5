"""
Run one configured experiment and map its outcome to a process exit code.

    0  reports written, no inequality violations
    1  reports written with violations, or a bound violated outright
    2  configuration error, nothing written
    3  numerical failure, nothing written
"""

from pathlib import Path
from typing import Final

import structlog

from obslab.errors import (
    BoundViolation,
    ConfigError,
    CoverageFailure,
    MassViolation,
    ObslabError,
    ParamError,
    SeparationError,
)
from obslab.experiments.base import EXPERIMENTS
from obslab.experiments.config import ExperimentConfig, load_config
from obslab.experiments.params import Params
from obslab.experiments.reports import write_reports

logger = structlog.get_logger(__name__)

EXIT_OK: Final = 0
EXIT_VIOLATIONS: Final = 1
EXIT_CONFIG: Final = 2
EXIT_NUMERICAL: Final = 3


def exit_code(exc: BaseException) -> int:
    """Exit code for a failure raised before any report was written."""
    match exc:
        case ConfigError() | ParamError() | SeparationError():
            return EXIT_CONFIG
        case BoundViolation() | MassViolation() | CoverageFailure():
            return EXIT_VIOLATIONS
        case _:
            # NumericalFailure, DegenerateSet, EmptySpace and float traps
            return EXIT_NUMERICAL


def run(config: ExperimentConfig, params: Params) -> int:
    """Run the experiment and write its reports; 0 iff nothing was violated."""
    if config.experiment is None:
        msg = "resolved config names no experiment"
        raise ConfigError(msg)
    log = logger.bind(experiment=config.experiment, seed=config.seed)
    log.info("experiment_started")
    result = EXPERIMENTS[config.experiment].run(params, config.seed)
    write_reports(config, params, result)
    log.info("experiment_finished", violations=result.violations)
    return EXIT_OK if result.violations == 0 else EXIT_VIOLATIONS


def run_experiment(
    experiment: str,
    config_path: Path,
    seed: int | None = None,
    output: str | None = None,
) -> int:
    """Load, run and report; every obslab failure becomes an exit code."""
    try:
        config, params = load_config(config_path, experiment, seed, output)
        return run(config, params)
    except (ObslabError, FloatingPointError, OverflowError) as e:
        code = exit_code(e)
        logger.exception("experiment_failed", experiment=experiment, exit_code=code)
        return code

"""
Command-line experiments.

Importing this package registers every runner in EXPERIMENTS.
"""

from . import dynamics, polynomials, potential, sets, spectral
from .base import EXPERIMENTS, Experiment, ExperimentResult, experiment
from .config import ExperimentConfig, load_config
from .reports import jsonable, write_reports
from .runner import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VIOLATIONS,
    exit_code,
    run,
    run_experiment,
)

__all__ = [
    "EXIT_CONFIG",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "EXIT_VIOLATIONS",
    "EXPERIMENTS",
    "Experiment",
    "ExperimentConfig",
    "ExperimentResult",
    "dynamics",
    "experiment",
    "exit_code",
    "jsonable",
    "load_config",
    "polynomials",
    "potential",
    "run",
    "run_experiment",
    "sets",
    "spectral",
    "write_reports",
]

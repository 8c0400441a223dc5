"""
Experiment registry.

Each experiment is a function (params, seed) -> ExperimentResult registered
under its command-line name together with its parameter model.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import structlog

from obslab.experiments.params import Params

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class ExperimentResult:
    """
    Attributes:
        rows: CSV table, one row per trial or grid point
        summary: JSON summary (fitted constants, certificates)
        violations: inequality violations counted by the experiment
    """

    rows: list[dict[str, Any]]
    summary: dict[str, Any] = field(default_factory=dict[str, Any])
    violations: int = 0


type Runner[P: Params] = Callable[[P, int], ExperimentResult]


@dataclass(frozen=True)
class Experiment:
    name: str
    params_model: type[Params]
    run: Runner[Any]


EXPERIMENTS: dict[str, Experiment] = {}


def experiment[P: Params](
    name: str, params_model: type[P]
) -> Callable[[Runner[P]], Runner[P]]:
    """Register the decorated runner under name."""

    def register(fn: Runner[P]) -> Runner[P]:
        if name in EXPERIMENTS:
            msg = f"experiment {name!r} registered twice"
            raise ValueError(msg)
        EXPERIMENTS[name] = Experiment(name, params_model, fn)
        return fn

    return register

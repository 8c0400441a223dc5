"""
Experiment configuration files.

A configuration is a JSON object

    {"experiment": "content", "seed": 7, "output": "runs/content",
     "parameters": {...}}

whose parameters table is validated against the parameter model registered
for the experiment. Command-line values override the file.
"""

import json
from pathlib import Path
from typing import Any

import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from obslab.errors import ConfigError
from obslab.experiments.base import EXPERIMENTS
from obslab.experiments.params import ExperimentName, Params

logger = structlog.get_logger(__name__)

DEFAULT_OUTPUT = "obslab-report"


class ExperimentConfig(BaseModel):
    """
    Attributes:
        experiment: experiment the file was written for, None if any
        parameters: raw per-experiment parameter table
        seed: 64-bit root seed
        output: report path prefix
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment: ExperimentName | None = None
    parameters: dict[str, Any] = Field(default_factory=dict[str, Any])
    seed: int = Field(default=0, ge=0, lt=2**64)
    output: str = DEFAULT_OUTPUT


def _read_json(path: Path) -> Any:
    try:
        with path.open(encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        msg = f"cannot read config {path}: {e}"
        raise ConfigError(msg) from e


def load_config(
    path: Path,
    experiment: str,
    seed: int | None = None,
    output: str | None = None,
) -> tuple[ExperimentConfig, Params]:
    """
    Read and validate the configuration for one experiment run.

    Raises:
        ConfigError: unreadable file, schema mismatch, unknown experiment or
            a config written for a different experiment
    """
    if experiment not in EXPERIMENTS:
        msg = f"unknown experiment {experiment!r}"
        raise ConfigError(msg)
    raw = _read_json(path)
    if not isinstance(raw, dict):
        msg = f"config {path} must hold a JSON object"
        raise ConfigError(msg)
    overrides: dict[str, Any] = {"experiment": experiment}
    if seed is not None:
        overrides["seed"] = seed
    if output is not None:
        overrides["output"] = output
    declared = raw.get("experiment")
    if declared is not None and declared != experiment:
        msg = f"config {path} is for {declared!r}, not {experiment!r}"
        raise ConfigError(msg)
    try:
        config = ExperimentConfig.model_validate({**raw, **overrides})
        params = EXPERIMENTS[experiment].params_model.model_validate(
            config.parameters
        )
    except ValidationError as e:
        msg = f"invalid config {path}: {e}"
        raise ConfigError(msg) from e
    logger.debug("config_loaded", path=str(path), experiment=experiment)
    return config, params

"""
Report files.

Every run writes <prefix>.csv with one row per trial or grid point and
<prefix>.json with the resolved configuration, the seed, the summary and the
violation count. Neither file carries timestamps, host or thread data, so
reruns with the same configuration are byte-identical.
"""

import json
import math
from pathlib import Path
from typing import Any, cast

import numpy as np
import pandas as pd
import structlog

from obslab.experiments.base import ExperimentResult
from obslab.experiments.config import ExperimentConfig
from obslab.experiments.params import Params

logger = structlog.get_logger(__name__)


def jsonable(value: Any) -> Any:
    """Plain JSON tree; non-finite floats become "inf", "-inf" or "nan"."""
    match value:
        case dict():
            items = cast("dict[Any, Any]", value).items()
            return {str(k): jsonable(v) for k, v in items}
        case list() | tuple():
            return [jsonable(v) for v in cast("list[Any]", value)]
        case np.ndarray():
            return jsonable(value.tolist())
        case bool() | np.bool_():
            return bool(value)
        case int() | np.integer():
            return int(value)
        case float() | np.floating():
            x = float(value)
            return x if math.isfinite(x) else str(x)
        case _:
            return value


def report_payload(
    config: ExperimentConfig, params: Params, result: ExperimentResult
) -> dict[str, Any]:
    resolved = config.model_dump(mode="json")
    resolved["parameters"] = params.model_dump(mode="json")
    return {
        "config": jsonable(resolved),
        "experiment": config.experiment,
        "seed": config.seed,
        "rows": len(result.rows),
        "summary": jsonable(result.summary),
        "violations": result.violations,
    }


def write_reports(
    config: ExperimentConfig, params: Params, result: ExperimentResult
) -> tuple[Path, Path]:
    """Write the CSV table and the JSON summary; returns their paths."""
    prefix = Path(config.output)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_path = prefix.with_name(prefix.name + ".csv")
    json_path = prefix.with_name(prefix.name + ".json")

    table = pd.DataFrame(result.rows)
    table.to_csv(csv_path, index=False, lineterminator="\n", encoding="utf-8")
    payload = report_payload(config, params, result)
    json_path.write_text(
        json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n",
        encoding="utf-8",
    )
    logger.info(
        "reports_written",
        csv=str(csv_path),
        json=str(json_path),
        rows=len(result.rows),
    )
    return csv_path, json_path

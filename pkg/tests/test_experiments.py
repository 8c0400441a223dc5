import json
import math
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
import pytest
import structlog

from obslab.errors import (
    BoundViolation,
    ConfigError,
    DegenerateSet,
    NumericalFailure,
    ParamError,
)
from obslab.experiments import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VIOLATIONS,
    EXPERIMENTS,
    exit_code,
    jsonable,
    load_config,
    run_experiment,
)
from obslab.experiments import sets as experiment_sets
from obslab.experiments.params import ContentParams
from obslab.main import build_parser, main
from obslab.settings import settings

logger = structlog.get_logger(__name__)

H0_CANTOR: dict[str, Any] = {"rule": {"gauge": {"family": "h_alpha"}}, "depth": 8}


def write_config(path: Path, payload: Any) -> Path:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def read_report(prefix: Path) -> tuple[pd.DataFrame, dict[str, Any]]:
    table = pd.read_csv(prefix.with_name(prefix.name + ".csv"))
    payload = json.loads(prefix.with_name(prefix.name + ".json").read_text("utf-8"))
    return table, payload


@pytest.fixture
def content_config(tmp_path: Path) -> Path:
    """Fixture to provide a content run on the h_0 Cantor set at depth 8"""
    return write_config(
        tmp_path / "content.json",
        {"experiment": "content", "seed": 7, "parameters": {"cantor": H0_CANTOR}},
    )


@pytest.fixture
def jensen_config(tmp_path: Path) -> Path:
    """Fixture to provide a small Jensen sweep over several trials"""
    return write_config(
        tmp_path / "jensen.json",
        {"parameters": {"degrees": [2, 5], "trials": 6}},
    )


def test_every_experiment_is_registered() -> None:
    expected = {
        "content",
        "remez",
        "spectral-cost",
        "bernstein",
        "uncertainty",
        "heat-ratio",
        "counterexample",
        "lr-schedule",
        "capacity",
        "slicing",
        "cartan",
        "nazarov-turan",
    }
    assert expected <= set(EXPERIMENTS)


def test_load_config_applies_overrides(content_config: Path) -> None:
    config, params = load_config(content_config, "content", seed=11, output="x/y")
    assert config.seed == 11
    assert config.output == "x/y"
    assert isinstance(params, ContentParams)
    assert params.cantor.depth == 8


@pytest.mark.parametrize(
    "payload",
    [
        [1, 2, 3],
        {"parameters": {"cantor": H0_CANTOR, "colour": "red"}},
        {"parameters": {"cantor": {**H0_CANTOR, "depth": -1}}},
        {"experiment": "remez", "parameters": {"cantor": H0_CANTOR}},
        {"seed": -5, "parameters": {"cantor": H0_CANTOR}},
    ],
)
def test_bad_configs_are_rejected(tmp_path: Path, payload: Any) -> None:
    path = write_config(tmp_path / "bad.json", payload)
    with pytest.raises(ConfigError):
        load_config(path, "content")


def test_unreadable_config(tmp_path: Path) -> None:
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path, "content")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json", "content")


def test_unknown_experiment(content_config: Path) -> None:
    with pytest.raises(ConfigError, match="unknown experiment"):
        load_config(content_config, "teleport")


def test_config_error_writes_nothing(tmp_path: Path) -> None:
    path = write_config(tmp_path / "bad.json", {"parameters": {"depth": 3}})
    prefix = tmp_path / "out" / "report"
    assert run_experiment("content", path, output=str(prefix)) == EXIT_CONFIG
    assert not (tmp_path / "out").exists()


def test_content_run(tmp_path: Path, content_config: Path) -> None:
    prefix = tmp_path / "content"
    assert run_experiment("content", content_config, output=str(prefix)) == EXIT_OK
    table, payload = read_report(prefix)
    assert payload["seed"] == 7
    assert payload["config"]["parameters"]["cantor"]["depth"] == 8
    assert payload["summary"]["upper"] == pytest.approx(1.0, rel=1e-9)
    assert payload["summary"]["lower"] >= 0.20
    assert payload["violations"] == 0
    assert list(table["depth"]) == list(range(1, 9))


def test_content_run_past_the_frostman_cap(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    monkeypatch.setattr(experiment_sets, "FROSTMAN_MAX_DEPTH", 3)
    path = write_config(
        tmp_path / "deep.json",
        {"parameters": {"cantor": {**H0_CANTOR, "depth": 5}}},
    )
    prefix = tmp_path / "deep"
    assert run_experiment("content", path, output=str(prefix)) == EXIT_OK
    table, payload = read_report(prefix)
    assert payload["summary"]["frostman_depth"] == 3
    assert payload["summary"]["upper"] == pytest.approx(1.0, rel=1e-9)
    assert table["lower"].isna().tolist() == [False, False, False, True, True]


def test_counterexample_run(tmp_path: Path) -> None:
    path = write_config(
        tmp_path / "einf.json",
        {"parameters": {"eps": 1.0, "levels": 4, "T": 1.0}},
    )
    prefix = tmp_path / "einf"
    assert run_experiment("counterexample", path, output=str(prefix)) == EXIT_OK
    table, payload = read_report(prefix)
    assert payload["summary"]["ratio_decreasing"]
    assert all(payload["summary"]["invariants"].values())
    assert len(table) == 4


def test_bernstein_run_reports_the_tail_certificate(tmp_path: Path) -> None:
    path = write_config(
        tmp_path / "bernstein.json",
        {"parameters": {"bandwidths": [4.0], "m_max": 8, "trials": 4}},
    )
    prefix = tmp_path / "bernstein"
    assert run_experiment("bernstein", path, output=str(prefix)) in (
        EXIT_OK,
        EXIT_VIOLATIONS,
    )
    _, payload = read_report(prefix)
    fit = payload["summary"]["fits"]["4.0"]
    assert fit["A"] == pytest.approx(2 * fit["fitted_C"], rel=1e-12)
    assert 0 < fit["tail_certificate"] < 1e-6


def test_bernstein_threshold_below_sqrt3_is_a_config_error(tmp_path: Path) -> None:
    path = write_config(
        tmp_path / "bernstein.json",
        {"parameters": {"bandwidths": [4.0], "trials": 2, "A_factor": 1.5}},
    )
    prefix = tmp_path / "out" / "bernstein"
    assert run_experiment("bernstein", path, output=str(prefix)) == EXIT_CONFIG
    assert not (tmp_path / "out").exists()


def propagation_payload(taylor_order: int) -> dict[str, Any]:
    return {
        "parameters": {
            "cantor": {**H0_CANTOR, "depth": 4},
            "alpha": 0.0,
            "degrees": [3],
            "trials": 2,
            "eps_count": 2,
            "spectral_trials": 2,
            "taylor_order": taylor_order,
        }
    }


def test_propagation_run_certifies_taylor_tails(tmp_path: Path) -> None:
    path = write_config(tmp_path / "prop.json", propagation_payload(160))
    prefix = tmp_path / "prop"
    code = run_experiment("propagation", path, output=str(prefix))
    assert code in (EXIT_OK, EXIT_VIOLATIONS)
    table, payload = read_report(prefix)
    assert payload["summary"]["taylor_ln_ratio_max"] < math.log(1e-8)
    assert set(table["function"]) == {0, 1, 2, 3}


def test_short_taylor_series_is_a_numerical_failure(tmp_path: Path) -> None:
    path = write_config(tmp_path / "prop.json", propagation_payload(40))
    prefix = tmp_path / "out" / "prop"
    assert run_experiment("propagation", path, output=str(prefix)) == EXIT_NUMERICAL
    assert not (tmp_path / "out").exists()


def report_bytes(prefix: Path) -> bytes:
    return (
        prefix.with_name(prefix.name + ".csv").read_bytes()
        + prefix.with_name(prefix.name + ".json").read_bytes()
    )


def test_reports_ignore_thread_count(
    tmp_path: Path, jensen_config: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    prefix = tmp_path / "jensen"
    outputs: list[bytes] = []
    for threads in (1, 4):
        monkeypatch.setattr(settings, "threads", threads)
        code = run_experiment("jensen", jensen_config, seed=3, output=str(prefix))
        assert code in (EXIT_OK, EXIT_VIOLATIONS)
        outputs.append(report_bytes(prefix))
    assert outputs[0] == outputs[1]


def test_reports_repeat_byte_for_byte(tmp_path: Path, content_config: Path) -> None:
    prefix = tmp_path / "content"
    run_experiment("content", content_config, output=str(prefix))
    first = report_bytes(prefix)
    run_experiment("content", content_config, output=str(prefix))
    assert report_bytes(prefix) == first


def test_jsonable_converts_numpy_and_non_finite() -> None:
    value = {
        1: np.float64(0.5),
        "n": np.int64(3),
        "flag": np.bool_(True),  # noqa: FBT003
        "bad": [math.inf, -math.inf],
        "grid": np.array([1.0, 2.0]),
    }
    assert jsonable(value) == {
        "1": 0.5,
        "n": 3,
        "flag": True,
        "bad": ["inf", "-inf"],
        "grid": [1.0, 2.0],
    }
    assert jsonable(math.nan) == "nan"


@pytest.mark.parametrize(
    ("exc", "code"),
    [
        (ConfigError("x"), EXIT_CONFIG),
        (ParamError("x"), EXIT_CONFIG),
        (BoundViolation("x"), EXIT_VIOLATIONS),
        (NumericalFailure("x"), EXIT_NUMERICAL),
        (DegenerateSet("x"), EXIT_NUMERICAL),
        (FloatingPointError("x"), EXIT_NUMERICAL),
    ],
)
def test_exit_code_mapping(exc: BaseException, code: int) -> None:
    assert exit_code(exc) == code


def test_parser_requires_config() -> None:
    with pytest.raises(SystemExit):
        build_parser().parse_args(["content"])
    args = build_parser().parse_args(["content", "--config", "c.json", "--seed", "4"])
    assert args.seed == 4
    assert args.out is None


def test_main_runs_from_argv(tmp_path: Path, content_config: Path) -> None:
    prefix = tmp_path / "cli"
    argv = ["content", "--config", str(content_config), "--out", str(prefix)]
    assert main(argv) == EXIT_OK
    _, payload = read_report(prefix)
    assert payload["experiment"] == "content"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

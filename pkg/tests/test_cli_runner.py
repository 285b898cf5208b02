import json
import math
from pathlib import Path

import numpy as np
import pytest

import cgolab
from config.experiment import ExperimentConfig, load_config, validate_config
from database.connection import close_connection, execute_query
from database.queries import RunQueries
from src.exceptions import ConfigError, FitError, HypothesisError
from src.runner import ExperimentRunner, latest_run_id
from utils.formatters import format_duration, format_measured, format_status, truncate_text
from utils.serialization import canonical_json, stable_hash, to_jsonable


@pytest.fixture
def config(tmp_path):
    return ExperimentConfig().with_output_dir(tmp_path / "out")


@pytest.fixture
def db_path(tmp_path):
    path = str(tmp_path / "ledger.db")
    yield path
    close_connection(path)


def write_config(tmp_path, data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


# Config --------------------------------------------------------------------------

def test_unknown_field_is_rejected():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"tau": [8, 12, 16, 24]})


def test_unknown_tolerance_is_rejected():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"tolerances": {"closeness": 1e-3}})


def test_tolerance_override():
    config = ExperimentConfig.from_dict({"tolerances": {"recovery": 0.2}})
    assert config.tolerance("recovery") == 0.2
    assert config.tolerance("energy") == 1e-3


def test_sweep_beyond_budget_is_rejected(tmp_path):
    config = ExperimentConfig.from_dict({"tau_sweep": [8, 12, 16, 100], "output_dir": str(tmp_path)})
    with pytest.raises(ConfigError):
        validate_config(config)


def test_short_sweep_is_rejected(tmp_path):
    config = ExperimentConfig.from_dict({"tau_sweep": [8, 12, 16], "output_dir": str(tmp_path)})
    with pytest.raises(ConfigError):
        validate_config(config)


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(broken)


def test_output_dir_must_be_a_directory(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    with pytest.raises(ConfigError):
        validate_config(ExperimentConfig().with_output_dir(blocker))


def test_default_config_file_loads(tmp_path):
    path = Path(__file__).resolve().parent.parent / "configs" / "default.json"
    config = load_config(path, output_dir=tmp_path)
    assert config.tau_sweep == (8.0, 12.0, 16.0, 24.0)
    assert config.output_dir == tmp_path


def test_config_hash_is_stable():
    assert ExperimentConfig().config_hash() == ExperimentConfig().config_hash()
    assert ExperimentConfig(seed=1).config_hash() != ExperimentConfig().config_hash()
    assert len(ExperimentConfig().config_hash()) == 64


# CLI -----------------------------------------------------------------------------

def test_dry_run_succeeds(tmp_path):
    assert cgolab.main(["phase-build", "--dry-run", "--output", str(tmp_path / "out")]) == 0


def test_config_errors_exit_with_two(tmp_path):
    unknown = write_config(tmp_path, {"gamma": 1.0})
    assert cgolab.main(["carleman", "--config", str(unknown), "--dry-run"]) == 2
    over_budget = write_config(tmp_path, {"tau_sweep": [8, 12, 16, 100], "output_dir": str(tmp_path)})
    assert cgolab.main(["recover", "--config", str(over_budget), "--dry-run"]) == 2
    assert cgolab.main(["recover", "--config", str(tmp_path / "missing.json")]) == 2


def test_nonpositive_jobs_exit_with_two(tmp_path):
    assert cgolab.main(["identity", "--jobs", "0", "--output", str(tmp_path)]) == 2


def test_unknown_subcommand_exits():
    with pytest.raises(SystemExit):
        cgolab.main(["solve-everything"])


# Runner --------------------------------------------------------------------------

def test_check_semantics(config, db_path):
    runner = ExperimentRunner(config, jobs=1, db_path=db_path, record=False)

    def body(r):
        r.check("below", 1e-4, 1e-3)
        r.check("above", 1e-2, 1e-3)
        r.check("nan", float("nan"), 1e-3)
        r.check("forced", 5.0, 1.0, passed=True, detail="reported only")
        r.check("complex", 1e-4 + 3.0j, 1e-3)

    report = runner.run("unit", body)
    outcome = {c.name: c.passed for c in report.checks}
    assert outcome == {"below": True, "above": False, "nan": False, "forced": True, "complex": True}
    assert report.check("nan").measured is None
    assert report.status == "completed"
    assert report.n_failed == 2
    assert not report.passed


def test_attempt_records_library_errors(config, db_path):
    runner = ExperimentRunner(config, jobs=1, db_path=db_path, record=False)
    seen = {}

    def failing():
        raise FitError("too few points", residual=1.0)

    def body(r):
        seen["fail"] = r.attempt("fit", failing)
        seen["ok"] = r.attempt("sum", lambda a, b: a + b, 2, b=3)

    report = runner.run("unit", body)
    assert seen == {"fail": None, "ok": 5}
    assert len(report.checks) == 1
    assert report.checks[0].name == "fit"
    assert "FitError" in report.checks[0].detail


def test_escaping_error_marks_run_failed(config, db_path):
    runner = ExperimentRunner(config, jobs=1, db_path=db_path, record=False)

    def body(r):
        r.check("first", 0.0, 1.0)
        raise HypothesisError("tau below threshold")

    report = runner.run("unit", body)
    assert report.status == "failed"
    assert [c.name for c in report.checks] == ["first", "unit"]
    assert not report.passed


def test_non_library_errors_propagate(config, db_path):
    runner = ExperimentRunner(config, jobs=1, db_path=db_path, record=False)

    def body(r):
        raise RuntimeError("bug")

    with pytest.raises(RuntimeError):
        runner.run("unit", body)


def test_report_and_timings_are_written_separately(config, db_path):
    runner = ExperimentRunner(config, jobs=1, db_path=db_path, record=False)

    def body(r):
        with r.timed("work"):
            r.check("value", 0.5, 1.0)
        r.write_json("extra.json", {"z": 1 + 2j, "bad": math.inf})

    runner.run("unit", body)
    out = config.output_dir / "unit"
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    timings = json.loads((out / "timings.json").read_text(encoding="utf-8"))
    extra = json.loads((out / "extra.json").read_text(encoding="utf-8"))
    assert "timings" not in report
    assert set(report["config"]) == {"experiment", "lab"}
    assert report["n_checks"] == 1
    assert {"total", "work"} <= set(timings)
    assert extra == {"bad": None, "z": [1.0, 2.0]}
    assert "unit/extra.json" in report["artifacts"]


def test_reports_are_deterministic(config, db_path):
    def body(r):
        r.check("value", 0.25, 1.0)
        r.report.results["series"] = np.array([1.0, 2.0])

    ExperimentRunner(config, jobs=1, db_path=db_path, record=False).run("unit", body)
    first = (config.output_dir / "unit" / "report.json").read_bytes()
    ExperimentRunner(config, jobs=1, db_path=db_path, record=False).run("unit", body)
    assert (config.output_dir / "unit" / "report.json").read_bytes() == first


# Ledger --------------------------------------------------------------------------

def test_fresh_ledger_schema_has_every_run_column(db_path):
    rows, _ = execute_query("PRAGMA table_info(runs)", db_path=db_path)
    columns = {row[1] for row in rows}
    assert {"subcommand", "status", "config_hash", "output_dir"} <= columns


def test_runs_are_logged_to_the_ledger(config, db_path):
    def body(r):
        r.check("good", 0.1, 1.0)
        r.check("bad", 2.0, 1.0)

    ExperimentRunner(config, jobs=1, db_path=db_path, record=True).run("unit", body)
    run_id = latest_run_id(db_path)
    assert run_id is not None

    run = RunQueries.get_run(run_id, db_path=db_path)
    assert run["subcommand"] == "unit"
    assert run["status"] == "completed"
    assert run["n_checks"] == 2
    assert run["n_failed"] == 1
    assert run["config_hash"] == config.config_hash()

    checks = RunQueries.get_checks_for_run(run_id, db_path=db_path)
    assert checks["name"].tolist() == ["good", "bad"]
    assert checks["passed"].tolist() == [True, False]

    recent = RunQueries.get_recent_runs(db_path=db_path)
    assert len(recent) == 1
    assert RunQueries.get_subcommands(db_path=db_path) == ["unit"]


def test_pass_rate_summary(config, db_path):
    runner = ExperimentRunner(config, jobs=1, db_path=db_path, record=True)
    runner.run("unit", lambda r: r.check("good", 0.0, 1.0))
    runner.run("unit", lambda r: r.check("bad", 2.0, 1.0))
    summary = RunQueries.get_pass_rate_summary(db_path=db_path)
    row = summary.iloc[0]
    assert (row["n_runs"], row["n_passed"]) == (2, 1)
    assert row["pass_rate"] == pytest.approx(0.5)


def test_record_false_skips_the_ledger(config, db_path):
    ExperimentRunner(config, jobs=1, db_path=db_path, record=False).run("unit", lambda r: None)
    assert latest_run_id(db_path) is None
    assert RunQueries.get_recent_runs(db_path=db_path).empty


# Serialization and formatting ----------------------------------------------------

def test_to_jsonable():
    value = {"c": np.complex128(1 - 2j), "n": float("nan"), "p": Path("a/b"), "a": np.arange(2), "f": np.bool_(True)}
    assert to_jsonable(value) == {"c": [1.0, -2.0], "n": None, "p": "a/b", "a": [0, 1], "f": True}


def test_canonical_json_sorts_keys():
    assert canonical_json({"b": 1, "a": 2}, indent=None) == '{"a": 2, "b": 1}'
    assert stable_hash({"b": 1, "a": 2}) == stable_hash({"a": 2, "b": 1})


@pytest.mark.parametrize(
    "seconds, expected",
    [(0.85, "850 ms"), (12.34, "12.3 s"), (252.0, "4.2 min"), (5400.0, "1.5 hrs"), (None, "N/A"), (-1.0, "N/A")],
)
def test_format_duration(seconds, expected):
    assert format_duration(seconds) == expected


@pytest.mark.parametrize(
    "value, expected",
    [(0.0, "0"), (0.5, "0.5"), (1.5e-8, "1.500e-08"), (None, "N/A"), (float("nan"), "N/A")],
)
def test_format_measured(value, expected):
    assert format_measured(value) == expected


def test_format_status_and_truncate():
    assert format_status("failed") == "Failed"
    assert format_status(None) == "Unknown"
    assert truncate_text("x" * 100, 10) == "xxxxxxx..."
    assert truncate_text(None) == ""

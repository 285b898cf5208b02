"""
Experiment runner: executes one subcommand's checks, writes artifacts and
logs the run to the sqlite ledger.
"""

import logging
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Union

import numpy as np
import pandas as pd

from config.experiment import ExperimentConfig
from config.settings import LabSettings
from database.connection import execute_insert, execute_many, execute_query
from src.exceptions import CGOLabError
from src.geometry.domain import Domain
from utils.serialization import write_csv, write_json

logger = logging.getLogger(__name__)

REPORT_FILE = "report.json"
TIMINGS_FILE = "timings.json"


@dataclass
class CheckResult:
    """One pass/fail measurement of a run."""

    name: str
    passed: bool
    measured: Optional[float] = None
    threshold: Optional[float] = None
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass
class RunReport:
    """
    Outcome of one subcommand run.

    Timings are kept out of to_dict so report.json depends only on the config.
    """

    subcommand: str
    config: Dict[str, Any]
    checks: List[CheckResult] = field(default_factory=list)
    artifacts: List[str] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    status: str = "running"
    results: Dict[str, Any] = field(default_factory=dict)

    @property
    def n_failed(self) -> int:
        return sum(1 for c in self.checks if not c.passed)

    @property
    def passed(self) -> bool:
        return self.status == "completed" and self.n_failed == 0

    def check(self, name: str) -> Optional[CheckResult]:
        for result in self.checks:
            if result.name == name:
                return result
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subcommand": self.subcommand,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "artifacts": list(self.artifacts),
            "status": self.status,
            "results": self.results,
            "n_checks": len(self.checks),
            "n_failed": self.n_failed,
        }


def _as_float(value: Any) -> Optional[float]:
    if value is None:
        return None
    value = float(np.real(value))
    return value if math.isfinite(value) else None


class ExperimentRunner:
    """Runs the checks of one subcommand against a validated config."""

    def __init__(self, config: ExperimentConfig, jobs: Optional[int] = None,
                 db_path: Optional[Union[str, Path]] = None, record: bool = True):
        """
        Initialize the runner.

        Args:
            config: Validated experiment config
            jobs: Worker cap for parallel sections
            db_path: Ledger file; LabSettings.get_db_path() when omitted
            record: Log the run to the ledger
        """
        self.config = config
        self.jobs = LabSettings.get_workers(jobs)
        self.db_path = db_path
        self.record = record
        self.output_dir = Path(config.output_dir)
        self.report: Optional[RunReport] = None
        self._domain: Optional[Domain] = None

    @property
    def domain(self) -> Domain:
        if self._domain is None:
            self._domain = self.config.build_domain()
        return self._domain

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.config.seed)

    # Checks ---------------------------------------------------------------

    def check(self, name: str, measured: Any, threshold: Any, passed: Optional[bool] = None,
              detail: str = "") -> CheckResult:
        """
        Record a measurement.

        ``passed`` defaults to measured <= threshold; NaN fails.
        """
        measured_f, threshold_f = _as_float(measured), _as_float(threshold)
        if passed is None:
            passed = measured_f is not None and threshold_f is not None and measured_f <= threshold_f
        result = CheckResult(name, bool(passed), measured_f, threshold_f, detail)
        self.report.checks.append(result)
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, f"Check {name}: measured {measured_f}, threshold {threshold_f}, "
                          f"{'PASS' if result.passed else 'FAIL'}{' (' + detail + ')' if detail else ''}")
        return result

    def attempt(self, name: str, func: Callable[..., Any], *args, **kwargs) -> Any:
        """
        Call func; a CGOLabError is recorded as a failed check named ``name``.

        Returns:
            func's result, or None after a recorded failure
        """
        try:
            return func(*args, **kwargs)
        except CGOLabError as e:
            logger.error(f"{name} failed: {e}")
            self.report.checks.append(CheckResult(name, False, None, None, f"{type(e).__name__}: {e}"))
            return None

    @contextmanager
    def timed(self, label: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.report.timings[label] = self.report.timings.get(label, 0.0) + time.perf_counter() - start

    # Artifacts ------------------------------------------------------------

    def _artifact(self, name: str) -> Path:
        path = self.output_dir / self.report.subcommand / name
        relative = path.relative_to(self.output_dir).as_posix()
        if relative not in self.report.artifacts:
            self.report.artifacts.append(relative)
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        return write_json(self._artifact(name), payload)

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        return write_csv(self._artifact(name), frame)

    # Run ------------------------------------------------------------------

    def run(self, subcommand: str, body: Callable[["ExperimentRunner"], None]) -> RunReport:
        """
        Execute body and write report.json, timings.json and the ledger entry.

        A CGOLabError escaping body marks the run failed; checks recorded
        before it are kept.

        Args:
            subcommand: Name written to the report and the ledger
            body: Callable receiving this runner

        Returns:
            RunReport
        """
        started = datetime.now()
        self.report = RunReport(
            subcommand=subcommand,
            config={"experiment": self.config.to_dict(), "lab": LabSettings.get_lab_config()},
        )
        logger.info(f"Starting {subcommand} (config {self.config.config_hash()[:12]}, {self.jobs} workers)")

        try:
            with self.timed("total"):
                body(self)
            self.report.status = "completed"
        except CGOLabError as e:
            self.report.status = "failed"
            self.report.checks.append(CheckResult(subcommand, False, None, None, f"{type(e).__name__}: {e}"))
            logger.error(f"{subcommand} failed: {e}")

        report_path = self._artifact(REPORT_FILE)
        self.write_json(TIMINGS_FILE, self.report.timings)
        write_json(report_path, self.report.to_dict())
        completed = datetime.now()

        logger.info(
            f"{subcommand} {self.report.status}: {len(self.report.checks)} checks, "
            f"{self.report.n_failed} failed, {(completed - started).total_seconds():.1f}s"
        )
        if self.record:
            self._log_run(started, completed)
        return self.report

    def _log_run(self, started: datetime, completed: datetime) -> Optional[int]:
        """Write the run and its checks to the ledger; failures are logged only."""
        report = self.report
        try:
            run_id = execute_insert(
                """
                INSERT INTO runs (
                    subcommand, config_hash, started_at, completed_at, status,
                    n_checks, n_failed, duration_seconds, output_dir
                ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
                """,
                (
                    report.subcommand,
                    self.config.config_hash(),
                    started.strftime('%Y-%m-%d %H:%M:%S'),
                    completed.strftime('%Y-%m-%d %H:%M:%S'),
                    report.status,
                    len(report.checks),
                    report.n_failed,
                    (completed - started).total_seconds(),
                    self.output_dir.as_posix(),
                ),
                db_path=self.db_path,
            )
            if report.checks:
                execute_many(
                    "INSERT INTO checks (run_id, name, passed, measured, threshold, detail) VALUES (?, ?, ?, ?, ?, ?)",
                    [(run_id, c.name, int(c.passed), c.measured, c.threshold, c.detail) for c in report.checks],
                    db_path=self.db_path,
                )
            logger.debug(f"Logged run {run_id} to the ledger")
            return run_id
        except Exception as e:
            logger.error(f"Failed to log run to the ledger: {e}")
            return None


def latest_run_id(db_path: Optional[Union[str, Path]] = None) -> Optional[int]:
    """Id of the most recent ledger entry, or None."""
    try:
        results, _ = execute_query("SELECT MAX(id) FROM runs", db_path=db_path)
        return results[0][0] if results else None
    except Exception as e:
        logger.error(f"Failed to read the ledger: {e}")
        return None

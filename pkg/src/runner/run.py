"""
Run orchestration: execute suites over zoo entries and assemble the report.

Entries and suites may run concurrently; results are reassembled in config
order, and every sampler is seeded from the config, so the report does not
depend on the number of workers.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from typing import Optional

from sqlalchemy.orm import Session

from src.db.database import SessionLocal, init_db
from src.db.models import RunLog
from src.errors import ConfigError, HypothesisViolationError, ReportIOError, SoulcurvError
from src.runner.config import RunConfig, validate_config
from src.runner.report import build_report, write_report
from src.runner.suites import SuiteResult, run_suite
from src.zoo.catalog import ZooEntry, get_entry

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2

# Failures that mean the request itself was wrong, not the mathematics.
USAGE_ERRORS = (ConfigError, HypothesisViolationError, ReportIOError)


@dataclass(eq=False)
class RunReport:
    report: dict
    results: list[SuiteResult]
    failures: list[str]
    exit_code: int


def _run_one(index: int, total: int, entry: ZooEntry, suite: str, config: RunConfig) -> SuiteResult:
    logger.info(f"[{index}/{total}] {entry.name}/{suite}")
    try:
        return run_suite(suite, entry, config)
    except USAGE_ERRORS:
        raise
    except SoulcurvError as e:
        logger.warning(f"[{index}/{total}] {entry.name}/{suite} failed: {e}")
        result = SuiteResult(suite=suite, entry=entry.name)
        result.fail(f"{type(e).__name__}: {e}")
        return result


def run(config: RunConfig) -> RunReport:
    """Execute the configured suites; exit code 0 when every expectation holds, 1 otherwise."""
    validate_config(config)
    entries = [get_entry(name) for name in config.entries]
    tasks = [(entry, suite) for entry in entries for suite in config.suites]
    started = time.perf_counter()

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = [
            pool.submit(_run_one, i + 1, len(tasks), entry, suite, config)
            for i, (entry, suite) in enumerate(tasks)
        ]
        results = [f.result() for f in futures]

    by_entry = []
    for entry in entries:
        suites = {}
        for r in results:
            if r.entry != entry.name:
                continue
            block = {"results": r.results, "findings": r.findings}
            if r.skipped:
                block["skipped"] = r.skipped
            if r.runtime is not None:
                block["runtime"] = r.runtime
            suites[r.suite] = block
        by_entry.append({"name": entry.name, "metadata": entry.summary(), "suites": suites})

    failures = [f for r in results for f in r.findings]
    exit_code = EXIT_FINDINGS if failures else EXIT_OK
    report = build_report(
        environment=config.echo(),
        entries=by_entry,
        failures=failures,
        exit_code=exit_code,
        wall_time=time.perf_counter() - started if config.report_timing else None,
    )
    logger.info(f"Run finished: {len(results)} suite runs, {len(failures)} findings, exit {exit_code}")
    return RunReport(report=report, results=results, failures=failures, exit_code=exit_code)


class RunRecorder:
    """Persist one RunLog row through a run's lifecycle."""

    def __init__(self, db: Session):
        self.db = db
        self.log: Optional[RunLog] = None

    def mark_interrupted(self) -> int:
        """Rows still 'running' belong to runs that never finished."""
        stale = self.db.query(RunLog).filter(RunLog.status == "running").all()
        for row in stale:
            row.status = "interrupted"
            row.completed_at = datetime.utcnow()
        self.db.commit()
        if stale:
            logger.warning(f"Marked {len(stale)} stale runs as interrupted")
        return len(stale)

    def start(self, config: RunConfig, config_path: Optional[str]) -> RunLog:
        self.log = RunLog(
            config_path=config_path,
            entries_json=list(config.entries),
            suites_json=list(config.suites),
            seed=config.seed,
            started_at=datetime.utcnow(),
            status="running",
        )
        self.db.add(self.log)
        self.db.commit()
        return self.log

    def finish(self, outcome: RunReport, report_path: str) -> None:
        self.log.status = "completed" if outcome.exit_code == EXIT_OK else "completed_with_findings"
        self.log.exit_code = outcome.exit_code
        self.log.failure_count = len(outcome.failures)
        self.log.report_path = report_path
        self.log.completed_at = datetime.utcnow()
        if outcome.failures:
            self.log.error_message = "; ".join(outcome.failures[:20])
        self.db.commit()

    def fail(self, error: Exception) -> None:
        self.log.status = "failed"
        self.log.error_message = str(error)
        self.log.exit_code = EXIT_USAGE if isinstance(error, USAGE_ERRORS) else None
        self.log.completed_at = datetime.utcnow()
        self.db.commit()


def execute(
    config: RunConfig,
    config_path: Optional[str] = None,
    record: bool = False,
    session_factory=None,
) -> RunReport:
    """Run, write the report to config.output, and optionally record the run."""
    if not record:
        outcome = run(config)
        write_report(outcome.report, config.output)
        return outcome

    if session_factory is None:
        init_db()
        session_factory = SessionLocal
    db = session_factory()
    try:
        recorder = RunRecorder(db)
        recorder.mark_interrupted()
        recorder.start(config, config_path)
        try:
            outcome = run(config)
            write_report(outcome.report, config.output)
        except Exception as e:
            logger.error(f"Run failed: {e}")
            recorder.fail(e)
            raise
        recorder.finish(outcome, config.output)
        return outcome
    finally:
        db.close()

from datetime import datetime

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool

from src.db.database import Base
from src.db.models import RunLog
from src.errors import HypothesisViolationError
from src.runner.config import RunConfig
from src.runner.run import RunRecorder, RunReport, execute


@pytest.fixture
def session_factory():
    engine = create_engine(
        "sqlite://", connect_args={"check_same_thread": False}, poolclass=StaticPool,
    )
    Base.metadata.create_all(bind=engine)
    yield sessionmaker(autocommit=False, autoflush=False, bind=engine)
    engine.dispose()


def _rows(session_factory):
    db = session_factory()
    try:
        return db.query(RunLog).order_by(RunLog.id).all()
    finally:
        db.close()


def test_recorded_run_completes(tmp_path, session_factory):
    out = tmp_path / "report.json"
    config = RunConfig(entries=("unit_s2",), suites=("identities",), point_count=3, output=str(out))
    outcome = execute(config, config_path="runs/s2.json", record=True, session_factory=session_factory)

    assert outcome.exit_code == 0
    assert out.exists()
    (row,) = _rows(session_factory)
    assert row.status == "completed"
    assert row.exit_code == 0
    assert row.failure_count == 0
    assert row.report_path == str(out)
    assert row.entries_json == ["unit_s2"]
    assert row.suites_json == ["identities"]
    assert row.completed_at is not None


def test_stale_running_rows_are_marked_interrupted(tmp_path, session_factory):
    db = session_factory()
    db.add(RunLog(config_path="old.json", started_at=datetime.utcnow(), status="running"))
    db.commit()
    db.close()

    config = RunConfig(entries=("flat_r2",), suites=("identities",), point_count=2, output=str(tmp_path / "r.json"))
    execute(config, record=True, session_factory=session_factory)

    stale, fresh = _rows(session_factory)
    assert stale.status == "interrupted"
    assert stale.completed_at is not None
    assert fresh.status == "completed"


def test_failed_run_is_recorded_and_reraised(tmp_path, session_factory):
    config = RunConfig(
        entries=("hopf_example",), suites=("norms",), r=1.0, resolution=4, output=str(tmp_path / "r.json"),
    )
    with pytest.raises(HypothesisViolationError):
        execute(config, record=True, session_factory=session_factory)

    (row,) = _rows(session_factory)
    assert row.status == "failed"
    assert row.exit_code == 2
    assert "r > dim(soul)/2" in row.error_message
    assert not (tmp_path / "r.json").exists()


def test_findings_are_recorded(session_factory):
    db = session_factory()
    recorder = RunRecorder(db)
    recorder.start(RunConfig(entries=("unit_s2",)), None)
    recorder.finish(
        RunReport(report={}, results=[], failures=["unit_s2/spectral: something"], exit_code=1),
        "data/report.json",
    )
    db.close()

    (row,) = _rows(session_factory)
    assert row.status == "completed_with_findings"
    assert row.failure_count == 1
    assert row.error_message == "unit_s2/spectral: something"


def test_unrecorded_runs_leave_the_log_alone(tmp_path, session_factory):
    config = RunConfig(entries=("flat_r2",), suites=("identities",), point_count=2, output=str(tmp_path / "r.json"))
    execute(config, record=False, session_factory=session_factory)
    assert _rows(session_factory) == []

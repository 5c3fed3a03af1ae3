from datetime import datetime
from sqlalchemy import Column, Integer, String, DateTime, Text, JSON
from src.db.database import Base


class RunLog(Base):
    """Track verification runs."""
    __tablename__ = "run_logs"

    id = Column(Integer, primary_key=True)
    config_path = Column(String(500))
    entries_json = Column(JSON)
    suites_json = Column(JSON)
    seed = Column(Integer)
    started_at = Column(DateTime, nullable=False, default=datetime.utcnow)
    completed_at = Column(DateTime)
    status = Column(String(30), default="running")
    exit_code = Column(Integer)
    failure_count = Column(Integer, default=0)
    report_path = Column(String(500))
    error_message = Column(Text)

"""
JSON run reports.
"""

import dataclasses
import json
import logging
from pathlib import Path
from typing import Any, Optional

import numpy as np

from src.errors import ReportIOError
from src.settings import REPORT_SCHEMA_VERSION

logger = logging.getLogger(__name__)


def to_jsonable(obj: Any) -> Any:
    """Convert numpy values and dataclasses into plain JSON types; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if np.isfinite(value) else str(value)
    return obj


def build_report(
    environment: dict,
    entries: list[dict],
    failures: list[str],
    exit_code: int,
    wall_time: Optional[float] = None,
) -> dict:
    env = dict(environment)
    if wall_time is not None:
        env["wall_time"] = wall_time
    return to_jsonable({
        "schema_version": REPORT_SCHEMA_VERSION,
        "tool": "soulcurv",
        "environment": env,
        "entries": entries,
        "failures": failures,
        "exit_code": exit_code,
    })


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False)


def write_report(report: dict, path: str) -> Path:
    out = Path(path)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(dumps(report) + "\n")
    except OSError as e:
        raise ReportIOError(f"Could not write report to {path}: {e}") from e
    logger.info(f"Report written to {out}")
    return out

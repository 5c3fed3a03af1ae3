"""
Run configuration: a flat JSON object whose keys are the RunConfig fields.
"""

import json
import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

from src.errors import ConfigError
from src.settings import (
    DEFAULT_FRAME_SAMPLES,
    DEFAULT_INEQ13_SAMPLES,
    DEFAULT_POINT_COUNT,
    DEFAULT_R_EXPONENT,
    DEFAULT_REPORT_PATH,
    DEFAULT_RESOLUTION,
    DEFAULT_SEED,
    DEFAULT_TOLERANCES,
    DEFAULT_WITNESS_SAMPLES,
    DEFAULT_WORKERS,
)
from src.zoo.catalog import catalog_names

logger = logging.getLogger(__name__)

SUITES = ("identities", "spectral", "soul", "norms", "euler")


@dataclass(frozen=True)
class RunConfig:
    entries: tuple[str, ...] = ()
    suites: tuple[str, ...] = SUITES
    seed: int = DEFAULT_SEED
    fd_step: Optional[float] = None
    tolerances: dict = field(default_factory=dict)
    r: float = DEFAULT_R_EXPONENT
    resolution: int = DEFAULT_RESOLUTION
    output: str = DEFAULT_REPORT_PATH
    workers: int = DEFAULT_WORKERS
    point_count: int = DEFAULT_POINT_COUNT
    ineq13_samples: int = DEFAULT_INEQ13_SAMPLES
    witness_samples: int = DEFAULT_WITNESS_SAMPLES
    frame_samples: int = DEFAULT_FRAME_SAMPLES
    report_timing: bool = False

    def effective_tolerances(self) -> dict:
        return {**DEFAULT_TOLERANCES, **self.tolerances}

    def echo(self) -> dict:
        """Fields that shape the report's numbers."""
        return {
            "entries": list(self.entries),
            "suites": list(self.suites),
            "seed": self.seed,
            "fd_step": self.fd_step,
            "r": self.r,
            "resolution": self.resolution,
            "point_count": self.point_count,
            "ineq13_samples": self.ineq13_samples,
            "witness_samples": self.witness_samples,
            "frame_samples": self.frame_samples,
            "tolerances": self.effective_tolerances(),
        }


_INT_FIELDS = {"seed", "resolution", "workers", "point_count", "ineq13_samples", "witness_samples", "frame_samples"}
_FLOAT_FIELDS = {"r"}


def _coerce(raw: dict) -> dict:
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"Unknown config fields: {', '.join(unknown)}")
    out = dict(raw)
    for name in ("entries", "suites"):
        if name in out:
            value = out[name]
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise ConfigError(f"'{name}' must be a list of names")
            out[name] = tuple(value)
    for name in _INT_FIELDS & out.keys():
        if isinstance(out[name], bool) or not isinstance(out[name], int):
            raise ConfigError(f"'{name}' must be an integer, got {out[name]!r}")
    for name in _FLOAT_FIELDS & out.keys():
        if isinstance(out[name], bool) or not isinstance(out[name], (int, float)):
            raise ConfigError(f"'{name}' must be a number, got {out[name]!r}")
        out[name] = float(out[name])
    if out.get("fd_step") is not None:
        if isinstance(out["fd_step"], bool) or not isinstance(out["fd_step"], (int, float)) or out["fd_step"] <= 0:
            raise ConfigError(f"'fd_step' must be a positive number, got {out['fd_step']!r}")
        out["fd_step"] = float(out["fd_step"])
    if "tolerances" in out and not isinstance(out["tolerances"], dict):
        raise ConfigError("'tolerances' must be an object")
    if "output" in out and not isinstance(out["output"], str):
        raise ConfigError("'output' must be a path string")
    if "report_timing" in out and not isinstance(out["report_timing"], bool):
        raise ConfigError("'report_timing' must be true or false")
    return out


def validate_config(config: RunConfig) -> RunConfig:
    names = catalog_names()
    missing = [e for e in config.entries if e not in names]
    if missing:
        raise ConfigError(f"Unknown zoo entries: {', '.join(missing)}; known: {', '.join(names)}")
    if not config.entries:
        raise ConfigError("Config names no entries")
    bad = [s for s in config.suites if s not in SUITES]
    if bad:
        raise ConfigError(f"Unknown suites: {', '.join(bad)}; valid: {', '.join(SUITES)}")
    unknown_tol = sorted(set(config.tolerances) - set(DEFAULT_TOLERANCES))
    if unknown_tol:
        raise ConfigError(f"Unknown tolerance keys: {', '.join(unknown_tol)}")
    for key, value in config.tolerances.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
            raise ConfigError(f"Tolerance '{key}' must be a nonnegative number, got {value!r}")
    if config.resolution < 1 or config.point_count < 1 or config.workers < 1:
        raise ConfigError("resolution, point_count and workers must be positive")
    return config


def config_from_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("Run config must be a JSON object")
    return validate_config(RunConfig(**_coerce(raw)))


def load_config(path: str, **overrides) -> RunConfig:
    """Read a config file; non-None keyword overrides (from the CLI) win over file values."""
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    config = config_from_dict(raw)
    updates = {k: v for k, v in overrides.items() if v is not None}
    if updates:
        config = validate_config(replace(config, **updates))
    logger.debug(f"Loaded config from {path}: {config.echo()}")
    return config

"""
L^r norms of scalar curvature and normal-bundle curvature over a soul.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import DomainError, HypothesisViolationError
from src.norms.quadrature import QuadratureRule, lr_norm, soul_quadrature
from src.settings import DEFAULT_R_EXPONENT, DEFAULT_RESOLUTION, NORM_CONSTANT_C
from src.soul.relations import TraceInequality, trace_inequality
from src.soul.souls import soul_curvature
from src.zoo.catalog import ZooEntry

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class NodeValues:
    """Per-node curvature quantities along a soul."""
    rule: QuadratureRule
    traces: list[TraceInequality]

    @property
    def scalar(self) -> np.ndarray:
        return np.array([t.s_M for t in self.traces])

    @property
    def rnabla(self) -> np.ndarray:
        return np.sqrt(np.array([t.lhs for t in self.traces]))


@dataclass(eq=False)
class NormReport:
    entry: str
    r: float
    s_norm: float
    rnabla_norm: float
    c_used: float
    slack: float
    pointwise_min_slack_31: float
    pointwise_min_slack_32: float
    resolution: int
    nodes: int
    excluded_margin: float
    runtime: Optional[float] = None


def soul_node_values(entry: ZooEntry, resolution: int, step: Optional[float] = None) -> NodeValues:
    if entry.soul is None:
        raise DomainError(f"Zoo entry '{entry.name}' declares no soul")
    rule = soul_quadrature(entry.soul, resolution)
    traces = []
    for node in rule.nodes:
        R, adapted = soul_curvature(entry.soul, node, step)
        traces.append(trace_inequality(R, adapted))
    return NodeValues(rule=rule, traces=traces)


def norm_inequality_report(
    entry: ZooEntry,
    r: float = DEFAULT_R_EXPONENT,
    resolution: int = DEFAULT_RESOLUTION,
    step: Optional[float] = None,
    report_timing: bool = False,
) -> NormReport:
    """
    ||s_M||_r and ||R^nabla||_r over the soul, with slack c^(1/2) ||s_M||_r - ||R^nabla||_r
    and the pointwise minima of both traced inequalities.
    """
    if entry.soul is None:
        raise DomainError(f"Zoo entry '{entry.name}' declares no soul")
    dim = entry.soul.param_dim
    if not r > 0.5 * dim:
        raise HypothesisViolationError(
            f"Norm bound requires some r > dim(soul)/2 = {0.5 * dim}; got r = {r}"
        )
    started = time.perf_counter()
    values = soul_node_values(entry, resolution, step)
    s_norm = lr_norm(values.scalar, values.rule, r)
    rnabla_norm = lr_norm(values.rnabla, values.rule, r)
    report = NormReport(
        entry=entry.name,
        r=float(r),
        s_norm=s_norm,
        rnabla_norm=rnabla_norm,
        c_used=NORM_CONSTANT_C,
        slack=float(np.sqrt(NORM_CONSTANT_C)) * s_norm - rnabla_norm,
        pointwise_min_slack_31=min(t.slack_31 for t in values.traces),
        pointwise_min_slack_32=min(t.slack_32 for t in values.traces),
        resolution=resolution,
        nodes=values.rule.size,
        excluded_margin=values.rule.excluded_margin,
        runtime=time.perf_counter() - started if report_timing else None,
    )
    logger.info(
        f"Norms on '{entry.name}' (r={r}, {report.nodes} nodes): "
        f"||s||={s_norm:.6g}, ||R^nabla||={rnabla_norm:.6g}, slack {report.slack:.3g}"
    )
    return report

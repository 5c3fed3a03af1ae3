"""
Euler number of the normal bundle of a surface soul.

For a rank-2 normal bundle over a closed oriented surface,

    e = (1 / 2 pi) * integral of <R(x1, x2)u2, u1> dv

in an adapted frame (x1, x2, u1, u2) with consistent orientation.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import DomainError, EulerDimensionError
from src.geometry.curvature import reframe
from src.norms.quadrature import QuadratureRule, soul_quadrature
from src.settings import DEFAULT_RESOLUTION
from src.soul.souls import soul_curvature
from src.zoo.catalog import ZooEntry

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EulerReport:
    value: float
    reversed_value: float
    resolution: int
    nodes: int

    @property
    def orientation_defect(self) -> float:
        """|value + reversed_value|, zero up to rounding."""
        return abs(self.value + self.reversed_value)


def euler_density(R: np.ndarray) -> float:
    """
    <R(x1, x2)u2, u1> from adapted-frame components, antisymmetrized in the
    normal slots so swapping u1 and u2 negates it.
    """
    return 0.5 * (float(R[0, 1, 3, 2]) - float(R[0, 1, 2, 3]))


def _adapted_tensors(
    entry: ZooEntry, resolution: int, step: Optional[float],
) -> tuple[QuadratureRule, list[np.ndarray], list[np.ndarray]]:
    """Curvature at every node in the adapted frame and in its normal-reversed twin."""
    soul = entry.soul
    if soul is None:
        raise DomainError(f"Zoo entry '{entry.name}' declares no soul")
    if soul.param_dim != 2 or soul.codim != 2:
        raise EulerDimensionError(
            f"Euler number needs a surface soul with rank-2 normal bundle; '{entry.name}' has "
            f"dim {soul.param_dim}, normal rank {soul.codim}"
        )
    rule = soul_quadrature(soul, resolution)
    forward, backward = [], []
    for node in rule.nodes:
        R, adapted = soul_curvature(soul, node, step)
        forward.append(R.R)
        backward.append(reframe(R, adapted.with_reversed_normals().frame).R)
    return rule, forward, backward


def _integrate(rule: QuadratureRule, tensors: list[np.ndarray]) -> float:
    density = np.array([euler_density(R) for R in tensors])
    return rule.integrate(density) / (2.0 * np.pi)


def euler_number(
    entry: ZooEntry,
    resolution: int = DEFAULT_RESOLUTION,
    reverse_normal_orientation: bool = False,
    step: Optional[float] = None,
) -> float:
    rule, forward, backward = _adapted_tensors(entry, resolution, step)
    value = _integrate(rule, backward if reverse_normal_orientation else forward)
    logger.info(f"Euler number of '{entry.name}' at resolution {resolution}: {value:.8g}")
    return value


def euler_report(entry: ZooEntry, resolution: int = DEFAULT_RESOLUTION, step: Optional[float] = None) -> EulerReport:
    """Both orientations from one pass over the quadrature nodes."""
    rule, forward, backward = _adapted_tensors(entry, resolution, step)
    report = EulerReport(
        value=_integrate(rule, forward),
        reversed_value=_integrate(rule, backward),
        resolution=resolution,
        nodes=rule.size,
    )
    logger.info(f"Euler number of '{entry.name}' at resolution {resolution}: {report.value:.8g}")
    return report


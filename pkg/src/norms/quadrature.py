"""
Gauss-Legendre quadrature over soul parameter boxes with induced volume weights.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.special import roots_legendre

from src.errors import QuadratureError
from src.soul.souls import SoulSpec

logger = logging.getLogger(__name__)

FieldFn = Callable[[np.ndarray], float]


@dataclass(eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    resolution: int
    excluded_margin: float = 0.0

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    def integrate(self, values: np.ndarray) -> float:
        """Weighted sum of node values."""
        return float(np.sum(self.weights * np.asarray(values, dtype=float)))

    @property
    def volume(self) -> float:
        return float(np.sum(self.weights))


def tensor_gauss_legendre(box_lower: np.ndarray, box_upper: np.ndarray, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Product rule with `resolution` nodes per axis; nodes (Q, d) and box weights (Q,)."""
    x, w = roots_legendre(resolution)
    axes_nodes, axes_weights = [], []
    for lo, hi in zip(box_lower, box_upper):
        half = 0.5 * (hi - lo)
        axes_nodes.append(lo + half * (x + 1.0))
        axes_weights.append(half * w)
    grids = np.meshgrid(*axes_nodes, indexing="ij")
    nodes = np.stack([g.reshape(-1) for g in grids], axis=1)
    weights = np.ones(nodes.shape[0])
    for g in np.meshgrid(*axes_weights, indexing="ij"):
        weights = weights * g.reshape(-1)
    return nodes, weights


def soul_quadrature(soul: SoulSpec, resolution: int) -> QuadratureRule:
    """Nodes on the soul's parameter box, weighted by sqrt(det(J^T g J))."""
    if resolution < 1:
        raise QuadratureError(f"Quadrature resolution must be positive, got {resolution}")
    nodes, box_weights = tensor_gauss_legendre(soul.param_box.lower, soul.param_box.upper, resolution)

    points = np.asarray(soul.embedding(nodes), dtype=float)
    J = np.asarray(soul.tangent_basis(nodes), dtype=float)
    g = soul.ambient.at(points)
    induced = np.einsum("qia,qij,qjb->qab", J, g, J)
    det = np.linalg.det(induced)
    scale = np.maximum(1.0, np.max(np.abs(induced), axis=(1, 2))) ** soul.param_dim
    bad = ~(det > 1e-14 * scale)
    if np.any(bad):
        raise QuadratureError(
            f"Induced metric of '{soul.name}' is degenerate at parameter {nodes[np.argmax(bad)]}"
        )
    weights = box_weights * np.sqrt(det)
    logger.debug(f"Quadrature on '{soul.name}': {nodes.shape[0]} nodes, volume {np.sum(weights):.8g}")
    return QuadratureRule(nodes=nodes, weights=weights, resolution=resolution, excluded_margin=soul.excluded_margin)


def lr_norm(field: Union[FieldFn, np.ndarray], rule: QuadratureRule, r: float) -> float:
    """(sum_q w_q |f(q)|^r)^(1/r); `field` is a callable on parameters or the node values."""
    if not r >= 1:
        raise QuadratureError(f"L^r norm needs r >= 1, got {r}")
    if callable(field):
        values = np.array([field(node) for node in rule.nodes], dtype=float)
    else:
        values = np.asarray(field, dtype=float).reshape(-1)
    if values.shape[0] != rule.size:
        raise QuadratureError(f"{values.shape[0]} field values for {rule.size} quadrature nodes")
    if not np.all(np.isfinite(values)):
        raise QuadratureError("Non-finite field values at quadrature nodes")
    return rule.integrate(np.abs(values) ** r) ** (1.0 / r)

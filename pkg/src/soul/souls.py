"""
Declared souls and tangent-first adapted frames along them.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from src.errors import DomainError, FrameCompletionError
from src.geometry.curvature import RiemannAtPoint, reframe, riemann
from src.geometry.frames import OrthonormalFrame, complete_frame
from src.geometry.metric import Box, MetricField, Point
from src.settings import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

ParamFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SoulSpec:
    """
    A soul embedded in the ambient chart.

    `embedding` maps parameters of shape (..., d) to chart points (..., n);
    `tangent_basis` maps them to coordinate velocities of shape (..., n, d).
    `excluded_margin` is how far the parameter box stays off coordinate poles.
    """
    name: str
    param_dim: int
    param_box: Box
    embedding: ParamFn
    tangent_basis: ParamFn
    ambient: MetricField
    excluded_margin: float = 0.0

    @property
    def codim(self) -> int:
        return self.ambient.dim - self.param_dim

    def param(self, coords) -> Point:
        return Point(coords=np.asarray(coords, dtype=float), chart_id=f"{self.name}-params")


@dataclass(eq=False)
class AdaptedFrame:
    """Orthonormal frame whose first `tangent_dim` vectors span the soul's tangent space."""
    frame: OrthonormalFrame
    point: Point
    tangent_dim: int
    projection_residual: float = 0.0

    @property
    def dim(self) -> int:
        return self.frame.size

    @property
    def normal_dim(self) -> int:
        return self.dim - self.tangent_dim

    @property
    def tangent(self) -> np.ndarray:
        return self.frame.columns[:, :self.tangent_dim]

    @property
    def normal(self) -> np.ndarray:
        return self.frame.columns[:, self.tangent_dim:]

    @classmethod
    def standard(cls, n: int, d: int, point: Optional[Point] = None) -> "AdaptedFrame":
        """Identity frame split after the first d vectors, for algebraic tensors."""
        return cls(
            frame=OrthonormalFrame(columns=np.eye(n), gram_check=0.0),
            point=point if point is not None else Point(np.zeros(n), chart_id="algebraic"),
            tangent_dim=d,
        )

    def with_reversed_normals(self) -> "AdaptedFrame":
        """Same frame with the normal vectors in reverse order (opposite normal orientation)."""
        columns = np.concatenate([self.tangent, self.normal[:, ::-1]], axis=1)
        return AdaptedFrame(
            frame=OrthonormalFrame(columns=columns, gram_check=self.frame.gram_check),
            point=self.point,
            tangent_dim=self.tangent_dim,
            projection_residual=self.projection_residual,
        )


def embed(soul: SoulSpec, param: Union[Point, np.ndarray]) -> Point:
    coords = param.coords if isinstance(param, Point) else np.asarray(param, dtype=float)
    if coords.shape != (soul.param_dim,):
        raise DomainError(f"Soul '{soul.name}' takes {soul.param_dim} parameters, got shape {coords.shape}")
    if not soul.param_box.contains(coords):
        raise DomainError(
            f"Parameter {coords} lies outside the box of soul '{soul.name}' {soul.param_box.as_list()}"
        )
    point = soul.ambient.point(soul.embedding(coords))
    if not soul.ambient.valid_domain.contains(point.coords):
        raise DomainError(f"Soul '{soul.name}' embeds {coords} outside the valid domain at {point.coords}")
    return point


def adapted_frame(soul: SoulSpec, param: Union[Point, np.ndarray]) -> AdaptedFrame:
    """
    Gram-Schmidt of the embedded tangent basis, completed by coordinate
    directions to a full frame; tangent vectors first.
    """
    point = embed(soul, param)
    coords = param.coords if isinstance(param, Point) else np.asarray(param, dtype=float)
    g = soul.ambient.at(point.coords)
    tangent = np.asarray(soul.tangent_basis(coords), dtype=float)
    if tangent.shape != (soul.ambient.dim, soul.param_dim):
        raise DomainError(f"Tangent basis of '{soul.name}' has shape {tangent.shape}")

    frame = complete_frame(g, [tangent[:, i] for i in range(soul.param_dim)])

    # Tangent basis must be reproduced by the first d frame vectors.
    head = frame.columns[:, :soul.param_dim]
    projected = head @ (head.T @ g @ tangent)
    scale = max(1.0, float(np.max(np.abs(tangent))))
    residual = float(np.max(np.abs(projected - tangent))) / scale
    if residual > DEFAULT_TOLERANCES["frame_projection"]:
        raise FrameCompletionError(f"Adapted frame of '{soul.name}' misses the tangent space (residual {residual:.3g})")
    return AdaptedFrame(frame=frame, point=point, tangent_dim=soul.param_dim, projection_residual=residual)


def soul_curvature(
    soul: SoulSpec, param: Union[Point, np.ndarray], step: Optional[float] = None,
) -> tuple[RiemannAtPoint, AdaptedFrame]:
    """Curvature at an embedded soul point, expressed in the adapted frame."""
    adapted = adapted_frame(soul, param)
    R = riemann(soul.ambient, adapted.point, step)
    return reframe(R, adapted.frame), adapted

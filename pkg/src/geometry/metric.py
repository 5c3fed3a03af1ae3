"""
Metric charts and their second-order jets.

A MetricField wraps a vectorized callable: it takes an array of chart points
with shape (..., n) and returns metric matrices with shape (..., n, n). Every
stencil of a jet is evaluated in one call.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from src.errors import DomainError, NonFiniteMetricError
from src.settings import FD_RELATIVE_STEP

logger = logging.getLogger(__name__)

MetricFn = Callable[[np.ndarray], np.ndarray]

FINITE_DIFFERENCE = "finite-difference"
ANALYTIC = "analytic"

# Fourth-order central weights for the first derivative, offsets -2..2 (times 1/h).
_D1_OFFSETS = (-2, -1, 1, 2)
_D1_WEIGHTS = (1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0)
# Fourth-order central weights for the second derivative (times 1/h^2); centre weight separate.
_D2_WEIGHTS = (-1.0 / 12.0, 16.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0)
_D2_CENTRE = -30.0 / 12.0


@dataclass(eq=False)
class Point:
    """A point of a coordinate chart."""
    coords: np.ndarray
    chart_id: str = "chart"

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=float).reshape(-1)
        if not np.all(np.isfinite(self.coords)):
            raise DomainError(f"Point on chart '{self.chart_id}' has non-finite coordinates: {self.coords}")

    @property
    def dim(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True, eq=False)
class Box:
    """Closed coordinate box [lower, upper]."""
    lower: np.ndarray
    upper: np.ndarray

    @classmethod
    def of(cls, bounds: Sequence[tuple[float, float]]) -> "Box":
        arr = np.asarray(bounds, dtype=float)
        return cls(lower=arr[:, 0].copy(), upper=arr[:, 1].copy())

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, coords: np.ndarray, margin: float = 0.0) -> bool:
        coords = np.asarray(coords, dtype=float)
        return bool(np.all(coords >= self.lower + margin) and np.all(coords <= self.upper - margin))

    def margin_of(self, coords: np.ndarray) -> float:
        coords = np.asarray(coords, dtype=float)
        return float(np.min(np.minimum(coords - self.lower, self.upper - coords)))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return self.lower + rng.random((count, self.dim)) * self.widths

    def as_list(self) -> list[list[float]]:
        return [[float(lo), float(hi)] for lo, hi in zip(self.lower, self.upper)]


@dataclass(frozen=True, eq=False)
class MetricField:
    """
    A Riemannian metric on a coordinate box.

    `evaluate` is vectorized over leading axes. When `derivative_mode` is
    analytic, `analytic_dg` and `analytic_d2g` return dg[k, i, j] = d_k g_ij
    and d2g[l, k, i, j] = d_l d_k g_ij at a single point.
    """
    name: str
    dim: int
    evaluate: MetricFn
    valid_domain: Box
    derivative_mode: str = FINITE_DIFFERENCE
    analytic_dg: Optional[Callable[[np.ndarray], np.ndarray]] = None
    analytic_d2g: Optional[Callable[[np.ndarray], np.ndarray]] = None
    curvature_flags: tuple[str, ...] = ()
    fd_step: Optional[float] = None
    chart_id: str = field(default="")

    @property
    def chart(self) -> str:
        return self.chart_id or self.name

    def default_step(self) -> float:
        if self.fd_step is not None:
            return self.fd_step
        return FD_RELATIVE_STEP * float(np.min(self.valid_domain.widths))

    def point(self, coords) -> Point:
        return Point(coords=np.asarray(coords, dtype=float), chart_id=self.chart)

    def at(self, coords) -> np.ndarray:
        """Evaluate at one or many points, checking finiteness."""
        coords = np.asarray(coords, dtype=float)
        g = np.asarray(self.evaluate(coords), dtype=float)
        if g.shape != coords.shape[:-1] + (self.dim, self.dim):
            raise NonFiniteMetricError(
                f"Metric '{self.name}' returned shape {g.shape} for points of shape {coords.shape}"
            )
        if not np.all(np.isfinite(g)):
            raise NonFiniteMetricError(f"Metric '{self.name}' is not finite near {coords.reshape(-1, self.dim)[0]}")
        return g


@dataclass(eq=False)
class MetricJet:
    """Metric with first and second coordinate derivatives at a point."""
    g: np.ndarray
    dg: np.ndarray
    d2g: np.ndarray
    point: Point
    step: float

    def symmetry_residual(self) -> float:
        """Largest relative violation of the jet's index symmetries."""
        scale = max(1.0, float(np.max(np.abs(self.g))))
        residuals = (
            np.max(np.abs(self.g - self.g.T)),
            np.max(np.abs(self.dg - np.swapaxes(self.dg, 1, 2))),
            np.max(np.abs(self.d2g - np.swapaxes(self.d2g, 2, 3))),
            np.max(np.abs(self.d2g - np.swapaxes(self.d2g, 0, 1))),
        )
        return float(max(residuals)) / scale


def _stencil(centre: np.ndarray, h: float) -> tuple[np.ndarray, list, list]:
    """
    Build all stencil points for a fourth-order jet.

    Returns the stacked points, the axis offsets index and the mixed offsets
    index; every point differs from `centre` by at most 2h per coordinate.
    """
    n = centre.shape[0]
    points = [centre]
    axis_index = []
    for k in range(n):
        row = []
        for a in _D1_OFFSETS:
            p = centre.copy()
            p[k] += a * h
            row.append(len(points))
            points.append(p)
        axis_index.append(row)
    mixed_index = []
    for k in range(n):
        for l in range(k + 1, n):
            block = []
            for a in _D1_OFFSETS:
                for b in _D1_OFFSETS:
                    p = centre.copy()
                    p[k] += a * h
                    p[l] += b * h
                    block.append(len(points))
                    points.append(p)
            mixed_index.append((k, l, block))
    return np.stack(points), axis_index, mixed_index


def metric_jet(metric: MetricField, p: Point, step: Optional[float] = None) -> MetricJet:
    """
    Metric, first and second derivatives at p.

    Finite differences use fourth-order central stencils; mixed partials use
    the nested (tensor-product) first-derivative stencil, so the result is
    exactly symmetric in the two derivative indices.
    """
    h = metric.default_step() if step is None else float(step)
    if h <= 0:
        raise DomainError(f"Finite-difference step must be positive, got {h}")
    if p.dim != metric.dim:
        raise DomainError(f"Point of dimension {p.dim} on metric '{metric.name}' of dimension {metric.dim}")

    margin = metric.valid_domain.margin_of(p.coords)
    if margin < 2.0 * h:
        raise DomainError(
            f"Point {p.coords} on '{metric.name}' has domain margin {margin:.3g} < 2*step = {2.0 * h:.3g}"
        )

    if metric.derivative_mode == ANALYTIC and metric.analytic_dg is not None and metric.analytic_d2g is not None:
        g = metric.at(p.coords)
        dg = np.asarray(metric.analytic_dg(p.coords), dtype=float)
        d2g = np.asarray(metric.analytic_d2g(p.coords), dtype=float)
        if not (np.all(np.isfinite(dg)) and np.all(np.isfinite(d2g))):
            raise NonFiniteMetricError(f"Analytic derivatives of '{metric.name}' are not finite at {p.coords}")
        return MetricJet(g=g, dg=dg, d2g=d2g, point=p, step=h)

    points, axis_index, mixed_index = _stencil(p.coords, h)
    values = metric.at(points)
    n = metric.dim
    g = values[0]

    dg = np.empty((n, n, n))
    d2g = np.empty((n, n, n, n))
    for k in range(n):
        samples = values[axis_index[k]]
        dg[k] = np.tensordot(_D1_WEIGHTS, samples, axes=1) / h
        d2g[k, k] = (np.tensordot(_D2_WEIGHTS, samples, axes=1) + _D2_CENTRE * g) / h**2

    outer = np.outer(_D1_WEIGHTS, _D1_WEIGHTS).reshape(-1)
    for k, l, block in mixed_index:
        mixed = np.tensordot(outer, values[block], axes=1) / h**2
        d2g[k, l] = mixed
        d2g[l, k] = mixed

    logger.debug(f"Jet of '{metric.name}' at {p.coords} with step {h:.3g} from {len(points)} evaluations")
    return MetricJet(g=g, dg=dg, d2g=d2g, point=p, step=h)

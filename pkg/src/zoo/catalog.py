"""
Catalog of metrics with known curvature, each with the expectations the
verification suites check against.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from src.errors import ConfigError
from src.geometry.curvature import assert_constant_curvature, assert_sign_convention, riemann
from src.geometry.metric import ANALYTIC, Box, MetricField
from src.sampling import generator
from src.settings import DEFAULT_POINT_COUNT, DEFAULT_TOLERANCES
from src.soul.souls import SoulSpec
from src.zoo.profiles import CapProfile, cap_profile
from src.zoo.quotient import QuotientMetricSpec, quotient_metric

logger = logging.getLogger(__name__)

NONNEGATIVE_SECTIONAL = "nonnegative sectional curvature"
FLAT = "flat"
CONSTANT_CURVATURE = "constant curvature"

HALF_PI = 0.5 * np.pi
# Charts stop this far from coordinate poles; sampling stays further away.
CHART_POLE_MARGIN = 1e-3
SAMPLING_POLE_MARGIN = 0.1
QUADRATURE_POLE_MARGIN = 0.01
ANGLE_RANGE = (-np.pi - 0.5, np.pi + 0.5)
FIBER_RANGE = (-3.0, 3.0)


@dataclass(frozen=True)
class ExpectedProperties:
    constant_curvature: Optional[float] = None
    expected_split: Optional[bool] = None
    euler_abs: Optional[float] = None
    soul_tangent_K: Optional[float] = None
    soul_area: Optional[float] = None
    far_field_radius: Optional[float] = None
    curvature_flags: tuple[str, ...] = ()

    @property
    def flat(self) -> bool:
        return FLAT in self.curvature_flags

    @property
    def nonnegative(self) -> bool:
        return NONNEGATIVE_SECTIONAL in self.curvature_flags or self.flat


@dataclass(frozen=True, eq=False)
class SamplingHints:
    """
    Where to evaluate an entry pointwise: explicit points first, then
    seeded draws from `box` that `reject` does not filter out.
    """
    box: Box
    points: tuple[tuple[float, ...], ...] = ()
    soul_params: tuple[tuple[float, ...], ...] = ()
    step: Optional[float] = None
    reject: Optional[Callable[[np.ndarray], np.ndarray]] = None


@dataclass(frozen=True, eq=False)
class ZooEntry:
    name: str
    metric: MetricField
    expected: ExpectedProperties
    hints: SamplingHints
    soul: Optional[SoulSpec] = None
    description: str = ""
    profile: Optional[CapProfile] = None
    fiber_axes: Optional[tuple[int, int]] = None

    def fiber_radius(self, points: np.ndarray) -> np.ndarray:
        """Radius in the capped fiber plane; entries without one report zeros."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.fiber_axes is None:
            return np.zeros(points.shape[0])
        a, b = self.fiber_axes
        return np.hypot(points[:, a], points[:, b])

    def sample_points(self, count: int = DEFAULT_POINT_COUNT, seed: int = 0) -> np.ndarray:
        explicit = np.asarray(self.hints.points, dtype=float).reshape(-1, self.metric.dim)[:count]
        needed = count - explicit.shape[0]
        drawn = np.empty((0, self.metric.dim))
        rng = generator(seed, stream=1)
        while drawn.shape[0] < needed:
            batch = self.hints.box.sample(rng, 2 * needed)
            if self.hints.reject is not None:
                batch = batch[~self.hints.reject(batch)]
            drawn = np.concatenate([drawn, batch])
        return np.concatenate([explicit, drawn[:needed]])

    def soul_params(self) -> np.ndarray:
        if self.soul is None:
            return np.empty((0, 0))
        return np.asarray(self.hints.soul_params, dtype=float).reshape(-1, self.soul.param_dim)

    def summary(self) -> dict:
        e = self.expected
        return {
            "name": self.name,
            "dim": self.metric.dim,
            "description": self.description,
            "soul": None if self.soul is None else {"name": self.soul.name, "dim": self.soul.param_dim},
            "curvature_flags": list(e.curvature_flags),
            "constant_curvature": e.constant_curvature,
            "expected_split": e.expected_split,
            "euler_abs": e.euler_abs,
        }


def _constant(dim: int, diag: Callable[[np.ndarray], list]) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized diagonal metric from a callable returning the diagonal entries."""
    def evaluate(x):
        x = np.asarray(x, dtype=float)
        g = np.zeros(x.shape[:-1] + (dim, dim))
        for i, entry in enumerate(diag(x)):
            g[..., i, i] = entry
        return g
    return evaluate


def flat_space(n: int) -> ZooEntry:
    box = Box.of([(-1.0, 1.0)] * n)
    metric = MetricField(
        name=f"flat_r{n}", dim=n,
        evaluate=_constant(n, lambda x: [np.ones(x.shape[:-1])] * n),
        valid_domain=box,
        derivative_mode=ANALYTIC,
        analytic_dg=lambda x: np.zeros((n, n, n)),
        analytic_d2g=lambda x: np.zeros((n, n, n, n)),
        curvature_flags=(FLAT,),
    )
    return ZooEntry(
        name=metric.name, metric=metric,
        expected=ExpectedProperties(constant_curvature=0.0, curvature_flags=(FLAT, CONSTANT_CURVATURE)),
        hints=SamplingHints(box=Box.of([(-0.9, 0.9)] * n), points=(tuple([0.0] * n),)),
        description=f"Euclidean R^{n}",
    )


def polar_plane() -> ZooEntry:
    metric = MetricField(
        name="polar_plane", dim=2,
        evaluate=_constant(2, lambda x: [np.ones(x.shape[:-1]), x[..., 0] ** 2]),
        valid_domain=Box.of([(0.5, 3.0), (-np.pi, np.pi)]),
        curvature_flags=(FLAT,),
    )
    return ZooEntry(
        name=metric.name, metric=metric,
        expected=ExpectedProperties(constant_curvature=0.0, curvature_flags=(FLAT, CONSTANT_CURVATURE)),
        hints=SamplingHints(box=Box.of([(0.6, 2.9), (-3.0, 3.0)]), points=((2.0, 0.0), (1.0, 1.0))),
        description="Euclidean plane in polar coordinates (r, theta), phi(r) = r",
    )


def _sphere2_metric() -> MetricField:
    def dg(x):
        out = np.zeros((2, 2, 2))
        out[0, 1, 1] = np.sin(2.0 * x[0])
        return out

    def d2g(x):
        out = np.zeros((2, 2, 2, 2))
        out[0, 0, 1, 1] = 2.0 * np.cos(2.0 * x[0])
        return out

    return MetricField(
        name="unit_s2", dim=2,
        evaluate=_constant(2, lambda x: [np.ones(x.shape[:-1]), np.sin(x[..., 0]) ** 2]),
        valid_domain=Box.of([(CHART_POLE_MARGIN, np.pi - CHART_POLE_MARGIN), ANGLE_RANGE]),
        derivative_mode=ANALYTIC, analytic_dg=dg, analytic_d2g=d2g,
        curvature_flags=(NONNEGATIVE_SECTIONAL, CONSTANT_CURVATURE),
    )


def unit_s2() -> ZooEntry:
    metric = _sphere2_metric()
    return ZooEntry(
        name=metric.name, metric=metric,
        expected=ExpectedProperties(
            constant_curvature=1.0, curvature_flags=metric.curvature_flags, soul_area=4.0 * np.pi,
        ),
        hints=SamplingHints(
            box=Box.of([(SAMPLING_POLE_MARGIN, np.pi - SAMPLING_POLE_MARGIN), (-np.pi, np.pi)]),
            points=((np.pi / 4, 0.0), (1.1, 0.5)),
        ),
        description="Round unit sphere (theta, phi)",
    )


def _hopf_coordinates_diag(x):
    eta = x[..., 0]
    return [np.ones(eta.shape), np.cos(eta) ** 2, np.sin(eta) ** 2]


def _sphere3_metric() -> MetricField:
    def dg(x):
        out = np.zeros((3, 3, 3))
        out[0, 1, 1] = -np.sin(2.0 * x[0])
        out[0, 2, 2] = np.sin(2.0 * x[0])
        return out

    def d2g(x):
        out = np.zeros((3, 3, 3, 3))
        out[0, 0, 1, 1] = -2.0 * np.cos(2.0 * x[0])
        out[0, 0, 2, 2] = 2.0 * np.cos(2.0 * x[0])
        return out

    return MetricField(
        name="unit_s3", dim=3,
        evaluate=_constant(3, _hopf_coordinates_diag),
        valid_domain=Box.of([(CHART_POLE_MARGIN, HALF_PI - CHART_POLE_MARGIN), ANGLE_RANGE, ANGLE_RANGE]),
        derivative_mode=ANALYTIC, analytic_dg=dg, analytic_d2g=d2g,
        curvature_flags=(NONNEGATIVE_SECTIONAL, CONSTANT_CURVATURE),
    )


def unit_s3() -> ZooEntry:
    metric = _sphere3_metric()
    return ZooEntry(
        name=metric.name, metric=metric,
        expected=ExpectedProperties(constant_curvature=1.0, curvature_flags=metric.curvature_flags),
        hints=SamplingHints(
            box=Box.of([(SAMPLING_POLE_MARGIN, HALF_PI - SAMPLING_POLE_MARGIN), (-np.pi, np.pi), (-np.pi, np.pi)]),
            points=((np.pi / 4, 0.0, 0.0), (0.5, 1.0, -1.0)),
        ),
        description="Round unit 3-sphere in Hopf coordinates (eta, xi1, xi2)",
    )


def _avoid_joins(profile: CapProfile, radius: Callable[[np.ndarray], np.ndarray], width: float = 0.02):
    """Reject points whose fiber radius sits on a profile join."""
    def reject(points):
        r = radius(points)
        return (np.abs(r - profile.inner_radius) < width) | (np.abs(r - profile.r0) < width)
    return reject


def _cartesian_fiber(profile: CapProfile, a: np.ndarray, b: np.ndarray) -> tuple:
    w = profile.fiber_weight(np.sqrt(a * a + b * b))
    return 1.0 + w * b * b, -w * a * b, 1.0 + w * a * a


def cap_disc(r0: float = 1.0) -> ZooEntry:
    profile = cap_profile(r0)

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        gaa, gab, gbb = _cartesian_fiber(profile, x[..., 0], x[..., 1])
        return np.stack([np.stack([gaa, gab], -1), np.stack([gab, gbb], -1)], -2)

    metric = MetricField(
        name="cap_disc", dim=2, evaluate=evaluate,
        valid_domain=Box.of([FIBER_RANGE, FIBER_RANGE]),
        curvature_flags=(NONNEGATIVE_SECTIONAL,),
    )
    return ZooEntry(
        name=metric.name, metric=metric,
        expected=ExpectedProperties(curvature_flags=metric.curvature_flags),
        hints=SamplingHints(
            box=Box.of([(-2.5, 2.5), (-2.5, 2.5)]),
            points=((0.0, 0.0), (0.7, 0.0), (0.5, 0.6), (1.5, -0.5)),
            reject=_avoid_joins(profile, lambda p: np.hypot(p[:, 0], p[:, 1])),
        ),
        description=f"Capped plane dr^2 + phi(r)^2 dtheta^2 in Cartesian form, r0 = {r0}",
        profile=profile,
        fiber_axes=(0, 1),
    )


def hopf_quotient_spec() -> QuotientMetricSpec:
    """Unit S^3 modulo the Hopf circle, section xi1 = 0; quotient chart (eta, beta)."""
    total = _sphere3_metric()
    D = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    return QuotientMetricSpec(
        name="hopf_base",
        total=total,
        killing=lambda x: np.broadcast_to(np.array([0.0, 1.0, 1.0]), np.shape(x)).copy(),
        section=lambda q: np.stack([q[..., 0], np.zeros(q.shape[:-1]), q[..., 1]], axis=-1),
        section_differential=lambda q: np.broadcast_to(D, q.shape[:-1] + D.shape),
        quotient_dim=2,
        valid_domain=Box.of([(CHART_POLE_MARGIN, HALF_PI - CHART_POLE_MARGIN), (-np.pi - 0.5, np.pi + 0.5)]),
        curvature_flags=(NONNEGATIVE_SECTIONAL, CONSTANT_CURVATURE),
    )


def hopf_base() -> ZooEntry:
    """S^3 / S^1 through the generic quotient construction; the round sphere of radius 1/2."""
    spec = hopf_quotient_spec()
    metric = quotient_metric(spec)
    return ZooEntry(
        name=metric.name, metric=metric,
        expected=ExpectedProperties(
            constant_curvature=4.0, curvature_flags=spec.curvature_flags, soul_area=np.pi,
        ),
        hints=SamplingHints(
            box=Box.of([(SAMPLING_POLE_MARGIN, HALF_PI - SAMPLING_POLE_MARGIN), (-np.pi, np.pi)]),
            points=((np.pi / 4, 0.0), (0.5, 1.0)),
        ),
        description="Base of the Hopf fibration: dEta^2 + sin^2(eta)cos^2(eta) dBeta^2",
    )


def _surface_soul(name: str, ambient: MetricField, box: Box, margin: float) -> SoulSpec:
    """Soul {last n-2 coordinates = 0}, parametrized by the first two."""
    n = ambient.dim
    tangent = np.zeros((n, 2))
    tangent[0, 0] = tangent[1, 1] = 1.0

    def embedding(p):
        p = np.asarray(p, dtype=float)
        return np.concatenate([p, np.zeros(p.shape[:-1] + (n - 2,))], axis=-1)

    return SoulSpec(
        name=name, param_dim=2, param_box=box,
        embedding=embedding,
        tangent_basis=lambda p: np.broadcast_to(tangent, np.shape(p)[:-1] + tangent.shape).copy(),
        ambient=ambient,
        excluded_margin=margin,
    )


def product_s2_r2() -> ZooEntry:
    metric = MetricField(
        name="product_s2_r2", dim=4,
        evaluate=_constant(4, lambda x: [
            np.ones(x.shape[:-1]), np.sin(x[..., 0]) ** 2, np.ones(x.shape[:-1]), np.ones(x.shape[:-1]),
        ]),
        valid_domain=Box.of([(CHART_POLE_MARGIN, np.pi - CHART_POLE_MARGIN), ANGLE_RANGE, FIBER_RANGE, FIBER_RANGE]),
        curvature_flags=(NONNEGATIVE_SECTIONAL,),
    )
    soul = _surface_soul(
        "s2_x_origin", metric,
        Box.of([(QUADRATURE_POLE_MARGIN, np.pi - QUADRATURE_POLE_MARGIN), (-np.pi, np.pi)]),
        QUADRATURE_POLE_MARGIN,
    )
    return ZooEntry(
        name=metric.name, metric=metric, soul=soul,
        expected=ExpectedProperties(
            expected_split=True, euler_abs=0.0, soul_tangent_K=1.0, soul_area=4.0 * np.pi,
            curvature_flags=metric.curvature_flags,
        ),
        hints=SamplingHints(
            box=Box.of([(SAMPLING_POLE_MARGIN, np.pi - SAMPLING_POLE_MARGIN), (-np.pi, np.pi), (-2.5, 2.5), (-2.5, 2.5)]),
            points=((np.pi / 4, 0.0, 0.0, 0.0), (1.2, 0.5, 0.3, -0.7)),
            soul_params=((np.pi / 4, 0.0), (1.0, 0.7), (2.0, -2.0), (0.4, 2.5)),
        ),
        description="Round S^2 x flat R^2 with soul S^2 x {0}",
    )


def product_t2_r2() -> ZooEntry:
    n = 4
    two_pi = 2.0 * np.pi
    metric = MetricField(
        name="product_t2_r2", dim=n,
        evaluate=_constant(n, lambda x: [np.ones(x.shape[:-1])] * n),
        valid_domain=Box.of([(-0.5, two_pi + 0.5), (-0.5, two_pi + 0.5), FIBER_RANGE, FIBER_RANGE]),
        derivative_mode=ANALYTIC,
        analytic_dg=lambda x: np.zeros((n, n, n)),
        analytic_d2g=lambda x: np.zeros((n, n, n, n)),
        curvature_flags=(FLAT,),
    )
    soul = _surface_soul("t2_x_origin", metric, Box.of([(0.0, two_pi), (0.0, two_pi)]), 0.0)
    return ZooEntry(
        name=metric.name, metric=metric, soul=soul,
        expected=ExpectedProperties(
            constant_curvature=0.0, expected_split=True, euler_abs=0.0, soul_tangent_K=0.0,
            soul_area=two_pi**2, curvature_flags=(FLAT, CONSTANT_CURVATURE),
        ),
        hints=SamplingHints(
            box=Box.of([(0.0, two_pi), (0.0, two_pi), (-2.5, 2.5), (-2.5, 2.5)]),
            points=((1.0, 2.0, 0.0, 0.0),),
            soul_params=((1.0, 2.0), (3.0, 0.5), (5.5, 5.5)),
        ),
        description="Flat torus x flat R^2 (chartwise flat) with soul T^2 x {0}",
    )


def hopf_example(r0: float = 1.0) -> ZooEntry:
    """
    S^3 x_{S^1} R^2: the quotient of the unit 3-sphere times the capped plane
    by the diagonal circle action, Hopf on S^3 and rotation on the plane.
    Chart (eta, beta, a, b), soul {a = b = 0}.
    """
    profile = cap_profile(r0)
    # Fiber chart must contain the sampling box (+-2 r0) with room for stencils.
    reach = max(FIBER_RANGE[1], 3.0 * r0)
    fiber = (-reach, reach)

    def total_eval(x):
        x = np.asarray(x, dtype=float)
        g = np.zeros(x.shape[:-1] + (5, 5))
        for i, entry in enumerate(_hopf_coordinates_diag(x)):
            g[..., i, i] = entry
        gaa, gab, gbb = _cartesian_fiber(profile, x[..., 3], x[..., 4])
        g[..., 3, 3], g[..., 3, 4], g[..., 4, 3], g[..., 4, 4] = gaa, gab, gab, gbb
        return g

    total = MetricField(
        name="hopf_total", dim=5, evaluate=total_eval,
        valid_domain=Box.of([(CHART_POLE_MARGIN, HALF_PI - CHART_POLE_MARGIN), ANGLE_RANGE, ANGLE_RANGE,
                             fiber, fiber]),
    )

    def killing(x):
        x = np.asarray(x, dtype=float)
        ones = np.ones(x.shape[:-1])
        return np.stack([np.zeros(x.shape[:-1]), ones, ones, -x[..., 4], x[..., 3]], axis=-1)

    def section(q):
        q = np.asarray(q, dtype=float)
        return np.stack([q[..., 0], np.zeros(q.shape[:-1]), q[..., 1], q[..., 2], q[..., 3]], axis=-1)

    D = np.zeros((5, 4))
    D[0, 0] = D[2, 1] = D[3, 2] = D[4, 3] = 1.0

    spec = QuotientMetricSpec(
        name="hopf_example",
        total=total,
        killing=killing,
        section=section,
        section_differential=lambda q: np.broadcast_to(D, np.shape(q)[:-1] + D.shape),
        quotient_dim=4,
        valid_domain=Box.of([(CHART_POLE_MARGIN, HALF_PI - CHART_POLE_MARGIN), ANGLE_RANGE, fiber, fiber]),
        curvature_flags=(NONNEGATIVE_SECTIONAL,),
    )
    metric = quotient_metric(spec)
    soul = _surface_soul(
        "hopf_soul", metric,
        Box.of([(QUADRATURE_POLE_MARGIN, HALF_PI - QUADRATURE_POLE_MARGIN), (-np.pi, np.pi)]),
        QUADRATURE_POLE_MARGIN,
    )

    radii = (0.0, 0.3, 0.7, 0.8, 1.3, 2.0)
    points = tuple(
        (0.35 + 0.15 * i, -2.0 + 0.8 * i, r0 * r * np.cos(0.9 * i + 0.2), r0 * r * np.sin(0.9 * i + 0.2))
        for i, r in enumerate(radii)
    )
    etas = (0.3, 0.55, 0.8, 1.05, 1.3)
    soul_params = tuple((eta, beta) for eta in etas for beta in (-2.0, 0.7))

    return ZooEntry(
        name="hopf_example", metric=metric, soul=soul,
        expected=ExpectedProperties(
            expected_split=False, euler_abs=1.0, soul_tangent_K=4.0, soul_area=np.pi,
            far_field_radius=r0, curvature_flags=spec.curvature_flags,
        ),
        hints=SamplingHints(
            box=Box.of([(SAMPLING_POLE_MARGIN, HALF_PI - SAMPLING_POLE_MARGIN), (-np.pi, np.pi),
                        (-2.0 * r0, 2.0 * r0), (-2.0 * r0, 2.0 * r0)]),
            points=points,
            soul_params=soul_params,
            reject=_avoid_joins(profile, lambda p: np.hypot(p[:, 2], p[:, 3])),
        ),
        description=f"S^3 x_S1 R^2 with capped fiber, r0 = {r0}; soul S^2 of radius 1/2",
        profile=profile,
        fiber_axes=(2, 3),
    )


def _validate(entry: ZooEntry) -> None:
    """Constant-curvature entries must reproduce their curvature at a validation point."""
    kappa = entry.expected.constant_curvature
    if kappa is None:
        return
    p = entry.sample_points(1)[0]
    R = riemann(entry.metric, entry.metric.point(p), entry.hints.step)
    assert_constant_curvature(R, kappa, DEFAULT_TOLERANCES["constant_curvature"], entry.name)


@lru_cache(maxsize=None)
def _catalog() -> tuple[ZooEntry, ...]:
    assert_sign_convention()
    entries = (
        flat_space(2), flat_space(3), flat_space(4),
        polar_plane(), unit_s2(), unit_s3(), cap_disc(), hopf_base(),
        product_s2_r2(), product_t2_r2(), hopf_example(1.0),
    )
    for entry in entries:
        _validate(entry)
    logger.debug(f"Zoo catalog built with {len(entries)} entries")
    return entries


def zoo_catalog() -> list[ZooEntry]:
    return list(_catalog())


def catalog_names() -> list[str]:
    return [e.name for e in _catalog()]


def get_entry(name: str) -> ZooEntry:
    for entry in _catalog():
        if entry.name == name:
            return entry
    raise ConfigError(f"Unknown zoo entry '{name}'; known entries: {', '.join(catalog_names())}")

from dataclasses import replace

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from src.errors import (
    DegeneratePlaneError,
    DependentVectorsError,
    DomainError,
    NonFiniteMetricError,
    SignConventionError,
    SingularMetricError,
)
from src.geometry.algebraic import algebraic_riemann, constant_curvature_tensor, random_curvature_tensor
from src.geometry.connection import christoffel
from src.geometry.curvature import (
    assert_constant_curvature,
    assert_sign_convention,
    flat_plane_lemma_residual,
    min_sectional_curvature,
    reframe,
    riemann,
    scalar_curvature,
    sectional_curvature,
    sectional_matrix,
    symmetry_residuals,
)
from src.geometry.frames import complete_frame, gram_residual, orthonormalize
from src.geometry.metric import FINITE_DIFFERENCE, Box, MetricField, Point, metric_jet
from src.settings import DEFAULT_TOLERANCES
from src.zoo.catalog import get_entry

unit_floats = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


def _R(name, coords):
    metric = get_entry(name).metric
    return riemann(metric, metric.point(coords))


def test_flat_jet_vanishes():
    metric = get_entry("flat_r3").metric
    jet = metric_jet(metric, metric.point([0.1, -0.2, 0.3]))
    assert np.all(jet.dg == 0.0)
    assert np.all(jet.d2g == 0.0)

    fd = metric_jet(replace(metric, derivative_mode=FINITE_DIFFERENCE), metric.point([0.1, -0.2, 0.3]))
    assert_allclose(fd.dg, 0.0, atol=1e-12)
    assert_allclose(fd.d2g, 0.0, atol=1e-9)


def test_polar_plane_jet_matches_hand_derivative():
    metric = get_entry("polar_plane").metric
    jet = metric_jet(metric, metric.point([2.0, 0.0]))
    assert jet.dg[0, 1, 1] == pytest.approx(4.0, abs=1e-8)
    assert jet.d2g[0, 0, 1, 1] == pytest.approx(2.0, abs=1e-5)
    assert jet.symmetry_residual() < 1e-12


def test_jet_rejects_points_near_the_domain_edge():
    metric = get_entry("polar_plane").metric
    with pytest.raises(DomainError):
        metric_jet(metric, metric.point([0.5 + 1e-3, 0.0]))
    with pytest.raises(DomainError):
        metric_jet(metric, metric.point([2.0, 0.0]), step=-1e-3)
    with pytest.raises(DomainError):
        metric_jet(metric, metric.point([2.0, 0.0, 0.0]))


def test_jet_error_shrinks_fourth_order_when_the_step_halves():
    metric = get_entry("unit_s2").metric
    p = metric.point([1.1, 0.5])
    exact = metric_jet(metric, p)
    fd_metric = replace(metric, derivative_mode=FINITE_DIFFERENCE)
    coarse = metric_jet(fd_metric, p, step=0.1)
    fine = metric_jet(fd_metric, p, step=0.05)

    for order in ("dg", "d2g"):
        err_coarse = np.max(np.abs(getattr(coarse, order) - getattr(exact, order)))
        err_fine = np.max(np.abs(getattr(fine, order) - getattr(exact, order)))
        assert err_coarse > 1e-7
        assert err_fine < err_coarse / 8.0


def test_hopf_example_jet_is_stable_under_step_halving(hopf):
    p = hopf.metric.point([0.6, 0.3, 0.4, -0.2])
    full = metric_jet(hopf.metric, p, step=1e-3)
    half = metric_jet(hopf.metric, p, step=5e-4)
    assert np.max(np.abs(full.dg - half.dg)) < 1e-6
    assert np.max(np.abs(full.d2g - half.d2g)) < 1e-5


def test_non_finite_coordinates_and_values_are_rejected():
    with pytest.raises(DomainError):
        Point(coords=[np.nan, 0.0])

    metric = MetricField(
        name="broken", dim=1,
        evaluate=lambda x: np.full(np.shape(x)[:-1] + (1, 1), np.nan),
        valid_domain=Box.of([(0.0, 1.0)]),
    )
    with pytest.raises(NonFiniteMetricError):
        metric.at([0.5])


def test_singular_metric_is_rejected():
    def evaluate(x):
        x = np.asarray(x, dtype=float)
        g = np.zeros(x.shape[:-1] + (2, 2))
        g[..., 0, 0] = 1.0
        return g

    metric = MetricField(name="degenerate", dim=2, evaluate=evaluate, valid_domain=Box.of([(0.0, 1.0)] * 2))
    jet = metric_jet(metric, metric.point([0.5, 0.5]))
    with pytest.raises(SingularMetricError):
        christoffel(jet)


def test_christoffel_symbols_of_polar_plane():
    metric = get_entry("polar_plane").metric
    gamma = christoffel(metric_jet(metric, metric.point([2.0, 0.0]))).gamma
    assert gamma[0, 1, 1] == pytest.approx(-2.0, abs=1e-8)
    assert gamma[1, 0, 1] == pytest.approx(0.5, abs=1e-8)
    assert gamma[1, 1, 0] == pytest.approx(0.5, abs=1e-8)


def test_christoffel_symbols_of_round_sphere():
    metric = get_entry("unit_s2").metric
    conn = christoffel(metric_jet(metric, metric.point([np.pi / 4, 0.0])))
    assert conn.gamma[0, 1, 1] == pytest.approx(-0.5, abs=1e-12)
    assert conn.symmetry_residual() == 0.0


def test_flat_metrics_have_zero_curvature():
    assert _R("flat_r4", [0.1, 0.2, -0.3, 0.4]).max_abs < 1e-8
    assert _R("polar_plane", [2.0, 0.3]).max_abs < 1e-6


def test_sphere_curvature_is_positive_one():
    R = _R("unit_s2", [1.1, 0.5])
    assert R.R[0, 1, 1, 0] == pytest.approx(1.0, abs=1e-5)
    assert assert_sign_convention() == pytest.approx(1.0, abs=1e-5)


@pytest.mark.parametrize("name, coords, expected, tol", [
    ("flat_r3", [0.0, 0.0, 0.0], 0.0, 1e-8),
    ("unit_s2", [1.1, 0.5], 2.0, 1e-5),
    ("unit_s3", [np.pi / 4, 0.0, 0.0], 6.0, 1e-4),
])
def test_scalar_curvature(name, coords, expected, tol):
    assert scalar_curvature(_R(name, coords)) == pytest.approx(expected, abs=tol)


@given(arrays(np.float64, 3, elements=unit_floats), arrays(np.float64, 3, elements=unit_floats))
def test_unit_s3_sectional_curvature_is_one_on_every_plane(x, y):
    assume(np.linalg.norm(np.cross(x, y)) > 0.1 * max(np.linalg.norm(x) * np.linalg.norm(y), 1e-3))
    R = _R("unit_s3", [np.pi / 4, 0.0, 0.0])
    assert sectional_curvature(R, x, y) == pytest.approx(1.0, abs=1e-5)


@given(arrays(np.float64, 4, elements=unit_floats), arrays(np.float64, 4, elements=unit_floats))
def test_sectional_curvature_depends_only_on_the_plane(x, y):
    gram = np.array([[x @ x, x @ y], [x @ y, y @ y]])
    assume(np.linalg.det(gram) > 0.05)
    R = _R("product_s2_r2", [1.2, 0.5, 0.3, -0.7])
    K = sectional_curvature(R, x, y)
    assert sectional_curvature(R, 2.0 * x + y, x - 3.0 * y) == pytest.approx(K, abs=1e-8)


def test_product_mixed_plane_is_flat():
    R = _R("product_s2_r2", [1.2, 0.5, 0.3, -0.7])
    e = np.eye(4)
    assert abs(sectional_curvature(R, e[0], e[2])) < 1e-6
    assert abs(sectional_curvature(R, e[1], e[3])) < 1e-6
    assert flat_plane_lemma_residual(R, 1e-6) < 1e-6
    assert min_sectional_curvature(R, samples=256, seed=3) > -1e-6


def test_degenerate_plane_is_rejected():
    R = _R("unit_s2", [1.1, 0.5])
    with pytest.raises(DegeneratePlaneError):
        sectional_curvature(R, np.array([1.0, 0.0]), np.array([2.0, 0.0]))


def test_curvature_is_frame_independent():
    metric = get_entry("unit_s3").metric
    coords = [0.6, 0.2, -0.1]
    R = riemann(metric, metric.point(coords))
    other = orthonormalize(metric.at(coords), list(np.eye(3)[::-1]))
    assert scalar_curvature(reframe(R, other)) == pytest.approx(scalar_curvature(R), rel=1e-10)


def test_orthonormalize_weighted_inner_product():
    frame = orthonormalize(np.diag([4.0, 1.0]), [np.array([1.0, 0.0]), np.array([1.0, 1.0])])
    assert_allclose(frame.columns, [[0.5, 0.0], [0.0, 1.0]], atol=1e-14)


def test_orthonormalize_rejects_dependent_vectors():
    with pytest.raises(DependentVectorsError):
        orthonormalize(np.eye(2), [np.array([1.0, 0.0]), np.array([2.0, 0.0])])


@given(arrays(np.float64, (3, 3), elements=unit_floats), arrays(np.float64, (3, 3), elements=unit_floats))
def test_orthonormalize_gives_g_orthonormal_frame(a, vectors):
    assume(abs(np.linalg.det(vectors)) > 0.1)
    g = a @ a.T + np.eye(3)
    frame = orthonormalize(g, list(vectors.T))
    assert gram_residual(g, frame.columns) < 1e-10
    first = frame.columns[:, 0]
    assert_allclose(first * np.sqrt(vectors[:, 0] @ g @ vectors[:, 0]), vectors[:, 0], atol=1e-10)


def test_complete_frame_keeps_leading_direction():
    g = np.diag([1.0, 0.25, 2.0])
    frame = complete_frame(g, [np.array([1.0, 1.0, 0.0])])
    assert frame.size == 3
    assert gram_residual(g, frame.columns) < 1e-10
    lead = frame.columns[:, 0]
    assert lead[0] / lead[1] == pytest.approx(1.0)
    assert lead[2] == 0.0


def test_algebraic_tensors_satisfy_curvature_identities():
    R = algebraic_riemann(random_curvature_tensor(4, np.random.default_rng(11)))
    assert max(symmetry_residuals(R).values()) < 1e-12

    C = algebraic_riemann(constant_curvature_tensor(4, 2.0))
    K = sectional_matrix(C)
    assert_allclose(K[~np.eye(4, dtype=bool)], 2.0)
    assert scalar_curvature(C) == pytest.approx(24.0)


def test_constant_curvature_check_raises_on_mismatch():
    R = _R("unit_s2", [1.1, 0.5])
    assert_constant_curvature(R, 1.0, 1e-5, "unit_s2")
    with pytest.raises(SignConventionError):
        assert_constant_curvature(R, 2.0, 1e-5, "unit_s2")


@pytest.mark.parametrize("name, coords", [
    ("unit_s2", [1.1, 0.5]),
    ("unit_s2", [np.pi / 4, -2.0]),
    ("unit_s3", [0.5, 1.0, -1.0]),
    ("unit_s3", [np.pi / 4, 0.0, 0.3]),
])
def test_analytic_and_finite_difference_curvature_agree(name, coords):
    metric = get_entry(name).metric
    p = metric.point(coords)
    analytic = riemann(metric, p)
    fd = riemann(replace(metric, derivative_mode=FINITE_DIFFERENCE), p)
    assert np.max(np.abs(analytic.R - fd.R)) < 1e-4


def test_symmetry_residuals_ignore_noise_on_flat_tensors():
    rng = np.random.default_rng(4)
    noise = 1e-11 * random_curvature_tensor(4, rng) + 1e-15 * rng.normal(size=(4, 4, 4, 4))
    residuals = symmetry_residuals(algebraic_riemann(noise))
    assert max(residuals.values()) < 1e-12


def test_flat_charts_pass_the_symmetry_tolerance():
    for name, coords in (("polar_plane", [0.935, -1.229]), ("cap_disc", [1.196, 1.931])):
        R = _R(name, coords)
        assert R.max_abs < 1e-6
        assert max(symmetry_residuals(R).values()) < DEFAULT_TOLERANCES["symmetry"]

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import ConfigError, ProfileError, QuotientError
from src.geometry.curvature import riemann, sectional_curvature
from src.geometry.metric import Box
from src.runner.config import RunConfig
from src.runner.suites import run_suite
from src.zoo.catalog import catalog_names, flat_space, get_entry, hopf_example, hopf_quotient_spec
from src.zoo.profiles import cap_profile
from src.zoo.quotient import QuotientMetricSpec, horizontal_lift, oneill_gap, quotient_metric


def test_cap_profile_shape():
    profile = cap_profile(1.0)
    r = np.linspace(0.0, 0.5, 11)
    assert_allclose(profile.phi(r), r)
    assert profile.phi(np.array([1.0]))[0] == pytest.approx(profile.cylinder_radius)
    assert profile.phi(np.array([2.5]))[0] == pytest.approx(0.75)
    assert_allclose(profile.dphi(np.array([1.0, 1.7])), 0.0, atol=1e-15)
    assert_allclose(profile.d2phi(np.array([0.1, 1.2])), 0.0, atol=1e-15)


def test_cap_profile_curvature_is_nonnegative():
    profile = cap_profile(2.0)
    r = np.linspace(0.05, 4.0, 200)
    assert np.all(profile.curvature(r) >= 0.0)
    assert np.max(profile.curvature(r)) > 0.0
    assert_allclose(profile.fiber_weight(np.array([0.0, 0.3, 1.0])), 0.0)


def test_cap_profile_rejects_bad_input():
    with pytest.raises(ProfileError):
        cap_profile(0.0)
    with pytest.raises(ProfileError):
        cap_profile(-1.0)
    with pytest.raises(ProfileError):
        cap_profile(1.0).phi(np.array([-0.1]))


def _rotation_quotient(lower=0.2):
    plane = flat_space(2).metric
    return QuotientMetricSpec(
        name="plane_mod_rotation",
        total=plane,
        killing=lambda x: np.stack([-x[..., 1], x[..., 0]], axis=-1),
        section=lambda q: np.stack([q[..., 0], np.zeros(q.shape[:-1])], axis=-1),
        section_differential=lambda q: np.broadcast_to(np.array([[1.0], [0.0]]), q.shape[:-1] + (2, 1)),
        quotient_dim=1,
        valid_domain=Box.of([(lower, 0.9)]),
    )


def test_rotation_quotient_of_the_plane_is_the_half_line():
    metric = quotient_metric(_rotation_quotient())
    assert_allclose(metric.at(np.array([[0.3], [0.5], [0.8]])), np.ones((3, 1, 1)))


def test_vanishing_killing_field_is_rejected():
    metric = quotient_metric(_rotation_quotient(lower=0.0))
    with pytest.raises(QuotientError):
        metric.at(np.array([0.0]))


def test_hopf_quotient_has_curvature_four():
    metric = get_entry("hopf_base").metric
    R = riemann(metric, metric.point([np.pi / 4, 0.3]))
    assert R.R[0, 1, 1, 0] == pytest.approx(4.0, abs=1e-3)


def test_horizontal_lift_is_orthogonal_to_the_orbit():
    spec = hopf_quotient_spec()
    q = np.array([0.6, 0.2])
    lift = horizontal_lift(spec, q, np.array([0.3, 1.0]))
    x = spec.section(q)
    assert spec.killing(x) @ spec.total.at(x) @ lift == pytest.approx(0.0, abs=1e-14)


def test_submersion_does_not_decrease_curvature():
    kq, kt = oneill_gap(hopf_quotient_spec(), [0.6, 0.2], [1.0, 0.0], [0.0, 1.0])
    assert kq == pytest.approx(4.0, abs=1e-3)
    assert kt == pytest.approx(1.0, abs=1e-3)
    assert kq >= kt


def test_hopf_example_metric_is_positive_definite(hopf):
    points = hopf.sample_points(12, seed=3)
    g = hopf.metric.at(points)
    assert g.shape == (12, 4, 4)
    assert_allclose(g, np.swapaxes(g, -1, -2))
    assert np.all(np.linalg.eigvalsh(g)[:, 0] > 0.0)


def test_hopf_example_is_flat_in_radial_planes_outside_the_cap(hopf):
    coords = np.array([0.7, 0.4, 1.6, -1.0])
    R = riemann(hopf.metric, hopf.metric.point(coords))
    radial = np.array([0.0, 0.0, coords[2], coords[3]])
    for other in (np.eye(4)[0], np.eye(4)[1], np.array([0.0, 0.0, -coords[3], coords[2]])):
        assert abs(sectional_curvature(R, radial, other)) < 1e-4


def test_wider_cap_keeps_samples_inside_the_fiber_chart():
    entry = hopf_example(2.0)
    points = entry.sample_points(20, seed=0)
    step = entry.metric.default_step()
    assert min(entry.metric.valid_domain.margin_of(p) for p in points) > 2.0 * step

    result = run_suite("identities", entry, RunConfig(entries=("hopf_example",), point_count=6))
    assert result.findings == []
    assert len(result.results["points"]) == 6


def test_catalog_names_are_unique_and_complete(catalog):
    names = catalog_names()
    assert len(names) == len(set(names)) == len(catalog)
    for required in ("flat_r2", "unit_s2", "unit_s3", "hopf_base", "product_s2_r2", "product_t2_r2", "hopf_example"):
        assert required in names


def test_unknown_entry_is_a_config_error():
    with pytest.raises(ConfigError):
        get_entry("klein_bottle")


def test_entry_metadata(hopf, product):
    summary = hopf.summary()
    assert summary["soul"] == {"name": "hopf_soul", "dim": 2}
    assert summary["expected_split"] is False
    assert summary["euler_abs"] == 1.0
    assert product.expected.expected_split is True
    assert product.expected.nonnegative
    assert get_entry("flat_r2").expected.flat


def test_sample_points_are_seeded_and_avoid_profile_joins(hopf):
    a = hopf.sample_points(30, seed=5)
    b = hopf.sample_points(30, seed=5)
    assert_allclose(a, b)
    assert a.shape == (30, 4)
    assert_allclose(a[:len(hopf.hints.points)], hopf.hints.points)
    radii = hopf.fiber_radius(a[len(hopf.hints.points):])
    assert np.all(np.abs(radii - 0.5) >= 0.02)
    assert np.all(np.abs(radii - 1.0) >= 0.02)
    assert all(hopf.metric.valid_domain.contains(p) for p in a)

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from src.errors import DimensionMismatchError, InvalidFrameSizeError
from src.geometry.curvature import riemann
from src.spectral.bivectors import Bivector, bivector_basis, wedge
from src.spectral.operator import curvature_operator, quadratic_form, symmetric_operator
from src.spectral.report import region_verdicts, sorted_eigh, spectral_report
from src.spectral.search import EIGEN_FRAME, eigenbasis_overlaps, frame_sum, frame_sum_min
from src.zoo.catalog import get_entry


def _operator(name, coords):
    metric = get_entry(name).metric
    return curvature_operator(riemann(metric, metric.point(coords)))


def _random_symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return 0.5 * (a + a.T)


def test_bivector_basis_is_lexicographic():
    basis = bivector_basis(4)
    assert basis.size == 6
    assert basis.pairs[:3] == ((0, 1), (0, 2), (0, 3))
    assert basis.index(2, 3) == 5
    assert basis.label(1) == "e0^e2"


def test_wedge_is_antisymmetric():
    x = np.array([1.0, 2.0, 0.5])
    y = np.array([0.0, -1.0, 3.0])
    assert_allclose(wedge(x, y).coeffs, -wedge(y, x).coeffs)
    assert wedge(x, x).norm() == 0.0
    assert (wedge(x, y) * 2.0).norm() == pytest.approx(2.0 * wedge(x, y).norm())


def test_bivectors_of_different_dimensions_do_not_mix():
    with pytest.raises(DimensionMismatchError):
        wedge(np.eye(3)[0], np.eye(3)[1]) + wedge(np.eye(4)[0], np.eye(4)[1])
    with pytest.raises(DimensionMismatchError):
        Bivector(np.zeros(4), bivector_basis(3))


def test_unit_s3_operator_is_identity():
    op = _operator("unit_s3", [np.pi / 4, 0.0, 0.0])
    assert_allclose(op.m, np.eye(3), atol=1e-5)


def test_flat_r4_operator_is_zero():
    op = _operator("flat_r4", [0.0, 0.0, 0.0, 0.0])
    assert op.m.shape == (6, 6)
    assert_allclose(op.m, 0.0, atol=1e-8)


def test_product_operator_has_rank_one():
    op = _operator("product_s2_r2", [1.2, 0.5, 0.3, -0.7])
    expected = np.zeros((6, 6))
    expected[0, 0] = 1.0
    assert_allclose(op.m, expected, atol=1e-5)


def test_spectral_verdicts_from_a_given_spectrum():
    report = spectral_report(symmetric_operator(np.diag([-1.0, 0.5, 0.8, 1.0, 2.0, 3.0])))
    assert not report.is_k_nonnegative(1)
    assert not report.is_k_nonnegative(2)
    assert report.verdict(2).partial_sum == pytest.approx(-0.5)
    assert report.is_k_nonnegative(3)
    assert report.verdict(3).partial_sum == pytest.approx(0.3)
    assert report.verdict(3).positive


def test_zero_operator_is_nonnegative_but_not_positive():
    report = spectral_report(symmetric_operator(np.zeros((6, 6))))
    assert all(v.nonnegative for v in report.verdicts)
    assert not any(v.positive for v in report.verdicts)


def test_unit_s3_partial_sums_are_k():
    report = spectral_report(_operator("unit_s3", [0.6, 0.2, -0.1]))
    assert_allclose(report.partial_sums, [1.0, 2.0, 3.0], atol=1e-5)
    assert all(v.positive for v in report.verdicts)


def test_sorted_eigh_is_ascending_with_fixed_signs():
    m = _random_symmetric(np.random.default_rng(2), 5)
    values, vectors = sorted_eigh(m)
    assert np.all(np.diff(values) >= 0)
    assert_allclose(m @ vectors, vectors * values, atol=1e-10)
    for c in range(5):
        first = vectors[np.flatnonzero(np.abs(vectors[:, c]) > 1e-12)[0], c]
        assert first > 0


def test_region_verdicts_hold_only_where_every_point_agrees():
    good = spectral_report(symmetric_operator(np.diag([0.5, 1.0, 2.0])))
    bad = spectral_report(symmetric_operator(np.diag([-1.0, 0.5, 2.0])))
    region = region_verdicts([good, bad])
    assert [r.nonnegative_everywhere for r in region] == [False, False, True]
    assert region[0].worst_point == 1
    assert region[0].worst_partial_sum == pytest.approx(-1.0)
    assert region_verdicts([]) == []


def test_frame_search_on_diagonal_operator():
    op = symmetric_operator(np.diag([-1.0, 0.0, 2.0]))
    result = frame_sum_min(op, 2, seed=5)
    assert result.min_value == pytest.approx(-1.0, abs=1e-10)
    assert_allclose(result.frame[2], 0.0, atol=1e-6)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_frame_search_on_identity(n):
    op = symmetric_operator(np.eye(n))
    for k in range(1, n + 1):
        assert frame_sum_min(op, k).min_value == pytest.approx(k)


def test_frame_search_reaches_eigenvalue_partial_sums():
    rng = np.random.default_rng(20)
    for trial in range(200):
        n = int(rng.integers(1, 11))
        k = int(rng.integers(1, n + 1))
        op = symmetric_operator(_random_symmetric(rng, n))
        expected = spectral_report(op).partial_sums[k - 1]
        found = frame_sum_min(op, k, sample_count=16, seed=trial)
        assert found.min_value == pytest.approx(expected, abs=1e-6 * max(1.0, abs(expected)))


def test_frame_search_rejects_bad_frame_sizes():
    op = symmetric_operator(np.eye(3))
    with pytest.raises(InvalidFrameSizeError):
        frame_sum_min(op, 0)
    with pytest.raises(InvalidFrameSizeError):
        frame_sum_min(op, 4)


def test_frame_search_is_deterministic():
    op = symmetric_operator(_random_symmetric(np.random.default_rng(8), 6))
    a = frame_sum_min(op, 3, seed=17)
    b = frame_sum_min(op, 3, seed=17)
    assert a.min_value == b.min_value
    assert_allclose(a.frame, b.frame)


def test_frame_search_bivectors_need_a_basis():
    op = _operator("unit_s3", [0.6, 0.2, -0.1])
    result = frame_sum_min(op, 2)
    assert len(result.bivectors(op)) == 2
    with pytest.raises(InvalidFrameSizeError):
        frame_sum_min(symmetric_operator(np.eye(3)), 2).bivectors(symmetric_operator(np.eye(3)))


@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=6))
def test_random_frames_never_beat_the_partial_sum(seed, k):
    rng = np.random.default_rng(seed)
    op = symmetric_operator(_random_symmetric(rng, 6))
    frame, _ = np.linalg.qr(rng.standard_normal((6, k)))
    overlaps = eigenbasis_overlaps(op, frame)
    assert np.sum(overlaps.column_mass) == pytest.approx(k)
    assert np.all(overlaps.column_mass <= 1.0 + 1e-12)
    assert overlaps.weighted_sum == pytest.approx(frame_sum(op.m, frame), abs=1e-10)
    assert frame_sum(op.m, frame) >= overlaps.partial_sum - 1e-10


def test_eigenvector_frame_is_kept_on_ties():
    op = symmetric_operator(np.diag([1.0, 2.0, 3.0]))
    assert frame_sum_min(op, 1, sample_count=8).source == EIGEN_FRAME


def test_quadratic_form_values():
    basis = bivector_basis(4)
    unit = Bivector(np.eye(6)[2], basis)
    assert quadratic_form(symmetric_operator(np.eye(6)), unit) == pytest.approx(1.0)
    assert quadratic_form(symmetric_operator(np.zeros((6, 6))), unit + unit * 3.0) == 0.0

    op = _operator("unit_s3", [np.pi / 4, 0.0, 0.0])
    e = np.eye(3)
    b = (wedge(e[0], e[1]) + wedge(e[0], e[2])) * np.sqrt(0.5)
    assert quadratic_form(op, b) == pytest.approx(1.0, abs=1e-5)


def test_quadratic_form_checks_dimensions():
    with pytest.raises(DimensionMismatchError):
        quadratic_form(symmetric_operator(np.eye(3)), Bivector(np.ones(6), bivector_basis(4)))

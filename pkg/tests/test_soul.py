import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import DomainError
from src.geometry.algebraic import algebraic_riemann, constant_curvature_tensor, random_curvature_tensor
from src.geometry.frames import gram_residual
from src.soul.obstruction import FlatNormalBundle, ObstructionWitness, normalized_form_sum, obstruction_witness
from src.soul.relations import (
    NotApplicable,
    expansion_form,
    expansion_residual,
    inequality_13,
    pointwise_relations,
    trace_inequality,
)
from src.soul.souls import AdaptedFrame, adapted_frame, embed
from src.spectral.bivectors import Bivector, bivector_basis
from src.spectral.operator import curvature_operator, symmetric_operator
from src.spectral.report import spectral_report


def test_product_adapted_frame_splits_along_factors(product):
    adapted = adapted_frame(product.soul, np.array([1.0, 0.7]))
    g = product.metric.at(adapted.point.coords)
    assert gram_residual(g, adapted.frame.columns) < 1e-10
    assert (adapted.tangent_dim, adapted.normal_dim) == (2, 2)
    assert_allclose(adapted.tangent[2:], 0.0, atol=1e-14)
    assert_allclose(adapted.normal[:2], 0.0, atol=1e-14)


def test_hopf_adapted_frame(hopf, hopf_soul_curvature):
    _, adapted = hopf_soul_curvature
    assert adapted.dim == 4
    assert adapted.tangent_dim == 2
    assert adapted.projection_residual < 1e-8
    g = hopf.metric.at(adapted.point.coords)
    assert gram_residual(g, adapted.frame.columns) < 1e-10


def test_soul_parameter_at_a_pole_is_rejected(hopf):
    with pytest.raises(DomainError):
        embed(hopf.soul, np.array([0.0, 0.0]))
    with pytest.raises(DomainError):
        adapted_frame(hopf.soul, np.array([np.pi / 2, 0.0]))
    with pytest.raises(DomainError):
        embed(hopf.soul, np.array([0.5]))


def test_reversed_normals_keep_the_tangent_block(hopf_soul_curvature):
    _, adapted = hopf_soul_curvature
    flipped = adapted.with_reversed_normals()
    assert_allclose(flipped.tangent, adapted.tangent)
    assert_allclose(flipped.normal, adapted.normal[:, ::-1])


def test_product_soul_relations_hold_exactly(product_soul_curvature):
    R, adapted = product_soul_curvature
    report = pointwise_relations(R, adapted, samples=2000, seed=1)
    assert report.mixed_plane_max_K < 1e-8
    assert report.flat_plane_residual < 1e-8
    assert report.eq11_residual < 1e-8
    assert report.trace.lhs < 1e-12
    assert report.trace_ineq_slack >= -1e-8
    assert report.violations() == []


def test_hopf_soul_relations(hopf_soul_curvature):
    R, adapted = hopf_soul_curvature
    report = pointwise_relations(R, adapted, samples=10_000, seed=0)
    assert report.mixed_plane_max_K < 1e-5
    assert report.eq11_residual < 1e-4
    assert report.ineq13_min_slack >= -1e-8
    assert report.trace.slack_31 >= -1e-8
    assert report.trace.slack_32 >= -1e-8
    assert report.violations() == []


def test_hopf_soul_curvature_values(hopf_soul_curvature):
    R, adapted = hopf_soul_curvature
    assert R.R[0, 1, 1, 0] == pytest.approx(4.0, abs=1e-3)
    assert R.R[2, 3, 3, 2] == pytest.approx(3.0, abs=1e-3)
    assert trace_inequality(R, adapted).lhs == pytest.approx(16.0, abs=1e-2)


def test_generic_tensor_violates_soul_relations():
    R = algebraic_riemann(random_curvature_tensor(4, np.random.default_rng(4)))
    report = pointwise_relations(R, AdaptedFrame.standard(4, 2), samples=500)
    assert report.mixed_plane_max_K > 1e-3
    assert report.violations()


def test_inequality_13_in_constant_curvature():
    R = algebraic_riemann(constant_curvature_tensor(4))
    assert inequality_13(R, AdaptedFrame.standard(4, 2), samples=1000) == pytest.approx(1.0, abs=1e-12)


def test_inequality_13_in_flat_space():
    R = algebraic_riemann(np.zeros((4, 4, 4, 4)))
    assert inequality_13(R, AdaptedFrame.standard(4, 2), samples=100) == 0.0


def test_low_dimensional_souls_are_not_applicable():
    R = algebraic_riemann(constant_curvature_tensor(3))
    frame = AdaptedFrame.standard(3, 1)
    assert isinstance(inequality_13(R, frame), NotApplicable)
    assert isinstance(expansion_form(R, frame), NotApplicable)
    assert isinstance(obstruction_witness(R, frame), NotApplicable)
    assert pointwise_relations(R, frame, samples=10).ineq13_min_slack is None


def test_expansion_form_at_hopf_soul(hopf_soul_curvature):
    R, adapted = hopf_soul_curvature
    form = expansion_form(R, adapted)
    assert form.min_eigenvalue >= -1e-8
    assert_allclose(form.Q, form.Q.T)
    assert expansion_residual(R, adapted, samples=64) < 1e-4


def test_hopf_soul_has_an_obstruction_witness(hopf_soul_curvature):
    R, adapted = hopf_soul_curvature
    witness = obstruction_witness(R, adapted, search_samples=256, seed=0)
    assert isinstance(witness, ObstructionWitness)
    assert witness.alpha > 0.01
    assert witness.alpha == pytest.approx(2.0, abs=1e-3)
    assert witness.sum_value == pytest.approx(-0.5 * witness.alpha, rel=1e-4)
    assert_allclose(witness.quadratic_forms, np.array([-0.5, -0.5, 0.5]) * witness.alpha, rtol=1e-4)
    assert witness.orthonormality_residual < 1e-8
    assert not spectral_report(curvature_operator(R)).is_k_nonnegative(3)


def test_product_soul_normal_bundle_is_flat(product_soul_curvature):
    R, adapted = product_soul_curvature
    found = obstruction_witness(R, adapted, search_samples=256)
    assert isinstance(found, FlatNormalBundle)
    assert found.max_alpha < 1e-7


def test_normalized_form_sum_of_injected_values():
    op = symmetric_operator(np.diag([-0.5, -0.5, 0.5, 0.0, 0.0, 0.0]))
    basis = bivector_basis(4)
    bivectors = [Bivector(np.sqrt(2.0) * np.eye(6)[i], basis) for i in range(3)]
    assert normalized_form_sum(op, bivectors) == pytest.approx(-0.5)

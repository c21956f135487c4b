import numpy as np
import pytest

from cartandress.core.algebra import ETA, GroupElement, GroupKind, spin_to_lorentz
from cartandress.core.cartan import (
    CartanConnection,
    GaugeMap,
    build_normal_connection,
    coordinate_weyl_tensor,
    covariant_derivative,
    gauge_transform,
    ricci_trace,
    transform_curvature,
    transform_tractor,
)
from cartandress.core.exceptions import FormError
from cartandress.core.factories import FieldBuilder
from cartandress.core.fields import SmoothMap
from cartandress.core.forms import MatrixForm, exterior_derivative, max_residual, wedge
from cartandress.core.sampling import FieldSampler, sl2c_matrix


def _max_diff(a, b, points):
    return max(float(np.max(np.abs(a.values(x) - b.values(x)))) for x in points)


def test_connection_shape_is_checked():
    with pytest.raises(FormError):
        CartanConnection(MatrixForm.zero(1, (4, 4)))


def test_flat_normal_connection_has_no_curvature(minkowski_scenario, points):
    """Minkowski tetrad: every curvature block vanishes."""
    connection = FieldBuilder(minkowski_scenario).connection()
    assert max_residual([connection.curvature.form], points) < 1e-12
    np.testing.assert_allclose(connection.induced_metric()(points[0]), ETA)


def test_bianchi_identity_for_random_connection(rng, points):
    connection = FieldSampler(rng).connection()
    omega = connection.curvature.form
    identity = exterior_derivative(omega) + wedge(connection.form, omega) - wedge(omega, connection.form)
    assert max_residual([identity], points) < 1e-10


def test_curvature_is_gauge_covariant(rng, points):
    sampler = FieldSampler(rng)
    connection = sampler.connection()
    gamma = sampler.gauge_map()
    moved = gauge_transform(connection, gamma).curvature
    expected = transform_curvature(connection.curvature, gamma)
    assert _max_diff(moved.form, expected.form, points) < 1e-9
    assert gamma.metric_residual(points) < 1e-12


def test_tractor_derivative_is_gauge_covariant(rng, points):
    sampler = FieldSampler(rng)
    connection = sampler.connection()
    phi = sampler.polynomial((6,))
    gamma = sampler.boost_map()
    lhs = covariant_derivative(transform_tractor(phi, gamma), gauge_transform(connection, gamma))
    rhs = covariant_derivative(phi, connection).left(gamma.real.inv())
    assert _max_diff(lhs, rhs, points) < 1e-10


def test_covariant_derivative_rejects_other_shapes(rng):
    with pytest.raises(FormError):
        covariant_derivative(SmoothMap.constant(np.zeros(3)), FieldSampler(rng).connection())


def test_gauge_map_inverse_composes_to_identity(rng, points):
    gamma = FieldSampler(rng).gauge_map()
    product = gamma.compose(gamma.inverse())
    for x in points:
        np.testing.assert_allclose(product.real(x), np.eye(6), atol=1e-12)
        np.testing.assert_allclose(product.complex(x), np.eye(4), atol=1e-12)


def test_normal_connection_of_conformally_flat_metric(conformal_scenario, points):
    """Torsion-free, f = 0, trace-free and vanishing Weyl block for Ω(x)η."""
    builder = FieldBuilder(conformal_scenario)
    tetrad = builder.tetrad()
    curv = builder.normal_connection(tetrad).curvature
    assert max_residual([curv.torsion, curv.f, curv.W], points) < 1e-9
    assert max(np.max(np.abs(ricci_trace(curv, tetrad)(x))) for x in points) < 1e-9
    for x in points:
        assert np.max(np.abs(coordinate_weyl_tensor(tetrad.metric, x))) < 1e-10


def test_schouten_shift_breaks_the_trace_condition(minkowski_scenario, points):
    """A constant η-shift of P keeps f = 0 but gives the W block a Ricci trace."""
    builder = FieldBuilder(minkowski_scenario)
    tetrad = builder.tetrad()
    curv = build_normal_connection(tetrad, 1e-2 * ETA).curvature
    assert max_residual([curv.f, curv.torsion], points) < 1e-12
    trace = max(np.max(np.abs(ricci_trace(curv, tetrad)(x))) for x in points)
    assert trace > 1e-3


def test_weyl_gauge_map_scales_soldering_form(minkowski_scenario, points):
    connection = FieldBuilder(minkowski_scenario).connection()
    z = SmoothMap.from_expressions("exp(0.2*x1)")
    moved = gauge_transform(connection, GaugeMap.weyl(z))
    for x in points:
        np.testing.assert_allclose(moved.theta.values(x), z(x) * connection.theta.values(x), atol=1e-12)


def test_pure_gauge_connection_is_flat(rng, points):
    """γ⁻¹dγ has vanishing curvature."""
    gamma = FieldSampler(rng).gauge_map()
    pure = gauge_transform(CartanConnection(MatrixForm.zero(1, (6, 6))), gamma)
    assert max_residual([pure.form], points) > 1e-3
    assert max_residual([pure.curvature.form], points) < 1e-9


def test_constant_gauge_map_acts_by_conjugation(rng, points):
    connection = FieldSampler(rng).connection()
    g = GroupElement.from_factors(1.3, spin_to_lorentz(sl2c_matrix(rng)), np.array([0.2, -0.1, 0.3, 0.05]))
    gamma = GaugeMap(GroupKind.GENERAL, SmoothMap.constant(g.matrix), SmoothMap.constant(np.eye(4, dtype=complex)))
    moved = gauge_transform(connection, gamma)
    g_inv = np.linalg.inv(g.matrix)
    for x in points:
        np.testing.assert_allclose(moved.form.values(x), g_inv @ connection.form.values(x) @ g.matrix, atol=1e-12)

import numpy as np
import pytest

from cartandress.core.algebra import (
    ETA,
    SIGMA,
    ComplexGroupElement,
    ComplexLieElement,
    GroupElement,
    LieElement,
    algebra_iso,
    bracket,
    cayley,
    commutator,
    complex_bracket,
    complex_group_metric_residual,
    embed_vector,
    grade_projection,
    group_metric_residual,
    hermitian_to_vec,
    lorentz_to_spin_generator,
    so24_residual,
    spin_generator_to_lorentz,
    spin_to_lorentz,
    su22_residual,
    vec_to_hermitian,
)
from cartandress.core.exceptions import AlgebraError
from cartandress.core.sampling import lie_element, lorentz_generator, sl2c_matrix


def test_metric_blocks():
    assert SIGMA[0, 5] == SIGMA[5, 0] == -1
    np.testing.assert_array_equal(SIGMA[1:5, 1:5], ETA)


def test_lie_elements_preserve_sigma(rng):
    for _ in range(10):
        assert so24_residual(lie_element(rng)) < 1e-14


def test_grading_is_compatible_with_bracket(rng):
    """[g₋₁, g₁] ⊂ g₀ and [g₁, g₁] = 0."""
    x, y = lie_element(rng), lie_element(rng)
    lower, upper = grade_projection(x, -1), grade_projection(y, 1)
    bracket = commutator(lower, upper)
    np.testing.assert_allclose(grade_projection(bracket, 0), bracket, atol=1e-13)
    assert np.max(np.abs(commutator(upper, grade_projection(x, 1)))) < 1e-13
    with pytest.raises(AlgebraError):
        grade_projection(x, 2)


def test_algebra_iso_is_a_lie_homomorphism_into_su22(rng):
    for _ in range(20):
        x, y = lie_element(rng), lie_element(rng)
        lhs = algebra_iso(commutator(x, y))
        rhs = commutator(algebra_iso(x), algebra_iso(y))
        assert np.max(np.abs(lhs - rhs)) < 1e-12
        assert su22_residual(algebra_iso(x)) < 1e-13


def test_spin_to_lorentz_is_a_double_cover(rng):
    a, b = sl2c_matrix(rng), sl2c_matrix(rng)
    np.testing.assert_allclose(spin_to_lorentz(a @ b), spin_to_lorentz(a) @ spin_to_lorentz(b), atol=1e-12)
    np.testing.assert_allclose(spin_to_lorentz(-a), spin_to_lorentz(a), atol=1e-12)
    lam = spin_to_lorentz(a)
    np.testing.assert_allclose(lam.T @ ETA @ lam, ETA, atol=1e-12)


def test_spin_to_lorentz_rejects_non_unimodular():
    with pytest.raises(AlgebraError):
        spin_to_lorentz(2.0 * np.eye(2))


def test_generator_maps_are_inverse(rng):
    s = lorentz_generator(rng)
    np.testing.assert_allclose(spin_generator_to_lorentz(lorentz_to_spin_generator(s)), s, atol=1e-13)


def test_hermitian_correspondence(rng):
    v = rng.normal(size=4)
    h = vec_to_hermitian(v)
    np.testing.assert_allclose(h, h.conj().T)
    np.testing.assert_allclose(hermitian_to_vec(h), v, atol=1e-14)


def test_embed_vector_sits_off_diagonal(rng):
    e = embed_vector(rng.normal(size=4))
    assert np.max(np.abs(e[0:2, 0:2])) == 0.0
    assert np.max(np.abs(e[2:4, 2:4])) == 0.0


def test_cayley_maps_into_the_group(rng):
    assert group_metric_residual(cayley(lie_element(rng, 0.3))) < 1e-12
    assert abs(np.linalg.det(sl2c_matrix(rng)) - 1.0) < 1e-12


def test_group_factors(rng):
    S = spin_to_lorentz(sl2c_matrix(rng))
    r = rng.normal(size=4)
    g = GroupElement.from_factors(2.0, S, r)
    assert g.metric_residual(relative=True) < 1e-12
    assert g.matrix[0, 0] == pytest.approx(2.0)
    np.testing.assert_allclose(g.matrix[1:5, 1:5], S, atol=1e-12)
    np.testing.assert_allclose(g.matrix[0, 1:5], 2.0 * r, atol=1e-12)
    np.testing.assert_allclose((g @ g.inverse()).matrix, np.eye(6), atol=1e-12)
    z, S2, r2 = g.factors()
    assert z == pytest.approx(2.0)
    np.testing.assert_allclose(S2, S, atol=1e-12)
    np.testing.assert_allclose(r2, r, atol=1e-12)


def test_relative_metric_residual_scales_out_large_entries(rng):
    """Z·S·K₁ with |r| of a few units has entries above 10; round-off is measured against ‖g‖²."""
    S = spin_to_lorentz(sl2c_matrix(rng))
    g = GroupElement.from_factors(4.0, S, np.array([3.0, -2.5, 1.5, 2.0]))
    assert np.max(np.abs(g.matrix)) > 10.0
    assert g.metric_residual(relative=True) <= g.metric_residual()
    assert g.metric_residual(relative=True) < 1e-13
    assert (g @ g).metric_residual(relative=True) < 1e-13
    GroupElement.general(g.matrix)

    broken = g.matrix.copy()
    broken[0, 0] *= 2.0
    assert group_metric_residual(broken, relative=True) > 1e-6


def test_group_constructors_validate():
    with pytest.raises(AlgebraError):
        GroupElement.weyl(-1.0)
    with pytest.raises(AlgebraError):
        GroupElement.lorentz(np.diag([2.0, 1.0, 1.0, 1.0]))
    with pytest.raises(AlgebraError):
        GroupElement.general(np.diag([2.0, 1.0, 1.0, 1.0, 1.0, 1.0]))


def test_complex_lift_preserves_hermitian_form(rng):
    sbar = sl2c_matrix(rng)
    r = rng.normal(size=4)
    lift = ComplexGroupElement.weyl(1.5) @ ComplexGroupElement.lorentz(sbar) @ ComplexGroupElement.boost(r)
    assert lift.metric_residual() < 1e-12
    assert complex_group_metric_residual(lift.inverse().matrix) < 1e-12


def test_complex_lift_intertwines_adjoint_action(rng):
    """algebraIso(g⁻¹Xg) = ḡ⁻¹ algebraIso(X) ḡ for g = Z·S·K₁ and its lift."""
    sbar = sl2c_matrix(rng)
    r = rng.normal(scale=0.5, size=4)
    g = GroupElement.from_factors(0.8, spin_to_lorentz(sbar), r).matrix
    lift = (ComplexGroupElement.weyl(0.8) @ ComplexGroupElement.lorentz(sbar) @ ComplexGroupElement.boost(r)).matrix
    x = lie_element(rng)
    np.testing.assert_allclose(
        algebra_iso(np.linalg.inv(g) @ x @ g), np.linalg.inv(lift) @ algebra_iso(x) @ lift, atol=1e-11
    )


def test_complexified_lie_element(rng):
    np.testing.assert_allclose(LieElement(epsilon=2.0).complexified().matrix, np.diag([1, 1, -1, -1]), atol=1e-14)
    x, y = LieElement.from_matrix(lie_element(rng)), LieElement.from_matrix(lie_element(rng))
    ix, iy = x.complexified(), y.complexified()
    assert isinstance(ix, ComplexLieElement)
    assert ix.su22_residual() < 1e-12
    np.testing.assert_allclose(bracket(x, y).complexified().matrix, complex_bracket(ix, iy).matrix, atol=1e-12)
    total = sum(ix.grade(k).matrix for k in (-1, 0, 1))
    np.testing.assert_allclose(total, ix.matrix, atol=1e-14)
    np.testing.assert_allclose(x.grade(1).complexified().matrix, ix.grade(1).matrix, atol=1e-12)
    with pytest.raises(AlgebraError):
        ix.grade(2)

import numpy as np
import pytest

from cartandress.core.algebra import ETA
from cartandress.core.exceptions import DegenerateFieldError, FormError
from cartandress.core.fields import SmoothMap
from cartandress.core.forms import (
    MatrixForm,
    Tetrad,
    basis,
    exterior_derivative,
    hodge_sign,
    hodge_star,
    max_residual,
    permutation_sign,
    volume_form,
    wedge,
)

MINKOWSKI = SmoothMap.constant(ETA, "η")


def _one_form(*exprs):
    return MatrixForm.from_components(
        1, {(mu,): SmoothMap.from_expressions(e) for mu, e in enumerate(exprs)}, ()
    )


def test_basis_and_permutation_sign():
    assert basis(2) == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    assert permutation_sign((1, 0, 2, 3)) == -1
    assert permutation_sign((0, 0)) == 0


def test_dd_vanishes(points):
    """d∘d = 0 on a polynomial 1-form."""
    omega = _one_form("x1*x2^2", "exp(x0)*x3", "x0*x1*x3", "x2 - x1^3")
    assert max_residual([exterior_derivative(exterior_derivative(omega))], points) < 1e-12


def test_exterior_derivative_of_function(points):
    f = MatrixForm.from_map(SmoothMap.from_expressions("x0^2*x3"))
    df = exterior_derivative(f)
    x = points[0]
    np.testing.assert_allclose(df.values(x), [2 * x[0] * x[3], 0.0, 0.0, x[0] ** 2], atol=1e-12)


def test_wedge_of_one_forms_is_antisymmetric(points):
    a = _one_form("x1", "1", "x0*x2", "0")
    b = _one_form("x3", "x2", "2", "x1")
    assert max_residual([wedge(a, b) + wedge(b, a)], points) < 1e-12


def test_wedge_degree_overflow():
    with pytest.raises(FormError):
        wedge(MatrixForm.zero(3), MatrixForm.zero(2))


def test_double_hodge_star_sign_on_minkowski(points):
    """** = +1 on 1-forms and −1 on 2-forms for Lorentzian signature."""
    omega1 = _one_form("x1", "x0*x2", "1 + x3", "x2")
    omega2 = wedge(omega1, _one_form("x3", "1", "x1", "0"))
    for omega in (omega1, omega2):
        twice = hodge_star(hodge_star(omega, MINKOWSKI), MINKOWSKI)
        sign = hodge_sign(omega.degree, ETA)
        assert max_residual([twice - omega * sign], points) < 1e-12
    assert hodge_sign(1, ETA) == 1
    assert hodge_sign(2, ETA) == -1


def test_volume_form_of_scaled_metric(points):
    """√|det g| = Ω⁴ for g = Ω²η."""
    omega = SmoothMap.from_expressions("1 + 0.1*x0")
    g = (omega * omega) * MINKOWSKI
    vol = volume_form(g)
    for x in points:
        assert vol.values(x)[0] == pytest.approx((1 + 0.1 * x[0]) ** 4)


def test_hodge_star_rejects_degenerate_metric():
    g = SmoothMap.constant(np.diag([1.0, -1.0, -1.0, 0.0]))
    with pytest.raises(DegenerateFieldError) as exc:
        hodge_star(_one_form("1", "0", "0", "0"), g).values(np.zeros(4))
    assert exc.value.point == [0.0, 0.0, 0.0, 0.0]


def test_tetrad_metric_and_regularity(points):
    e = SmoothMap.from_expressions([["1 + 0.1*x1", "0", "0", "0"], ["0", "1", "0.2*x0", "0"],
                                    ["0", "0", "1", "0"], ["0", "0", "0", "1"]])
    tetrad = Tetrad(e)
    x = points[1]
    ev = e(x)
    np.testing.assert_allclose(tetrad.metric(x), ev.T @ ETA @ ev, atol=1e-14)
    np.testing.assert_allclose(tetrad.inverse(x) @ ev, np.eye(4), atol=1e-12)
    assert tetrad.signature(x) == (1, 3)
    tetrad.check_regular(points)

    with pytest.raises(DegenerateFieldError):
        Tetrad(SmoothMap.constant(np.zeros((4, 4)))).check_regular(points)


def test_soldering_form_round_trip(points):
    tetrad = Tetrad(SmoothMap.from_expressions([["1", "x2", "0", "0"], ["0", "1", "0", "0"],
                                                ["0", "0", "1", "x0"], ["0", "0", "0", "1"]]))
    rebuilt = Tetrad.from_theta(tetrad.theta)
    for x in points:
        np.testing.assert_allclose(rebuilt.e(x), tetrad.e(x))


def test_wedge_is_associative(points):
    a = _one_form("x1", "1", "x0*x2", "0")
    b = _one_form("x3", "x2", "2", "x1")
    c = _one_form("1 + x0", "0", "x3^2", "x2")
    assert max_residual([wedge(wedge(a, b), c) - wedge(a, wedge(b, c))], points) < 1e-12


@pytest.mark.parametrize("degree", [1, 2])
def test_leibniz_rule(points, degree):
    """d(ω∧χ) = dω∧χ + (−1)^p ω∧dχ for a p-form ω."""
    omega = _one_form("x1*x2", "exp(x0)", "x3", "x0^2")
    if degree == 2:
        omega = wedge(omega, _one_form("0", "x2", "1", "x1*x3"))
    chi = _one_form("x3^2", "x0*x1", "1", "exp(x2)")
    lhs = exterior_derivative(wedge(omega, chi))
    rhs = wedge(exterior_derivative(omega), chi) + wedge(omega, exterior_derivative(chi)) * (-1) ** degree
    assert max_residual([lhs - rhs], points) < 1e-11

import numpy as np
import pytest

from cartandress.core.algebra import GroupKind, weyl_matrix
from cartandress.core.cartan import CartanConnection, gauge_transform, transform_tractor
from cartandress.core.dressing import (
    Stage,
    build_twisting_map,
    compare_fields,
    dress_all,
    dress_k1,
    dress_weyl,
    dressed_block_formula,
    extract_dilaton,
    extract_u1,
    gauge_fields,
    max_difference,
    twisted_transform,
    verify_residual_law,
)
from cartandress.core.exceptions import DegenerateFieldError, UnsupportedResidualLawError
from cartandress.core.factories import FieldBuilder
from cartandress.core.fields import SmoothMap
from cartandress.core.forms import MatrixForm, Tetrad, max_residual
from cartandress.core.sampling import FieldSampler


@pytest.fixture
def conformal_fields(conformal_scenario):
    return FieldBuilder(conformal_scenario).fields()


@pytest.fixture
def generic_fields(generic_scenario):
    return FieldBuilder(generic_scenario).fields()


def test_k1_dressing_removes_the_weyl_block(generic_fields, points):
    assert max_residual([generic_fields.connection.a], points) > 1e-3
    assert max_residual([dress_k1(generic_fields).connection.a], points) < 1e-12


def test_u1_transforms_like_a_dressing_field(generic_fields, rng, points):
    """u₁^γ = γ⁻¹u₁ for K₁-valued γ."""
    gamma = FieldSampler(rng).boost_map()
    u1 = extract_u1(generic_fields.connection).u1
    moved = extract_u1(gauge_transform(generic_fields.connection, gamma)).u1
    assert max_difference(moved, gamma.real.inv() @ u1, points) < 1e-10


def test_k1_dressed_fields_are_boost_invariant(generic_fields, rng, points):
    gamma = FieldSampler(rng).boost_map()
    residuals = compare_fields(dress_k1(gauge_fields(generic_fields, gamma)), dress_k1(generic_fields), points)
    assert max(residuals.values()) < 1e-9


def test_dilaton_is_inverse_sigma(conformal_fields, points):
    phi = extract_dilaton(conformal_fields.tractor)
    for x in points:
        assert phi(x) == pytest.approx(1.0 / (1.0 + 0.2 * x[1]))


def test_dilaton_rejects_vanishing_sigma(points):
    tractor = SmoothMap.from_expressions(["0", "0", "0", "0", "0", "0"])
    with pytest.raises(DegenerateFieldError):
        extract_dilaton(tractor)(points[0])


def test_twisting_map_composition_law(conformal_fields, rng, points):
    """C(z'z) = C(z')Z'⁻¹C(z)Z' while C(z'z) ≠ C(z')C(z)."""
    sampler = FieldSampler(rng)
    tetrad = conformal_fields.tetrad
    z = sampler.polynomial(scale=0.5).exp()
    zp = sampler.polynomial(scale=0.5).exp()
    c, cp, czz = (build_twisting_map(w, tetrad) for w in (z, zp, zp * z))
    Zp = SmoothMap.lift(weyl_matrix, zp, shape=(6, 6))
    assert max_difference(czz.C, cp.C @ Zp.inv() @ c.C @ Zp, points) < 1e-10
    assert max_difference(czz.C, cp.C @ c.C, points) > 1e-3


def test_twisting_map_rejects_non_positive_parameter(conformal_fields, points):
    twisting = build_twisting_map(SmoothMap.from_expressions("-1 + 0*x0"), conformal_fields.tetrad)
    with pytest.raises(DegenerateFieldError):
        twisting.C(points[0])


def test_weyl_dressing_normalizes_tractor_and_rescales_metric(conformal_fields, points):
    chain = dress_all(conformal_fields)
    phi = chain.dilaton
    for x in points:
        assert chain.weyl.tractor(x)[5] == 1.0
        np.testing.assert_allclose(
            chain.weyl.tetrad.metric(x), phi(x) ** 2 * conformal_fields.tetrad.metric(x), atol=1e-12
        )
    assert chain.stage(Stage.K1) is chain.k1


def test_weyl_dressed_fields_erase_weyl_maps(conformal_fields, rng, points):
    gamma = FieldSampler(rng).weyl_map()
    moved = dress_all(gauge_fields(conformal_fields, gamma)).weyl
    residuals = compare_fields(moved, dress_all(conformal_fields).weyl, points)
    assert max(residuals.values()) < 1e-8


def test_residual_weyl_law_on_k1_stage(conformal_fields, rng, points):
    """Redressing after the twisted Weyl action reproduces the Weyl-dressed stage."""
    chain = dress_all(conformal_fields)
    z = FieldSampler(rng).weyl_factor()
    residuals = compare_fields(dress_weyl(twisted_transform(chain.k1, z)), chain.weyl, points)
    assert max(residuals.values()) < 1e-8


@pytest.mark.parametrize(
    "stage,kind",
    [(Stage.K1, GroupKind.LORENTZ), (Stage.K1, GroupKind.WEYL), (Stage.WEYL, GroupKind.LORENTZ)],
)
def test_residual_laws(conformal_fields, rng, points, stage, kind):
    sampler = FieldSampler(rng)
    gamma = sampler.lorentz_map() if kind == GroupKind.LORENTZ else sampler.weyl_map()
    report = verify_residual_law(conformal_fields, stage, gamma, points)
    assert report.max_residual < 1e-8


def test_residual_law_unsupported_pair(conformal_fields, rng, points):
    with pytest.raises(UnsupportedResidualLawError):
        verify_residual_law(conformal_fields, Stage.WEYL, FieldSampler(rng).weyl_map(), points)
    with pytest.raises(UnsupportedResidualLawError):
        verify_residual_law(dress_k1(conformal_fields), Stage.K1, FieldSampler(rng).lorentz_map(), points)


def test_dressed_block_formula_matches_conjugation(conformal_fields, points):
    chain = dress_all(conformal_fields)
    formula = dressed_block_formula(chain.k1, chain.twisting)
    assert max_difference(formula.form, chain.weyl.connection.form, points) < 1e-9


def test_u1_of_unit_weyl_block(points):
    """a = dx⁰ on a flat chart gives q = (1, 0, 0, 0)."""
    tetrad = Tetrad(SmoothMap.constant(np.eye(4), "1"))
    a = MatrixForm.from_components(
        1, {(mu,): SmoothMap.constant(1.0 if mu == 0 else 0.0) for mu in range(4)}, ()
    )
    connection = CartanConnection.from_blocks(a, MatrixForm.zero(1, (4, 4)), MatrixForm.zero(1, (4,)), tetrad.theta)
    dressing = extract_u1(connection, points)
    for x in points:
        np.testing.assert_allclose(dressing.q(x), [1.0, 0.0, 0.0, 0.0], atol=1e-14)


def test_tractor_dressing_law_yields_unit_last_component(conformal_fields, points):
    chain = dress_all(conformal_fields)
    assert max_difference(chain.tractor_product, chain.weyl.tractor, points) < 1e-12
    for x in points:
        assert chain.tractor_product(x)[5] == pytest.approx(1.0, abs=1e-12)


def test_wrong_twisting_parameter_misses_unit_last_component(conformal_fields, points):
    chain = dress_all(conformal_fields)
    doubled = build_twisting_map(2.0 * chain.dilaton, chain.k1.tetrad)
    product = transform_tractor(chain.k1.tractor, doubled.gauge_map)
    for x in points:
        assert product(x)[5] == pytest.approx(2.0)


def test_twisting_map_lorentz_law(conformal_fields, rng, points):
    """C(φ)^S = S⁻¹C(φ)S when built on the Lorentz-rotated soldering form."""
    chain = dress_all(conformal_fields)
    gamma = FieldSampler(rng).lorentz_map()
    rotated = gauge_transform(chain.k1.connection, gamma).tetrad
    moved = build_twisting_map(chain.dilaton, rotated)
    assert max_difference(moved.C, gamma.real.inv() @ chain.twisting.C @ gamma.real, points) < 1e-10
    assert max_difference(moved.C_bar, gamma.complex.inv() @ chain.twisting.C_bar @ gamma.complex, points) < 1e-10

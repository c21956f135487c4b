import numpy as np
import pytest

from cartandress.core.algebra import ComplexGroupElement, GroupElement, spin_to_lorentz
from cartandress.core.dressing import Stage, dress_all, gauge_fields
from cartandress.core.exceptions import DegenerateFieldError, LagrangianError
from cartandress.core.factories import FieldBuilder
from cartandress.core.lagrangian import (
    LagrangianDensity,
    LagrangianParams,
    lagrangian_density,
    pairing,
    potential,
    potential_differential,
    shell_representative,
    sme_matrix,
    sme_term,
    vev_mass,
)
from cartandress.core.models import Scenario
from cartandress.core.sampling import FieldSampler, sl2c_matrix
from cartandress.core.spinor import dirac_pairing


def test_beta_must_be_positive():
    with pytest.raises(LagrangianError):
        LagrangianParams(alpha=-1.0, beta=0.0)
    with pytest.raises(LagrangianError):
        LagrangianParams(alpha=-1.0, beta=-2.0)


def test_pairing_uses_tractor_metric():
    phi = np.array([-0.5, 0.0, 0.0, 0.0, 0.0, 1.0])
    assert pairing(phi, phi) == pytest.approx(1.0)
    ell = np.array([0.0, 1.0, 2.0, 0.0, 0.0, 0.0])
    assert pairing(ell, ell) == pytest.approx(1.0 - 4.0)


@pytest.mark.parametrize("alpha,beta,mass", [(-2.0, 1.0, 1.0), (-1.0, 2.0, 0.5)])
def test_vev_mass(alpha, beta, mass):
    report = vev_mass(LagrangianParams(alpha, beta))
    assert report.mass == pytest.approx(mass)
    assert report.mass_defined
    assert report.vev_norm_squared == pytest.approx(mass**2)
    assert report.dv_residual < 1e-12


def test_mass_undefined_for_positive_alpha():
    report = vev_mass(LagrangianParams(1.0, 1.0))
    assert report.mass is None
    assert report.to_dict()["mass_defined"] is False


def test_shell_representative_sits_on_the_shell():
    params = LagrangianParams(-2.0, 1.0)
    phi = shell_representative(params)
    assert pairing(phi, phi) == pytest.approx(-params.alpha / (2 * params.beta))
    np.testing.assert_allclose(potential_differential(phi, params), np.zeros(6), atol=1e-14)


def test_potential_differential_matches_finite_differences(rng):
    params = LagrangianParams(-1.0, 2.0)
    step = 1e-6
    for _ in range(5):
        phi = rng.normal(scale=0.5, size=6)
        numeric = np.array([
            (potential(phi + step * e, params) - potential(phi - step * e, params)) / (2 * step) for e in np.eye(6)
        ])
        np.testing.assert_allclose(potential_differential(phi, params), numeric, atol=1e-7)


def test_sme_term_splits_into_scalar_and_vector_parts(rng):
    psi = FieldSampler(rng).spinor()
    phi = np.array([0.3, 0.1, -0.2, 0.4, 0.05, 1.0])
    term = sme_term(phi, psi)
    scalar = -(dirac_pairing(psi, np.diag([0.3, 0.3, 1.0, 1.0]) @ psi))
    assert term.full == pytest.approx(term.contraction + scalar)


def test_flat_vacuum_density_vanishes(minkowski_scenario, points):
    """The null tractor (0, 0, 0, 0, 0, 1) is evaluated at every stage without a Yukawa error."""
    chain = dress_all(FieldBuilder(minkowski_scenario).fields())
    density = LagrangianDensity(chain, LagrangianParams(-2.0, 1.0))
    for x in points:
        for stage, terms in density.evaluate_all(x).items():
            assert abs(terms.total) < 1e-12, stage


def test_round_off_negative_norm_counts_as_null(points):
    scenario = Scenario.from_dict(
        {"name": "near_null", "tractor": ["5e-16", "0", "0", "0", "0", "1"], "twistor": ["1", "0", "0.5", "0"]}
    )
    chain = dress_all(FieldBuilder(scenario).fields())
    for terms in LagrangianDensity(chain, LagrangianParams(-2.0, 1.0)).evaluate_all(points[0]).values():
        assert terms.yukawa == 0.0


def test_density_facade_matches_class(conformal_scenario, points):
    chain = dress_all(FieldBuilder(conformal_scenario).fields())
    params = LagrangianParams(-1.0, 2.0)
    x = points[0]
    expected = LagrangianDensity(chain, params).evaluate(Stage.WEYL, x)
    assert lagrangian_density(chain, Stage.WEYL, params, x).total == pytest.approx(expected.total)


def test_vev_configuration_has_constant_potential(vev_scenario, points):
    chain = dress_all(FieldBuilder(vev_scenario).fields())
    terms = LagrangianDensity(chain, LagrangianParams(-2.0, 1.0)).evaluate(Stage.UNDRESSED, points[0])
    # ⟨φ,φ⟩ = 1 gives V = −2 + 1 on a flat chart
    assert terms.potential.real == pytest.approx(1.0)
    assert terms.yang_mills == pytest.approx(0.0)


@pytest.mark.slow
def test_density_agrees_across_stages(conformal_scenario, points):
    chain = dress_all(FieldBuilder(conformal_scenario).fields())
    density = LagrangianDensity(chain, LagrangianParams(-1.0, 2.0))
    assert density.max_stage_delta(points[:2]) < 1e-7


@pytest.mark.slow
def test_density_is_gauge_invariant(conformal_scenario, rng, points):
    fields = FieldBuilder(conformal_scenario).fields()
    params = LagrangianParams(-1.0, 2.0)
    density = LagrangianDensity(dress_all(fields), params)
    moved = LagrangianDensity(dress_all(gauge_fields(fields, FieldSampler(rng).gauge_map())), params)
    x = points[0]
    assert moved.evaluate(Stage.UNDRESSED, x).total == pytest.approx(density.evaluate(Stage.UNDRESSED, x).total, abs=1e-7)


def test_table_has_one_row_per_point_and_stage(minkowski_scenario, points):
    chain = dress_all(FieldBuilder(minkowski_scenario).fields())
    rows = LagrangianDensity(chain, LagrangianParams(-2.0, 1.0)).table(points[:2])
    assert len(rows) == 6
    assert {row["stage"] for row in rows} == {s.value for s in Stage}
    assert all(row["stage_delta"] < 1e-12 for row in rows)
    assert {"total_re", "total_im", "x0", "point"} <= set(rows[0])


def test_negative_tractor_norm_is_degenerate(points):
    scenario = Scenario.from_dict({"name": "spacelike", "tractor": ["0.5", "0", "0", "0", "0", "1"]})
    chain = dress_all(FieldBuilder(scenario).fields())
    with pytest.raises(DegenerateFieldError) as exc:
        LagrangianDensity(chain, LagrangianParams(-2.0, 1.0)).evaluate(Stage.UNDRESSED, points[0])
    assert exc.value.point == pytest.approx(list(points[0]))


def test_sme_matrix_is_lorentz_equivariant(rng):
    """S⁻¹φ ↦ S̄⁻¹φ̄S̄, so −⟨ψ, φ̄ψ⟩ is unchanged when ψ moves to S̄⁻¹ψ."""
    sbar = sl2c_matrix(rng)
    S = GroupElement.lorentz(spin_to_lorentz(sbar)).matrix
    S_bar = ComplexGroupElement.lorentz(sbar).matrix
    phi = np.array([0.3, 0.1, -0.2, 0.4, 0.05, 1.0])
    psi = FieldSampler(rng).spinor()
    moved = np.linalg.solve(S, phi)
    np.testing.assert_allclose(sme_matrix(moved), np.linalg.inv(S_bar) @ sme_matrix(phi) @ S_bar, atol=1e-11)
    assert sme_term(moved, np.linalg.solve(S_bar, psi)).full == pytest.approx(sme_term(phi, psi).full, abs=1e-11)


def test_yukawa_term_at_vev_gives_mass_term(points):
    params = LagrangianParams(-2.0, 1.0)
    report = vev_mass(params)
    phi = shell_representative(params)
    psi = np.array([0.5, 0.2 + 0.1j, 1.0, -0.3j])
    scenario = Scenario.from_dict({
        "name": "vev_yukawa",
        "tractor": [repr(float(v)) for v in phi],
        "twistor": ["0.5", "0.2 + 0.1*I", "1", "-0.3*I"],
    })
    density = LagrangianDensity(dress_all(FieldBuilder(scenario).fields()), params)
    for stage, terms in density.evaluate_all(points[0]).items():
        assert terms.yukawa == pytest.approx(-report.mass * dirac_pairing(psi, psi), abs=1e-12), stage

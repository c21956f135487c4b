"""
Verification suites.

Each suite returns named residuals; the verifier compares their maximum with the suite
tolerance. Suites draw every random quantity from the generator in their context, so a
suite's residuals depend only on the scenario, the seed and the suite name.
"""

from typing import TYPE_CHECKING, Dict

import numpy as np

from cartandress.core.algebra import (
    COMPLEX_GRADE_MASKS,
    ETA,
    SIGMA_BAR,
    ComplexGroupElement,
    GroupElement,
    GroupKind,
    LieElement,
    algebra_iso,
    bracket,
    commutator,
    complex_bracket,
    complex_group_metric_residual,
    complex_weyl_matrix,
    embed_vector,
    hermitian_to_vec,
    lorentz_to_spin_generator,
    spin_generator_to_lorentz,
    spin_to_lorentz,
    vec_to_hermitian,
    weyl_matrix,
)
from cartandress.core.cartan import (
    CartanConnection,
    build_normal_connection,
    coordinate_weyl_tensor,
    covariant_derivative,
    curvature,
    frame_components,
    frame_weyl_to_coordinates,
    gauge_transform,
    ricci_trace,
    transform_curvature,
    transform_twistor,
)
from cartandress.core.dressing import (
    DressedFields,
    Stage,
    build_twisting_map,
    compare_fields,
    dress_all,
    dress_k1,
    dress_weyl,
    dressed_block_formula,
    extract_u1,
    gauge_fields,
    max_difference,
    twisted_transform,
    verify_residual_law,
)
from cartandress.core.fields import SmoothMap
from cartandress.core.forms import MatrixForm, Tetrad, basis, exterior_derivative, max_residual, wedge
from cartandress.core.interfaces import VerificationSuite
from cartandress.core.jets import DIM
from cartandress.core.lagrangian import (
    LagrangianDensity,
    LagrangianParams,
    PotentialReport,
    potential,
    potential_differential,
    vev_mass,
)
from cartandress.core.sampling import lie_element, lorentz_generator, sl2c_matrix
from cartandress.core.spinor import (
    GAMMA,
    GAMMA5,
    GAMMA5_UPPER,
    GAMMA_UPPER,
    P_LEFT,
    P_RIGHT,
    clifford_residual,
    curved_gamma,
    dirac_operator,
    dirac_pairing,
    gamma_equivariance_residual,
    spin_operator,
)
from cartandress.core.spinor import embed_vector as gamma_embed_vector

if TYPE_CHECKING:
    from cartandress.core.factories import SuiteContext

Residuals = Dict[str, float]


def _max_abs(value) -> float:
    return float(np.max(np.abs(value), initial=0.0))


def _merge_max(target: Residuals, update: Residuals) -> None:
    for key, value in update.items():
        target[key] = max(target.get(key, 0.0), value)


class LieIsoSuite(VerificationSuite):
    name = "lie_iso"
    reference = "algebraIso is a graded Lie algebra isomorphism onto su(2,2); spinToLorentz is a homomorphism with kernel {±1}"
    default_tolerance = 1e-10
    pairs = 100

    def evaluate(self, context: "SuiteContext") -> Residuals:
        rng = context.rng
        out = {"bracket": 0.0, "su22": 0.0, "grading": 0.0, "spin_homomorphism": 0.0,
               "lorentz_membership": 0.0, "generator_inverse": 0.0, "hermitian_inverse": 0.0}
        for _ in range(self.pairs):
            x, y = LieElement.from_matrix(lie_element(rng)), LieElement.from_matrix(lie_element(rng))
            ix, iy = x.complexified(), y.complexified()
            image = bracket(x, y).complexified().matrix
            out["bracket"] = max(out["bracket"], _max_abs(image - complex_bracket(ix, iy).matrix))
            out["su22"] = max(out["su22"], ix.su22_residual())
            for k in COMPLEX_GRADE_MASKS:
                graded = x.grade(k).complexified()
                out["grading"] = max(out["grading"], _max_abs(graded.matrix - graded.grade(k).matrix))

            a, b = sl2c_matrix(rng), sl2c_matrix(rng)
            la, lb = spin_to_lorentz(a), spin_to_lorentz(b)
            out["spin_homomorphism"] = max(out["spin_homomorphism"], _max_abs(spin_to_lorentz(a @ b) - la @ lb))
            out["lorentz_membership"] = max(out["lorentz_membership"], _max_abs(la.T @ ETA @ la - ETA))

            s = lorentz_generator(rng)
            out["generator_inverse"] = max(
                out["generator_inverse"], _max_abs(spin_generator_to_lorentz(lorentz_to_spin_generator(s)) - s)
            )
            v = rng.normal(size=DIM)
            out["hermitian_inverse"] = max(out["hermitian_inverse"], _max_abs(hermitian_to_vec(vec_to_hermitian(v)) - v))

        eye2 = np.eye(2, dtype=complex)
        out["kernel"] = max(_max_abs(spin_to_lorentz(eye2) - np.eye(DIM)), _max_abs(spin_to_lorentz(-eye2) - np.eye(DIM)))
        return out


class GroupMetricSuite(VerificationSuite):
    name = "group_metric"
    reference = "Z·S·K₁ preserves Σ, closes under products, determines (z, S, r) uniquely and its complex lift preserves Σ̄"
    default_tolerance = 1e-10
    samples = 50

    def _factors(self, context: "SuiteContext"):
        rng = context.rng
        sbar = sl2c_matrix(rng)
        return float(np.exp(rng.normal(scale=0.3))), sbar, rng.normal(scale=0.5, size=DIM)

    def evaluate(self, context: "SuiteContext") -> Residuals:
        out: Residuals = {}
        for _ in range(self.samples):
            z, sbar, r = self._factors(context)
            S = spin_to_lorentz(sbar)
            g = GroupElement.from_factors(z, S, r)
            z2, sbar2, r2 = self._factors(context)
            h = GroupElement.from_factors(z2, spin_to_lorentz(sbar2), r2)

            lift = ComplexGroupElement.weyl(z) @ ComplexGroupElement.lorentz(sbar) @ ComplexGroupElement.boost(r)
            x = lie_element(context.rng)
            adjoint_real = algebra_iso(np.linalg.inv(g.matrix) @ x @ g.matrix)
            adjoint_complex = np.linalg.inv(lift.matrix) @ algebra_iso(x) @ lift.matrix

            # entries of g grow like z·|r|², so every residual is taken relative to its scale
            rz, rS, rr = g.factors()
            recovered = max(abs(rz - z) / z, _max_abs(rS - S) / max(1.0, _max_abs(S)), _max_abs(rr - r) / max(1.0, _max_abs(r)))
            conjugation_scale = max(1.0, float(np.linalg.cond(g.matrix)) * _max_abs(x))
            _merge_max(out, {
                "metric": g.metric_residual(relative=True),
                "closure": (g @ h).metric_residual(relative=True),
                "factor_recovery": recovered,
                "complex_metric": lift.metric_residual(relative=True),
                "lift_equivariance": _max_abs(adjoint_real - adjoint_complex) / conjugation_scale,
            })
        return out


class StructureEquationSuite(VerificationSuite):
    name = "structure_equation"
    reference = "Ω = dϖ + ϖ∧ϖ agrees with ∂_μϖ_ν − ∂_νϖ_μ + [ϖ_μ, ϖ_ν] from central differences"
    default_tolerance = 1e-6

    def evaluate(self, context: "SuiteContext") -> Residuals:
        connection = context.sampler.connection()
        omega = curvature(connection).form
        h = context.config.fd_step
        worst = 0.0
        for x in context.points:
            values = omega.values(x)

            def shifted(mu, step):
                y = np.array(x, dtype=float)
                y[mu] += step
                return connection.form.values(y)

            here = connection.form.values(x)
            derivs = [(shifted(mu, h) - shifted(mu, -h)) / (2 * h) for mu in range(DIM)]
            for k, (mu, nu) in enumerate(basis(2)):
                oracle = derivs[mu][nu] - derivs[nu][mu] + commutator(here[mu], here[nu])
                worst = max(worst, _max_abs(values[k] - oracle))
        return {"finite_difference": worst}


class BianchiSuite(VerificationSuite):
    name = "bianchi"
    reference = "dΩ + ϖ∧Ω − Ω∧ϖ = 0"
    default_tolerance = 1e-8

    @staticmethod
    def _residual(connection: CartanConnection, points) -> float:
        omega = connection.curvature.form
        identity = exterior_derivative(omega) + wedge(connection.form, omega) - wedge(omega, connection.form)
        return max_residual([identity], points)

    def evaluate(self, context: "SuiteContext") -> Residuals:
        return {
            "scenario": self._residual(context.fields.connection, context.points),
            "random": self._residual(context.sampler.connection(), context.points),
        }


class GaugeCovarianceSuite(VerificationSuite):
    name = "gauge_covariance"
    reference = "Ω^γ = γ⁻¹Ωγ, (Dφ)^γ = γ⁻¹Dφ and (D̄ψ)^γ = γ̄⁻¹D̄ψ for γ in every subgroup of H"
    default_tolerance = 1e-8

    def evaluate(self, context: "SuiteContext") -> Residuals:
        fields = context.fields
        points = context.points
        d_phi = covariant_derivative(fields.tractor, fields.connection)
        d_psi = covariant_derivative(fields.twistor, fields.connection)
        out: Residuals = {}
        for kind in (GroupKind.WEYL, GroupKind.LORENTZ, GroupKind.BOOST, GroupKind.GENERAL):
            gamma = context.gauge_map(kind)
            moved = gauge_fields(fields, gamma)
            prefix = kind.value
            out[f"{prefix}_group"] = gamma.metric_residual(points)
            out[f"{prefix}_curvature"] = max_difference(
                moved.curvature.form, transform_curvature(fields.curvature, gamma).form, points
            )
            out[f"{prefix}_tractor"] = max_difference(
                covariant_derivative(moved.tractor, moved.connection), d_phi.left(gamma.real.inv()), points
            )
            out[f"{prefix}_twistor"] = max_difference(
                covariant_derivative(moved.twistor, moved.connection),
                d_psi.left(gamma.complex.inv(), complex),
                points,
            )
        return out


class NormalitySuite(VerificationSuite):
    name = "normality"
    reference = "the normal connection has Θ = 0, f = 0 and a Ricci-trace-free W block equal to the Weyl tensor"
    default_tolerance = 1e-7

    def evaluate(self, context: "SuiteContext") -> Residuals:
        tetrad = context.builder.tetrad()
        connection = context.builder.normal_connection(tetrad)
        curv = connection.curvature
        trace = ricci_trace(curv, tetrad)
        weyl_frame = frame_components(curv.W, tetrad.inverse)
        trace_worst = oracle_worst = 0.0
        for x in context.points:
            trace_worst = max(trace_worst, _max_abs(trace(x)))
            coordinates = frame_weyl_to_coordinates(weyl_frame(x), tetrad.e(x))
            oracle_worst = max(oracle_worst, _max_abs(coordinates - coordinate_weyl_tensor(tetrad.metric, x)))
        return {
            "torsion": max_residual([curv.torsion], context.points),
            "f": max_residual([curv.f], context.points),
            "w_trace": trace_worst,
            "weyl_oracle": oracle_worst,
        }


class U1DressingLawSuite(VerificationSuite):
    name = "u1_dressing_law"
    reference = "u₁^γ = γ⁻¹u₁ and ū₁^γ = γ̄⁻¹ū₁ for γ ∈ K₁; the ε-block of ϖ₁ vanishes"
    default_tolerance = 1e-9
    samples = 3

    def evaluate(self, context: "SuiteContext") -> Residuals:
        fields = context.fields
        dressing = extract_u1(fields.connection, context.points)
        out = {"epsilon_block": max_residual([dress_k1(fields, dressing).connection.a], context.points)}
        for i in range(self.samples):
            gamma = context.gauge_map(GroupKind.BOOST) if i == 0 else context.sampler.boost_map()
            moved = extract_u1(gauge_transform(fields.connection, gamma))
            _merge_max(out, {
                "real": max_difference(moved.u1, gamma.real.inv() @ dressing.u1, context.points),
                "complex": max_difference(moved.u1_bar, gamma.complex.inv() @ dressing.u1_bar, context.points),
            })
        return out


class K1InvarianceSuite(VerificationSuite):
    name = "k1_invariance"
    reference = "the K₁-dressed ϖ₁, Ω₁, φ₁ and ψ₁ are invariant under K₁ gauge transformations"
    default_tolerance = 1e-8
    samples = 20

    def evaluate(self, context: "SuiteContext") -> Residuals:
        fields = context.fields
        reference = context.chain.k1
        out: Residuals = {}
        for i in range(self.samples):
            gamma = context.gauge_map(GroupKind.BOOST) if i == 0 else context.sampler.boost_map()
            _merge_max(out, compare_fields(dress_k1(gauge_fields(fields, gamma)), reference, context.points))
        return out


class TwistingMapSuite(VerificationSuite):
    name = "twisting_map"
    reference = "C(z'z) = C(z')Z'⁻¹C(z)Z' although C(z'z) ≠ C(z')C(z); C(φ)^S = S⁻¹C(φ)S; C(φ) is K₁-invariant"
    default_tolerance = 1e-9
    witness_threshold = 1e-3

    def evaluate(self, context: "SuiteContext") -> Residuals:
        points = context.points
        sampler = context.sampler
        tetrad = context.chain.k1.tetrad
        z = sampler.polynomial(scale=0.5).exp()
        zp = sampler.polynomial(scale=0.5).exp()
        c, cp, czz = (build_twisting_map(w, tetrad) for w in (z, zp, zp * z))

        Zp = SmoothMap.lift(weyl_matrix, zp, shape=(6, 6), label="Z'")
        Zp_bar = SmoothMap.lift(complex_weyl_matrix, zp, shape=(4, 4), label="Z̄'")
        law = max_difference(czz.C, cp.C @ Zp.inv() @ c.C @ Zp, points)
        law_bar = max_difference(czz.C_bar, cp.C_bar @ Zp_bar.inv() @ c.C_bar @ Zp_bar, points)
        witness = max_difference(czz.C, cp.C @ c.C, points)

        lorentz = context.gauge_map(GroupKind.LORENTZ)
        rotated = build_twisting_map(context.chain.dilaton, gauge_transform(context.chain.k1.connection, lorentz).tetrad)
        dilaton_map = context.chain.twisting
        lorentz_law = max(
            max_difference(rotated.C, lorentz.real.inv() @ dilaton_map.C @ lorentz.real, points),
            max_difference(rotated.C_bar, lorentz.complex.inv() @ dilaton_map.C_bar @ lorentz.complex, points),
        )

        boosted = dress_all(gauge_fields(context.fields, context.gauge_map(GroupKind.BOOST)))
        return {
            "composition": law,
            "composition_complex": law_bar,
            "non_homomorphism": max(0.0, self.witness_threshold - witness),
            "lorentz_law": lorentz_law,
            "group": c.gauge_map.metric_residual(points),
            "dilaton_k1_invariance": max_difference(boosted.twisting.C, dilaton_map.C, points),
        }


class ResidualLawsSuite(VerificationSuite):
    name = "residual_laws"
    reference = "residual laws: K₁ stage and Weyl-dressed stage transform covariantly under Lorentz maps; the K₁ stage transforms through C(z) under Weyl maps"
    default_tolerance = 1e-8

    def evaluate(self, context: "SuiteContext") -> Residuals:
        out: Residuals = {}
        for stage, kind in ((Stage.K1, GroupKind.LORENTZ), (Stage.K1, GroupKind.WEYL), (Stage.WEYL, GroupKind.LORENTZ)):
            report = verify_residual_law(context.fields, stage, context.gauge_map(kind), context.points)
            out.update({f"{stage.value}_{kind.value}_{k}": v for k, v in report.residuals.items()})
        return out


class WeylErasureSuite(VerificationSuite):
    name = "weyl_erasure"
    reference = "Weyl-dressed fields are invariant under Weyl and K₁ maps; bs g = φ²g; bs φ ends in exactly 1"
    default_tolerance = 1e-7

    def evaluate(self, context: "SuiteContext") -> Residuals:
        fields = context.fields
        chain = context.chain
        points = context.points
        out: Residuals = {}
        for kind in (GroupKind.WEYL, GroupKind.BOOST):
            moved = dress_all(gauge_fields(fields, context.gauge_map(kind))).weyl
            out.update({f"{kind.value}_{k}": v for k, v in compare_fields(moved, chain.weyl, points).items()})

        z = context.sampler.weyl_factor()
        redressed = dress_weyl(twisted_transform(chain.k1, z))
        out.update({f"k1_weyl_{k}": v for k, v in compare_fields(redressed, chain.weyl, points).items()})

        phi = chain.dilaton
        out["metric_rescaling"] = max_difference(chain.weyl.tetrad.metric, (phi * phi) * fields.tetrad.metric, points)
        product = chain.tractor_product
        out["last_component"] = max(abs(float(np.real(product(x)[5])) - 1.0) for x in points)
        out["tractor_dressing_law"] = max_difference(chain.weyl.tractor, product, points)
        return out


class DressedBlockFormulaSuite(VerificationSuite):
    name = "dressed_block_formula"
    reference = "bs ϖ has blocks φθ, A₁ + θΥ − Υᵗθᵗ, φ⁻¹(P₁ + ∇Υ − ΥθΥ + ½Υ²θᵗ) and a vanishing diagonal"
    default_tolerance = 1e-8

    def evaluate(self, context: "SuiteContext") -> Residuals:
        chain = context.chain
        formula = dressed_block_formula(chain.k1, chain.twisting)
        return {
            "blocks": max_difference(formula.form, chain.weyl.connection.form, context.points),
            "diagonal": max_residual([chain.weyl.connection.a], context.points),
        }


class GammaAlgebraSuite(VerificationSuite):
    name = "gamma_algebra"
    reference = "{γ_a, γ_b} = 2η_ab, γ₅ = diag(1₂, −1₂), γ⁰ = Σ̄, γ_a^S = (S⁻¹)ᵇ_a γ_b and {γ_μ, γ_ν} = 2g_μν"
    default_tolerance = 1e-11
    samples = 10

    def evaluate(self, context: "SuiteContext") -> Residuals:
        rng = context.rng
        eye = np.eye(4)
        hermiticity = max(
            _max_abs(GAMMA[0].conj().T - GAMMA[0]),
            *(_max_abs(GAMMA[k].conj().T + GAMMA[k]) for k in range(1, DIM)),
            _max_abs(GAMMA5.conj().T - GAMMA5),
            _max_abs(GAMMA5_UPPER + GAMMA5),
        )
        projectors = max(
            _max_abs(P_LEFT + P_RIGHT - eye), _max_abs(P_LEFT @ P_RIGHT), _max_abs(P_LEFT @ P_LEFT - P_LEFT)
        )
        grading = 0.0
        for a in range(DIM):
            for b in range(DIM):
                s = spin_operator(a, b)
                grading = max(
                    grading,
                    _max_abs(s[0:2, 2:4]),
                    _max_abs(s[2:4, 0:2]),
                    abs(np.trace(s[0:2, 0:2])),
                    abs(np.trace(s[2:4, 2:4])),
                )

        equivariance = embedding = invariance = 0.0
        for _ in range(self.samples):
            equivariance = max(equivariance, gamma_equivariance_residual(sl2c_matrix(rng)))
            x = rng.normal(size=DIM)
            e = gamma_embed_vector(x)
            embedding = max(embedding, _max_abs(e - embed_vector(x)), _max_abs(e[0:2, 0:2]), _max_abs(e[2:4, 2:4]))
            invariance = max(invariance, complex_group_metric_residual(ComplexGroupElement.lorentz(sl2c_matrix(rng)).matrix))

        chain = context.chain
        tetrad = context.fields.tetrad
        gamma = curved_gamma(tetrad)
        curved = 0.0
        for x in context.points:
            g = tetrad.metric(x)
            gs = gamma.values(x)
            for mu in range(DIM):
                for nu in range(DIM):
                    anti = gs[mu] @ gs[nu] + gs[nu] @ gs[mu]
                    curved = max(curved, _max_abs(anti - 2 * g[mu, nu] * eye))
            for transport in (chain.twisting.C_bar, chain.dressing.u1_bar):
                invariance = max(invariance, complex_group_metric_residual(transport(x)))

        return {
            "clifford": clifford_residual(),
            "gamma5": _max_abs(GAMMA5 - np.diag([1.0, 1.0, -1.0, -1.0])),
            "gamma0": _max_abs(GAMMA_UPPER[0] - SIGMA_BAR),
            "hermiticity": hermiticity,
            "projectors": projectors,
            "grading": grading,
            "equivariance": equivariance,
            "embedding": embedding,
            "pairing_invariance": invariance,
            "curved_clifford": curved,
        }


class DiracOperatorSuite(VerificationSuite):
    name = "dirac_operator"
    reference = "γ∧*Dψ = γ^μD_μψ vol, and (D̸ψ)^S = S̄⁻¹D̸ψ under Lorentz maps"
    default_tolerance = 1e-8

    def evaluate(self, context: "SuiteContext") -> Residuals:
        dressed = context.chain.weyl
        A, tetrad, psi = dressed.connection.A, dressed.tetrad, dressed.twistor
        operator = dirac_operator(psi, A, tetrad)

        gamma = context.gauge_map(GroupKind.LORENTZ)
        base = CartanConnection.from_blocks(MatrixForm.zero(1), A, MatrixForm.zero(1, (DIM,)), tetrad.theta)
        moved = gauge_transform(base, gamma)
        moved_operator = dirac_operator(transform_twistor(psi, gamma), moved.A, moved.tetrad)
        covariance = 0.0
        for x in context.points:
            expected = np.linalg.inv(gamma.complex(x)) @ operator.wedge_form.values(x)[0]
            covariance = max(covariance, _max_abs(moved_operator.wedge_form.values(x)[0] - expected))
        return {"wedge_vs_contracted": operator.residual(context.points), "lorentz_covariance": covariance}


class LagrangianStagesSuite(VerificationSuite):
    name = "lagrangian_stages"
    reference = "the Lagrangian density agrees at the undressed, K₁-dressed and Weyl-dressed stages and is H-invariant"
    default_tolerance = 1e-7

    def evaluate(self, context: "SuiteContext") -> Residuals:
        points = context.points[: context.config.lagrangian_points]
        params = context.params
        density = LagrangianDensity(context.chain, params)
        moved = LagrangianDensity(dress_all(gauge_fields(context.fields, context.gauge_map(GroupKind.GENERAL))), params)
        invariance = max(
            abs(moved.evaluate(Stage.UNDRESSED, x).total - density.evaluate(Stage.UNDRESSED, x).total)
            for x in points
        )
        return {"stage_delta": density.max_stage_delta(points), "gauge_invariance": float(invariance)}


class PotentialVevSuite(VerificationSuite):
    name = "potential_vev"
    reference = "dV = 2(α + 2β⟨φ,φ⟩)⟨φ| matches finite differences, vanishes on ⟨φ,φ⟩ = −α/2β, and m = √(−α/2β)"
    default_tolerance = 1e-6
    samples = 20
    step = 1e-5

    @staticmethod
    def _mass_consistency(report: PotentialReport, psi: np.ndarray, context: "SuiteContext") -> float:
        """Yukawa term of the density at a constant VEV on a flat chart against −m·ψ̄ψ·vol, vol = 1."""
        flat = build_normal_connection(Tetrad(SmoothMap.constant(np.eye(DIM), "1")))
        vacuum = DressedFields(
            Stage.UNDRESSED,
            flat,
            SmoothMap.constant(report.shell_representative, "φ"),
            SmoothMap.constant(psi, "ψ"),
        )
        density = LagrangianDensity(dress_all(vacuum), context.params)
        expected = -report.mass * dirac_pairing(psi, psi)
        worst = 0.0
        for x in context.points[:1]:
            for terms in density.evaluate_all(x).values():
                worst = max(worst, abs(terms.yukawa - expected))
        return worst

    def evaluate(self, context: "SuiteContext") -> Residuals:
        rng = context.rng
        params = context.params
        fd = 0.0
        for _ in range(self.samples):
            phi = rng.normal(scale=0.5, size=6)
            numeric = np.array([
                (potential(phi + self.step * e, params) - potential(phi - self.step * e, params)) / (2 * self.step)
                for e in np.eye(6)
            ])
            fd = max(fd, _max_abs(numeric - potential_differential(phi, params)))

        report = vev_mass(params)
        out = {
            "finite_difference": fd,
            "extrema": report.dv_residual,
            "mass_reference": max(
                abs(vev_mass(LagrangianParams(-2.0, 1.0)).mass - 1.0),
                abs(vev_mass(LagrangianParams(-1.0, 2.0)).mass - 0.5),
            ),
            "mass_undefined": 0.0 if vev_mass(LagrangianParams(1.0, 1.0)).mass is None else 1.0,
        }
        if report.mass is not None:
            shell = report.vev_norm_squared

            def quadratic(t):
                return params.alpha * t + params.beta * t * t

            out["minimum"] = max(0.0, quadratic(shell) - quadratic(shell - 1e-3), quadratic(shell) - quadratic(shell + 1e-3))
            psi = rng.normal(size=4) + 1j * rng.normal(size=4)
            out["mass_consistency"] = self._mass_consistency(report, psi, context)
        return out


ALL_SUITES = (
    LieIsoSuite,
    GroupMetricSuite,
    StructureEquationSuite,
    BianchiSuite,
    GaugeCovarianceSuite,
    NormalitySuite,
    U1DressingLawSuite,
    K1InvarianceSuite,
    TwistingMapSuite,
    ResidualLawsSuite,
    WeylErasureSuite,
    DressedBlockFormulaSuite,
    GammaAlgebraSuite,
    DiracOperatorSuite,
    LagrangianStagesSuite,
    PotentialVevSuite,
)

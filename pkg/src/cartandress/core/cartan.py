"""
Cartan connections valued in so(2,4), their curvature, gauge actions and the normal
connection determined by a tetrad.

Block layout of ϖ: (a, P, 0; θ, A, Pᵗ; 0, θᵗ, −a); of Ω = dϖ + ϖ∧ϖ: (f, C, 0; Θ, W, Cᵗ; 0, Θᵗ, −f).
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from cartandress.core.algebra import (
    ETA,
    GroupKind,
    algebra_iso,
    assemble,
    boost_matrix,
    complex_boost_matrix,
    complex_lorentz_matrix,
    complex_weyl_matrix,
    complex_group_metric_residual,
    group_metric_residual,
    lorentz_matrix,
    spin_to_lorentz,
    weyl_matrix,
)
from cartandress.core.exceptions import FormError
from cartandress.core.fields import SmoothMap
from cartandress.core.forms import (
    MatrixForm,
    Tetrad,
    basis,
    exterior_derivative,
    wedge,
)
from cartandress.core.jets import DIM, Jet, contract


class CartanConnection:
    """so(2,4)-valued 1-form on the chart."""

    def __init__(self, form: MatrixForm):
        if form.degree != 1 or form.shape != (6, 6):
            raise FormError(f"a Cartan connection is a 6×6 1-form, got {form}")
        self.form = form

    @classmethod
    def from_blocks(
        cls,
        a: MatrixForm,
        A: MatrixForm,
        P: MatrixForm,
        theta: MatrixForm,
    ) -> "CartanConnection":
        def evaluate(x, order):
            ja, jA, jP, jt = (f.jets(x, order) for f in (a, A, P, theta))
            return {
                i: Jet(
                    assemble(ja[i].coeffs, jA[i].coeffs, jP[i].coeffs, jt[i].coeffs),
                    order,
                )
                for i in basis(1)
            }

        return cls(MatrixForm(1, evaluate, (6, 6), float, "ϖ"))

    @property
    def a(self) -> MatrixForm:
        return self.form[0, 0]

    @property
    def P(self) -> MatrixForm:
        return self.form[0, 1:5]

    @property
    def theta(self) -> MatrixForm:
        return self.form[1:5, 0]

    @property
    def A(self) -> MatrixForm:
        return self.form[1:5, 1:5]

    @cached_property
    def tetrad(self) -> Tetrad:
        return Tetrad.from_theta(self.theta)

    def induced_metric(self) -> SmoothMap:
        """g = eᵀηe with e read from the soldering block."""
        return self.tetrad.metric

    @cached_property
    def complexified(self) -> MatrixForm:
        """ϖ̄ = algebraIso(ϖ), applied coefficient-wise."""
        return self.form.map(algebra_iso, (4, 4), complex)

    @cached_property
    def curvature(self) -> "CartanCurvature":
        return curvature(self)


class CartanCurvature:
    """so(2,4)-valued 2-form Ω = dϖ + ϖ∧ϖ."""

    def __init__(self, form: MatrixForm):
        if form.degree != 2 or form.shape != (6, 6):
            raise FormError(f"a Cartan curvature is a 6×6 2-form, got {form}")
        self.form = form

    @property
    def f(self) -> MatrixForm:
        return self.form[0, 0]

    @property
    def C(self) -> MatrixForm:
        return self.form[0, 1:5]

    @property
    def torsion(self) -> MatrixForm:
        return self.form[1:5, 0]

    @property
    def W(self) -> MatrixForm:
        return self.form[1:5, 1:5]


def curvature(connection: CartanConnection) -> CartanCurvature:
    omega = connection.form
    return CartanCurvature(exterior_derivative(omega) + wedge(omega, omega))


@dataclass(frozen=True, eq=False)
class GaugeMap:
    """H-valued map carried in the real (6×6) and complex (4×4) representations."""

    kind: GroupKind
    real: SmoothMap
    complex: SmoothMap
    parameter: Optional[SmoothMap] = None

    @classmethod
    def weyl(cls, z: SmoothMap) -> "GaugeMap":
        return cls(
            GroupKind.WEYL,
            SmoothMap.lift(weyl_matrix, z, shape=(6, 6), label="Z"),
            SmoothMap.lift(complex_weyl_matrix, z, shape=(4, 4), label="Z̄"),
            z,
        )

    @classmethod
    def boost(cls, r: SmoothMap) -> "GaugeMap":
        return cls(
            GroupKind.BOOST,
            SmoothMap.lift(boost_matrix, r, shape=(6, 6), label="K1"),
            SmoothMap.lift(complex_boost_matrix, r, shape=(4, 4), label="K̄1"),
            r,
        )

    @classmethod
    def lorentz(cls, sbar: SmoothMap) -> "GaugeMap":
        """Lorentz map given by its SL(2,ℂ) lift S̄."""
        return cls(
            GroupKind.LORENTZ,
            SmoothMap.lift(lambda s: lorentz_matrix(spin_to_lorentz(s)), sbar, shape=(6, 6), label="S"),
            SmoothMap.lift(complex_lorentz_matrix, sbar, shape=(4, 4), label="S̄"),
            sbar,
        )

    @classmethod
    def identity(cls) -> "GaugeMap":
        return cls(
            GroupKind.GENERAL,
            SmoothMap.constant(np.eye(6), "1"),
            SmoothMap.constant(np.eye(4, dtype=complex), "1"),
        )

    def compose(self, other: "GaugeMap") -> "GaugeMap":
        """Pointwise product self·other."""
        kind = self.kind if self.kind == other.kind else GroupKind.GENERAL
        return GaugeMap(kind, self.real @ other.real, self.complex @ other.complex)

    def inverse(self) -> "GaugeMap":
        return GaugeMap(self.kind, self.real.inv(), self.complex.inv())

    def metric_residual(self, points: Iterable[Sequence[float]]) -> float:
        worst = 0.0
        for x in points:
            worst = max(
                worst,
                group_metric_residual(self.real(x)),
                complex_group_metric_residual(self.complex(x)),
            )
        return worst


def gauge_transform(connection: CartanConnection, gamma: GaugeMap) -> CartanConnection:
    """ϖ^γ = γ⁻¹ϖγ + γ⁻¹dγ."""
    g = gamma.real
    g_inv = g.inv()
    dg = exterior_derivative(MatrixForm.from_map(g))
    return CartanConnection(connection.form.left(g_inv).right(g) + dg.left(g_inv))


def transform_curvature(curv: CartanCurvature, gamma: GaugeMap) -> CartanCurvature:
    """Ω ↦ γ⁻¹Ωγ."""
    return CartanCurvature(curv.form.left(gamma.real.inv()).right(gamma.real))


def transform_tractor(phi: SmoothMap, gamma: GaugeMap) -> SmoothMap:
    return gamma.real.inv() @ phi


def transform_twistor(psi: SmoothMap, gamma: GaugeMap) -> SmoothMap:
    return gamma.complex.inv() @ psi


def covariant_derivative(field: SmoothMap, connection: CartanConnection) -> MatrixForm:
    """Dφ = dφ + ϖφ on tractors (ℝ⁶) and D̄ψ = dψ + ϖ̄ψ on twistors (ℂ⁴)."""
    if field.shape == (6,):
        d_field = exterior_derivative(MatrixForm.from_map(field))
        return d_field + connection.form.right(field)
    if field.shape == (4,):
        d_field = exterior_derivative(MatrixForm.from_map(field, dtype=complex))
        return d_field + connection.complexified.right(field, complex)
    raise FormError(f"covariant derivative needs a 6- or 4-component field, got shape {field.shape}")


# ---------------------------------------------------------------------------------------------
# Normal connection
# ---------------------------------------------------------------------------------------------

def _christoffel(g: Jet) -> Jet:
    """Γ^λ_{μν} from a metric jet; consumes one order."""
    dg = g.gradient()  # [ρ, ν, μ] = ∂_μ g_{ρν}
    lowered = 0.5 * (dg.transpose(0, 2, 1) + dg - dg.transpose(2, 1, 0))
    g_inv = g.truncate(g.order - 1).inv()
    return contract("lr,rmn->lmn", g_inv, lowered)


def spin_connection(tetrad: Tetrad) -> SmoothMap:
    """ω_μ{}^a{}_b = (Γ^λ_{μν} e^a_λ − ∂_μ e^a_ν) E^ν_b, indexed [μ, a, b]."""

    def evaluate(x, order):
        e = tetrad.e.jet(x, order + 1)
        gamma = _christoffel(e.T @ ETA @ e)
        e0 = e.truncate(order)
        de = e.gradient().transpose(2, 0, 1)  # [μ, a, ν]
        term = contract("lmn,al->man", gamma, e0) - de
        return contract("man,nb->mab", term, e0.inv())

    return SmoothMap(evaluate, (DIM, DIM, DIM), "ω")


def ricci_contraction(two_form: MatrixForm, inverse_tetrad: SmoothMap) -> SmoothMap:
    """X_bd = X^c_b{}_{cd}, frame components of a so(1,3)-valued 2-form contracted."""

    def evaluate(x, order):
        comps = two_form.jets(x, order)
        E = inverse_tetrad.jet(x, order)
        total = Jet.zeros((DIM, DIM), order)
        for mu, nu in basis(2):
            u, v = E[mu], E[nu]
            area = contract("c,d->cd", u, v) - contract("c,d->cd", v, u)
            total = total + contract("cb,cd->bd", comps[(mu, nu)], area)
        return total

    return SmoothMap(evaluate, (DIM, DIM), "Ric")


def frame_components(two_form: MatrixForm, inverse_tetrad: SmoothMap) -> SmoothMap:
    """X^a_b{}_{cd} = X^a_b{}_{μν} E^μ_c E^ν_d."""

    def evaluate(x, order):
        comps = two_form.jets(x, order)
        E = inverse_tetrad.jet(x, order)
        total = Jet.zeros((DIM,) * 4, order)
        for mu, nu in basis(2):
            area = contract("c,d->cd", E[mu], E[nu]) - contract("c,d->cd", E[nu], E[mu])
            total = total + contract("ab,cd->abcd", comps[(mu, nu)], area)
        return total

    return SmoothMap(evaluate, (DIM,) * 4, "frame")


def schouten_tensor(riemann: MatrixForm, tetrad: Tetrad) -> SmoothMap:
    """P_bd = −½(Ric_bd − (R/6)η_bd)."""
    ricci = ricci_contraction(riemann, tetrad.inverse)

    def schouten(ric: Jet) -> Jet:
        scalar = contract("bd,bd->", ric, ETA)
        return -0.5 * (ric - scalar * ETA / 6.0)

    return SmoothMap.lift(schouten, ricci, shape=(DIM, DIM), label="P")


def build_normal_connection(
    tetrad: Tetrad,
    schouten_shift: Optional[np.ndarray] = None,
) -> CartanConnection:
    """Normal connection of a tetrad: a = 0, A torsion free, P the Schouten 1-form.

    ``schouten_shift`` adds a constant symmetric matrix to P_bd; it exists to corrupt the
    connection deliberately and observe the normality conditions fail.
    """
    omega = spin_connection(tetrad)
    A = MatrixForm(
        1,
        lambda x, order: {(mu,): omega.jet(x, order)[mu] for mu in range(DIM)},
        (DIM, DIM),
        float,
        "A",
    )
    riemann = exterior_derivative(A) + wedge(A, A)
    schouten = schouten_tensor(riemann, tetrad)
    if schouten_shift is not None:
        schouten = schouten + np.asarray(schouten_shift, dtype=float)

    def p_block(x, order):
        p = schouten.jet(x, order)
        e = tetrad.e.jet(x, order)
        frame = contract("bd,dm->bm", p, e)
        return {(mu,): frame[:, mu] for mu in range(DIM)}

    P = MatrixForm(1, p_block, (DIM,), float, "P")
    a = MatrixForm.zero(1)
    return CartanConnection.from_blocks(a, A, P, tetrad.theta)


def ricci_trace(curv: CartanCurvature, tetrad: Tetrad) -> SmoothMap:
    """Ricci-type trace of the W block; vanishes for the normal connection."""
    return ricci_contraction(curv.W, tetrad.inverse)


def coordinate_weyl_tensor(g: SmoothMap, x: Sequence[float]) -> np.ndarray:
    """C_{ρσμν} of a metric from coordinate Christoffels and the 4D Weyl decomposition."""
    gj = g.jet(x, 2)
    gamma = _christoffel(gj)  # order 1
    dgamma = gamma.gradient().value  # [ρ, μ, ν, κ] = ∂_κ Γ^ρ_{μν}
    G = gamma.value
    riemann = (
        np.einsum("rnsm->rsmn", dgamma)
        - np.einsum("rmsn->rsmn", dgamma)
        + np.einsum("rml,lns->rsmn", G, G)
        - np.einsum("rnl,lms->rsmn", G, G)
    )
    gv = gj.value
    lower = np.einsum("rl,lsmn->rsmn", gv, riemann)
    ric = np.einsum("rsrn->sn", riemann)
    scalar = np.einsum("sn,sn->", np.linalg.inv(gv), ric)
    weyl = lower - 0.5 * (
        np.einsum("rm,sn->rsmn", gv, ric)
        - np.einsum("rn,sm->rsmn", gv, ric)
        - np.einsum("sm,rn->rsmn", gv, ric)
        + np.einsum("sn,rm->rsmn", gv, ric)
    )
    weyl = weyl + scalar / 6.0 * (np.einsum("rm,sn->rsmn", gv, gv) - np.einsum("rn,sm->rsmn", gv, gv))
    return weyl


def frame_weyl_to_coordinates(w_frame: np.ndarray, e: np.ndarray) -> np.ndarray:
    """C_{ρσμν} = e^c_ρ (ηW)_{cb μν} e^b_σ with W given in frame form [a, b, c, d]."""
    lowered = np.einsum("ca,abkl->cbkl", ETA, w_frame)
    return np.einsum("cr,bs,cbkl,km,ln->rsmn", e, e, lowered, e, e)

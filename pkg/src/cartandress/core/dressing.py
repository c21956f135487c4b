"""
Dressing field method for the conformal Cartan geometry.

Two dressings are applied in sequence. The K₁ dressing u₁ = K₁(q) erases the special
conformal boosts; the dilaton dressing C(φ), φ = σ⁻¹, then erases Weyl rescalings. The
residual Weyl symmetry of the K₁-dressed stage acts through the twisting map C(z) instead
of a representation.
"""

from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from cartandress.core.algebra import (
    ETA,
    GroupKind,
    boost_matrix,
    complex_boost_matrix,
    complex_weyl_matrix,
    weyl_matrix,
)
from cartandress.core.cartan import (
    CartanConnection,
    CartanCurvature,
    GaugeMap,
    gauge_transform,
    transform_tractor,
    transform_twistor,
)
from cartandress.core.exceptions import DegenerateFieldError, UnsupportedResidualLawError
from cartandress.core.fields import SmoothMap
from cartandress.core.forms import (
    MatrixForm,
    Tetrad,
    exterior_derivative,
    outer_product,
)
from cartandress.core.jets import DIM, Jet, contract

SIGMA_THRESHOLD = 1e-12


class Stage(str, Enum):
    UNDRESSED = "undressed"
    K1 = "k1-dressed"
    WEYL = "weyl-dressed"


class TwistSource(str, Enum):
    WEYL_PARAM = "weyl-param"
    DILATON = "dilaton"


@dataclass(frozen=True, eq=False)
class DressedFields:
    """Connection, tractor and twistor of one stage of the dressing chain."""

    stage: Stage
    connection: CartanConnection
    tractor: SmoothMap
    twistor: SmoothMap

    @property
    def curvature(self) -> CartanCurvature:
        return self.connection.curvature

    @property
    def tetrad(self) -> Tetrad:
        return self.connection.tetrad


def gauge_fields(fields: DressedFields, gamma: GaugeMap, stage: Optional[Stage] = None) -> DressedFields:
    """(ϖ, φ, ψ) ↦ (ϖ^γ, γ⁻¹φ, γ̄⁻¹ψ)."""
    return DressedFields(
        stage or fields.stage,
        gauge_transform(fields.connection, gamma),
        transform_tractor(fields.tractor, gamma),
        transform_twistor(fields.twistor, gamma),
    )


# ---------------------------------------------------------------------------------------------
# K₁ dressing
# ---------------------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class K1Dressing:
    """u₁ = K₁(q) with q_a = a_μ E^μ_a, and its complex lift ū₁."""

    q: SmoothMap

    @cached_property
    def gauge_map(self) -> GaugeMap:
        return GaugeMap.boost(self.q)

    @property
    def u1(self) -> SmoothMap:
        return self.gauge_map.real

    @property
    def u1_bar(self) -> SmoothMap:
        return self.gauge_map.complex


def extract_u1(connection: CartanConnection, points: Optional[Iterable[Sequence[float]]] = None) -> K1Dressing:
    if points is not None:
        connection.tetrad.check_regular(points)
    a = connection.a
    E = connection.tetrad.inverse

    def evaluate(x, order):
        comps = a.jets(x, order)
        inverse = E.jet(x, order)
        q = Jet.zeros((DIM,), order)
        for mu in range(DIM):
            q = q + comps[(mu,)] * inverse[mu]
        return q

    return K1Dressing(SmoothMap(evaluate, (DIM,), "q"))


def dress_k1(fields: DressedFields, dressing: Optional[K1Dressing] = None) -> DressedFields:
    """ϖ₁ = u₁⁻¹ϖu₁ + u₁⁻¹du₁, φ₁ = u₁⁻¹φ, ψ₁ = ū₁⁻¹ψ."""
    dressing = dressing or extract_u1(fields.connection)
    return gauge_fields(fields, dressing.gauge_map, Stage.K1)


# ---------------------------------------------------------------------------------------------
# Twisting map C(w) = Z(w)·K₁(Υ(w)/w)
# ---------------------------------------------------------------------------------------------

def _check_positive(w: Jet, x: np.ndarray, what: str) -> None:
    if float(np.real(w.value)) <= 0.0:
        raise DegenerateFieldError(f"{what} must be positive, got {float(np.real(w.value)):.3e}", x)


def upsilon(w: SmoothMap, tetrad: Tetrad) -> SmoothMap:
    """Υ_a = w⁻¹ ∂_μ w E^μ_a."""

    def evaluate(x, order):
        wj = w.jet(x, order + 1)
        _check_positive(wj, x, "twisting parameter")
        grad = wj.gradient()
        return contract("m,ma->a", grad, tetrad.inverse.jet(x, order)) / wj.truncate(order)

    return SmoothMap(evaluate, (DIM,), "Υ")


@dataclass(frozen=True, eq=False)
class TwistingMap:
    source: TwistSource
    w: SmoothMap
    tetrad: Tetrad

    @cached_property
    def upsilon(self) -> SmoothMap:
        return upsilon(self.w, self.tetrad)

    @cached_property
    def C(self) -> SmoothMap:
        """(w, Υ, ½w⁻¹ΥΥᵗ; 0, 1₄, w⁻¹Υᵗ; 0, 0, w⁻¹)."""
        return SmoothMap.lift(
            lambda w, u: weyl_matrix(w) @ boost_matrix(u / w),
            self.w,
            self.upsilon,
            shape=(6, 6),
            label="C",
        )

    @cached_property
    def C_bar(self) -> SmoothMap:
        return SmoothMap.lift(
            lambda w, u: complex_weyl_matrix(w) @ complex_boost_matrix(u / w),
            self.w,
            self.upsilon,
            shape=(4, 4),
            label="C̄",
        )

    @cached_property
    def gauge_map(self) -> GaugeMap:
        return GaugeMap(GroupKind.GENERAL, self.C, self.C_bar, self.w)


def build_twisting_map(w: SmoothMap, tetrad: Tetrad, source: TwistSource = TwistSource.WEYL_PARAM) -> TwistingMap:
    return TwistingMap(source, w, tetrad)


def extract_dilaton(tractor: SmoothMap) -> SmoothMap:
    """φ = σ⁻¹ from the last tractor component."""

    def evaluate(x, order):
        sigma = tractor.jet(x, order)[5]
        if abs(sigma.value) < SIGMA_THRESHOLD:
            raise DegenerateFieldError(f"tractor σ-component vanishes ({float(sigma.value):.3e})", x)
        return sigma.reciprocal()

    return SmoothMap(evaluate, (), "φ")


def _pin_last_component(tractor: SmoothMap) -> SmoothMap:
    def evaluate(x, order):
        coeffs = tractor.jet(x, order).coeffs.copy()
        coeffs[:, 5] = 0.0
        coeffs[0, 5] = 1.0
        return Jet(coeffs, order)

    return SmoothMap(evaluate, (6,), "bs φ")


def dress_weyl(k1_fields: DressedFields, twisting: Optional[TwistingMap] = None) -> DressedFields:
    """bs ϖ = C(φ)⁻¹ϖ₁C(φ) + C(φ)⁻¹dC(φ), bs φ = C(φ)⁻¹φ₁, bs ψ = C̄(φ)⁻¹ψ₁."""
    if twisting is None:
        twisting = build_twisting_map(extract_dilaton(k1_fields.tractor), k1_fields.tetrad, TwistSource.DILATON)
    dressed = gauge_fields(k1_fields, twisting.gauge_map, Stage.WEYL)
    return replace(dressed, tractor=_pin_last_component(dressed.tractor))


@dataclass(frozen=True, eq=False)
class DressingChain:
    """All stages of one configuration with the accumulated transports."""

    undressed: DressedFields
    k1: DressedFields
    weyl: DressedFields
    dressing: K1Dressing
    twisting: TwistingMap

    @cached_property
    def transport(self) -> SmoothMap:
        """u₁C(φ)."""
        return self.dressing.u1 @ self.twisting.C

    @cached_property
    def transport_bar(self) -> SmoothMap:
        """ū₁C̄(φ)."""
        return self.dressing.u1_bar @ self.twisting.C_bar

    @cached_property
    def tractor_product(self) -> SmoothMap:
        """C(φ)⁻¹φ₁ as computed, before bs φ has its last component set to 1."""
        return transform_tractor(self.k1.tractor, self.twisting.gauge_map)

    @property
    def dilaton(self) -> SmoothMap:
        return self.twisting.w

    def stage(self, stage: Stage) -> DressedFields:
        return {Stage.UNDRESSED: self.undressed, Stage.K1: self.k1, Stage.WEYL: self.weyl}[stage]


def dress_all(fields: DressedFields) -> DressingChain:
    dressing = extract_u1(fields.connection)
    k1 = dress_k1(fields, dressing)
    twisting = build_twisting_map(extract_dilaton(k1.tractor), k1.tetrad, TwistSource.DILATON)
    weyl = dress_weyl(k1, twisting)
    return DressingChain(fields, k1, weyl, dressing, twisting)


def twisted_transform(k1_fields: DressedFields, z: SmoothMap) -> DressedFields:
    """Residual Weyl action on the K₁ stage: conjugation by C(z) built from its own tetrad."""
    twisting = build_twisting_map(z, k1_fields.tetrad, TwistSource.WEYL_PARAM)
    return gauge_fields(k1_fields, twisting.gauge_map)


def dressed_block_formula(k1_fields: DressedFields, twisting: TwistingMap) -> CartanConnection:
    """Closed form of bs ϖ from the K₁ stage blocks (assumes a₁ = 0).

    θ-block φθ; A-block A₁ + θΥ − Υᵗθᵗ; P-block φ⁻¹(P₁ + ∇Υ − (Υθ)Υ + ½Υ²θᵗ) with
    ∇Υ = dΥ − ΥA₁; ε-block 0.
    """
    conn = k1_fields.connection
    theta, A, P = conn.theta, conn.A, conn.P
    phi = twisting.w
    ups = twisting.upsilon
    ups_raised = SmoothMap.lift(lambda u: u @ ETA, ups, shape=(DIM,), label="Υᵗ")
    ups_sq = SmoothMap.lift(lambda u: (u @ ETA) @ u, ups, shape=(), label="Υ²")
    theta_row = theta.map(lambda c: c @ ETA, (DIM,))

    a_block = (
        A
        + theta.combine_map(ups, outer_product)
        - theta_row.combine_map(ups_raised, lambda t, u: outer_product(u, t))
    )
    nabla = exterior_derivative(MatrixForm.from_map(ups)) - A.left(ups)
    contraction = theta.left(ups)
    p_block = (
        P
        + nabla
        - contraction.right(ups)
        + theta_row.scale(ups_sq) * 0.5
    ).scale(1.0 / phi)
    return CartanConnection.from_blocks(MatrixForm.zero(1), a_block, p_block, theta.scale(phi))


# ---------------------------------------------------------------------------------------------
# Residual laws
# ---------------------------------------------------------------------------------------------

@dataclass
class ResidualReport:
    stage: Stage
    subgroup: GroupKind
    residuals: Dict[str, float]

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


def max_difference(a, b, points: Sequence[Sequence[float]]) -> float:
    worst = 0.0
    for x in points:
        if isinstance(a, MatrixForm):
            va, vb = a.values(x), b.values(x)
        else:
            va, vb = a(x), b(x)
        worst = max(worst, float(np.max(np.abs(va - vb), initial=0.0)))
    return worst


def compare_fields(lhs: DressedFields, rhs: DressedFields, points: Sequence[Sequence[float]]) -> Dict[str, float]:
    """Max-norm differences of connection, curvature, tractor and twistor."""
    return {
        "connection": max_difference(lhs.connection.form, rhs.connection.form, points),
        "curvature": max_difference(lhs.curvature.form, rhs.curvature.form, points),
        "tractor": max_difference(lhs.tractor, rhs.tractor, points),
        "twistor": max_difference(lhs.twistor, rhs.twistor, points),
    }


def verify_residual_law(
    fields: DressedFields,
    stage: Stage,
    gamma: GaugeMap,
    points: Sequence[Sequence[float]],
) -> ResidualReport:
    """Compare dressing-after-transforming with the residual law applied to the dressed stage.

    Supported pairs: (K1, Lorentz) and (Weyl-dressed, Lorentz) with the standard law, and
    (K1, Weyl) with the twisted law through C(z).
    """
    if fields.stage != Stage.UNDRESSED:
        raise UnsupportedResidualLawError("residual laws start from undressed fields")
    if stage == Stage.K1 and gamma.kind == GroupKind.LORENTZ:
        lhs = dress_k1(gauge_fields(fields, gamma))
        rhs = gauge_fields(dress_k1(fields), gamma)
    elif stage == Stage.K1 and gamma.kind == GroupKind.WEYL:
        lhs = dress_k1(gauge_fields(fields, gamma))
        rhs = twisted_transform(dress_k1(fields), gamma.parameter)
    elif stage == Stage.WEYL and gamma.kind == GroupKind.LORENTZ:
        lhs = dress_all(gauge_fields(fields, gamma)).weyl
        rhs = gauge_fields(dress_all(fields).weyl, gamma)
    else:
        raise UnsupportedResidualLawError(
            f"no residual law for stage {stage.value} under {gamma.kind.value} transformations"
        )
    return ResidualReport(stage, gamma.kind, compare_fields(lhs, rhs, points))

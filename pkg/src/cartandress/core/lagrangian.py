"""
Toy-model Lagrangian of the dressed conformal geometry.

The density is the sum of a Yang–Mills term for the Cartan curvature, the tractor kinetic
term, the quartic potential, the Dirac term of the twistor and a Yukawa coupling. It is
evaluated at each stage of a DressingChain with the Hodge star of the Weyl-invariant metric
bs g throughout, so the three stages must agree pointwise.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence

import numpy as np

from cartandress.core.algebra import SIGMA, SIGMA_BAR
from cartandress.core.cartan import covariant_derivative
from cartandress.core.dressing import DressingChain, Stage
from cartandress.core.exceptions import DegenerateFieldError, LagrangianError
from cartandress.core.forms import MatrixForm, hodge_star, matrix_product, metric_jets, wedge
from cartandress.core.spinor import curved_gamma, embed_vector, transported_gamma

TOP = (0, 1, 2, 3)
# ⟨φ,φ⟩ within this of zero, relative to the Euclidean ‖φ‖², is a null tractor
NULL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class LagrangianParams:
    """V(φ) = α⟨φ,φ⟩ + β⟨φ,φ⟩² with β > 0."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise LagrangianError(f"beta must be positive, got {self.beta}")


def pairing(phi: np.ndarray, chi: np.ndarray) -> float:
    """⟨φ, χ⟩ = φᵀΣχ."""
    return float(np.asarray(phi) @ SIGMA @ np.asarray(chi))


def potential(phi: np.ndarray, params: LagrangianParams) -> float:
    t = pairing(phi, phi)
    return params.alpha * t + params.beta * t * t


def potential_differential(phi: np.ndarray, params: LagrangianParams) -> np.ndarray:
    """dV_φ = 2(α + 2β⟨φ,φ⟩)⟨φ|."""
    phi = np.asarray(phi, dtype=float)
    t = pairing(phi, phi)
    return 2.0 * (params.alpha + 2.0 * params.beta * t) * (phi @ SIGMA)


def shell_representative(params: LagrangianParams) -> np.ndarray:
    """(ρ, ℓ, σ) = (α/4β, 0, 1), which has ⟨φ, φ⟩ = −α/2β."""
    phi = np.zeros(6)
    phi[0] = params.alpha / (4.0 * params.beta)
    phi[5] = 1.0
    return phi


@dataclass
class PotentialReport:
    alpha: float
    beta: float
    vev_norm_squared: float
    mass: Optional[float]
    shell_representative: np.ndarray
    extrema: Dict[str, float] = field(default_factory=dict)
    dv_residual: float = 0.0

    @property
    def mass_defined(self) -> bool:
        return self.mass is not None

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "vev_norm_squared": self.vev_norm_squared,
            "mass": self.mass,
            "mass_defined": self.mass_defined,
            "shell_representative": [float(v) for v in self.shell_representative],
            "extrema": dict(self.extrema),
            "dv_residual": self.dv_residual,
        }


def vev_mass(params: LagrangianParams) -> PotentialReport:
    """Extrema of V over ⟨φ,φ⟩ and the mass m = √(−α/2β), undefined unless α < 0."""
    shell = -params.alpha / (2.0 * params.beta)
    mass = float(np.sqrt(shell)) if params.alpha < 0 else None
    rep = shell_representative(params)
    residual = max(
        float(np.max(np.abs(potential_differential(np.zeros(6), params)))),
        float(np.max(np.abs(potential_differential(rep, params)))),
    )
    return PotentialReport(
        alpha=params.alpha,
        beta=params.beta,
        vev_norm_squared=shell,
        mass=mass,
        shell_representative=rep,
        extrema={"zero": 0.0, "shell": shell},
        dv_residual=residual,
    )


def sme_matrix(phi: np.ndarray) -> np.ndarray:
    """φ̄ = (ρ1₂, i ℓ̄ᵗ; i ℓ̄, 1₂) for an invariant tractor (ρ, ℓ, 1)."""
    phi = np.asarray(phi, dtype=float)
    out = np.zeros((4, 4), dtype=complex)
    out[0:2, 0:2] = phi[0] * np.eye(2)
    out[2:4, 2:4] = np.eye(2)
    return out + embed_vector(phi[1:5])


@dataclass
class SmeTerm:
    full: complex
    contraction: complex


def sme_term(phi: np.ndarray, psi: np.ndarray) -> SmeTerm:
    """−⟨ψ, φ̄ψ⟩ and its ℓ-part (−i/√2)ℓᵃψ̄γ_aψ."""
    psi = np.asarray(psi, dtype=complex)
    adjoint = np.conj(psi) @ SIGMA_BAR
    full = -complex(adjoint @ sme_matrix(phi) @ psi)
    contraction = -complex(adjoint @ embed_vector(np.asarray(phi, dtype=float)[1:5]) @ psi)
    return SmeTerm(full, contraction)


@dataclass
class LagrangianTerms:
    yang_mills: complex
    kinetic: complex
    potential: complex
    dirac: complex
    yukawa: complex

    @property
    def total(self) -> complex:
        return self.yang_mills + self.kinetic + self.potential + self.dirac + self.yukawa

    def to_dict(self) -> Dict[str, float]:
        out = {}
        for name in ("yang_mills", "kinetic", "potential", "dirac", "yukawa", "total"):
            value = getattr(self, name)
            out[f"{name}_re"] = float(np.real(value))
            out[f"{name}_im"] = float(np.imag(value))
        return out


class LagrangianDensity:
    """Density coefficients of dx⁰∧dx¹∧dx²∧dx³ at every stage of a dressing chain."""

    def __init__(self, chain: DressingChain, params: LagrangianParams, null_tolerance: float = NULL_TOLERANCE):
        self.chain = chain
        self.params = params
        self.null_tolerance = null_tolerance
        self.metric = chain.weyl.tetrad.metric

    @cached_property
    def _weyl_gamma(self) -> MatrixForm:
        return curved_gamma(self.chain.weyl.tetrad)

    def clifford_form(self, stage: Stage) -> MatrixForm:
        if stage == Stage.WEYL:
            return self._weyl_gamma
        if stage == Stage.K1:
            return transported_gamma(self._weyl_gamma, self.chain.twisting.C_bar)
        return transported_gamma(self._weyl_gamma, self.chain.transport_bar)

    @cached_property
    def _forms(self) -> Dict[Stage, Dict[str, MatrixForm]]:
        forms = {}
        for stage in Stage:
            fields = self.chain.stage(stage)
            omega = fields.curvature.form
            d_phi = covariant_derivative(fields.tractor, fields.connection)
            d_psi = covariant_derivative(fields.twistor, fields.connection)
            d_phi_row = d_phi.map(lambda c: c @ SIGMA, (6,))
            forms[stage] = {
                "yang_mills": wedge(omega, hodge_star(omega, self.metric)),
                "kinetic": wedge(d_phi_row, hodge_star(d_phi, self.metric), matrix_product),
                "dirac": wedge(self.clifford_form(stage), hodge_star(d_psi, self.metric), matrix_product),
            }
        return forms

    def evaluate(self, stage: Stage, x: Sequence[float]) -> LagrangianTerms:
        x = np.asarray(x, dtype=float)
        fields = self.chain.stage(stage)
        forms = self._forms[stage]
        _, root = metric_jets(self.metric, x, 0)
        vol = float(np.real(root.value))

        phi = np.real(fields.tractor(x))
        psi = np.asarray(fields.twistor(x), dtype=complex)
        t = pairing(phi, phi)
        if t < -self.null_tolerance * max(1.0, float(phi @ phi)):
            raise DegenerateFieldError(f"⟨φ,φ⟩ = {t:.3e} < 0, Yukawa coupling undefined", x)
        t = max(t, 0.0)
        adjoint = np.conj(psi) @ SIGMA_BAR

        yang_mills = 0.5 * np.trace(forms["yang_mills"].jets(x, 0)[TOP].value)
        kinetic = forms["kinetic"].jets(x, 0)[TOP].value
        dirac = adjoint @ forms["dirac"].jets(x, 0)[TOP].value
        return LagrangianTerms(
            yang_mills=complex(yang_mills),
            kinetic=complex(kinetic),
            potential=complex(-potential(phi, self.params) * vol),
            dirac=complex(dirac),
            yukawa=complex(-np.sqrt(t) * (adjoint @ psi) * vol),
        )

    def evaluate_all(self, x: Sequence[float]) -> Dict[Stage, LagrangianTerms]:
        return {stage: self.evaluate(stage, x) for stage in Stage}

    def table(self, points: Sequence[Sequence[float]]) -> List[dict]:
        """One row per point and stage with every term plus the delta to the undressed total."""
        rows = []
        for index, x in enumerate(points):
            terms = self.evaluate_all(x)
            reference = terms[Stage.UNDRESSED].total
            for stage, values in terms.items():
                row = {"point": index, "stage": stage.value}
                row.update({f"x{mu}": float(x[mu]) for mu in range(4)})
                row.update(values.to_dict())
                row["stage_delta"] = float(abs(values.total - reference))
                rows.append(row)
        return rows

    def max_stage_delta(self, points: Sequence[Sequence[float]]) -> float:
        worst = 0.0
        for x in points:
            terms = self.evaluate_all(x)
            reference = terms[Stage.UNDRESSED].total
            worst = max(worst, *(abs(t.total - reference) for t in terms.values()))
        return worst


def lagrangian_density(
    chain: DressingChain, stage: Stage, params: LagrangianParams, x: Sequence[float]
) -> LagrangianTerms:
    return LagrangianDensity(chain, params).evaluate(stage, x)

"""
Weyl-basis gamma matrices read off the su(2,2) grading, chirality, curved gammas and the
Dirac operator on Weyl-invariant twistors.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from cartandress.core.algebra import (
    ETA,
    PAULI,
    PAULI_TILDE,
    SIGMA_BAR,
    SQRT2,
    lorentz_to_spin_generator,
    spin_to_lorentz,
)
from cartandress.core.fields import SmoothMap
from cartandress.core.forms import (
    MatrixForm,
    Tetrad,
    exterior_derivative,
    hodge_star,
    matrix_product,
    metric_jets,
    wedge,
)
from cartandress.core.jets import DIM, contract


def _gamma(a: int) -> np.ndarray:
    g = np.zeros((4, 4), dtype=complex)
    g[0:2, 2:4] = PAULI_TILDE[a]
    g[2:4, 0:2] = PAULI[a]
    return g


GAMMA = np.stack([_gamma(a) for a in range(DIM)])
GAMMA_UPPER = np.einsum("ab,bij->aij", ETA, GAMMA)
GAMMA5 = 1j * GAMMA[0] @ GAMMA[1] @ GAMMA[2] @ GAMMA[3]
GAMMA5_UPPER = 1j * GAMMA_UPPER[0] @ GAMMA_UPPER[1] @ GAMMA_UPPER[2] @ GAMMA_UPPER[3]

P_LEFT = 0.5 * (np.eye(4) + GAMMA5)
P_RIGHT = 0.5 * (np.eye(4) - GAMMA5)


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def clifford_residual() -> float:
    """max |{γ_a, γ_b} − 2η_ab| over all pairs."""
    worst = 0.0
    for a in range(DIM):
        for b in range(a, DIM):
            diff = anticommutator(GAMMA[a], GAMMA[b]) - 2 * ETA[a, b] * np.eye(4)
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def embed_vector(x: Sequence[float]) -> np.ndarray:
    """(i/√2) xᵃ γ_a."""
    return 1j / SQRT2 * np.einsum("a,aij->ij", np.asarray(x, dtype=float), GAMMA)


def spin_operator(a: int, b: int) -> np.ndarray:
    """½[γ_a, γ_b]."""
    return 0.5 * (GAMMA[a] @ GAMMA[b] - GAMMA[b] @ GAMMA[a])


def chiral_split(psi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return P_LEFT @ psi, P_RIGHT @ psi


def dirac_adjoint(psi: np.ndarray) -> np.ndarray:
    """ψ̄ = ψ*γ⁰ = ψ*Σ̄."""
    return np.conj(psi) @ SIGMA_BAR


def dirac_pairing(psi: np.ndarray, chi: np.ndarray) -> complex:
    """⟨ψ, χ⟩ = ψ*Σ̄χ."""
    return complex(dirac_adjoint(psi) @ chi)


def gamma_equivariance_residual(sbar: np.ndarray) -> float:
    """max_a |𝒮̄⁻¹γ_a𝒮̄ − (S⁻¹)ᵇ_a γ_b| with 𝒮̄ = diag(S̄^{-1*}, S̄)."""
    big = np.zeros((4, 4), dtype=complex)
    big[0:2, 0:2] = np.conj(np.linalg.inv(sbar)).T
    big[2:4, 2:4] = sbar
    s_inv = np.linalg.inv(spin_to_lorentz(sbar))
    worst = 0.0
    for a in range(DIM):
        lhs = np.linalg.inv(big) @ GAMMA[a] @ big
        rhs = np.einsum("b,bij->ij", s_inv[:, a], GAMMA)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def curved_gamma(tetrad: Tetrad) -> MatrixForm:
    """γ = γ_a θᵃ = γ_μ dx^μ with γ_μ = γ_a e^a_μ."""

    def evaluate(x, order):
        e = tetrad.e.jet(x, order)
        return {(mu,): contract("a,aij->ij", e[:, mu], GAMMA) for mu in range(DIM)}

    return MatrixForm(1, evaluate, (4, 4), complex, "γ")


def transported_gamma(gamma: MatrixForm, transport: SmoothMap) -> MatrixForm:
    """TγT⁻¹ for an SU(2,2)-valued map T."""
    return gamma.left(transport, complex).right(transport.inv(), complex)


def _spin_block(s: np.ndarray) -> np.ndarray:
    sbar = lorentz_to_spin_generator(s)
    out = np.zeros(sbar.shape[:-2] + (4, 4), dtype=complex)
    out[..., 0:2, 0:2] = -np.conj(np.swapaxes(sbar, -1, -2))
    out[..., 2:4, 2:4] = sbar
    return out


def spin_connection_bar(A: MatrixForm) -> MatrixForm:
    """(−Ā*, 0; 0, Ā) for an so(1,3)-valued 1-form A."""
    return A.map(_spin_block, (4, 4), complex)


@dataclass
class DiracOperator:
    """Both forms of the Dirac 4-form: γ∧*Dψ and γ^μ D_μψ √|g| dx⁰¹²³."""

    wedge_form: MatrixForm
    contracted: SmoothMap

    def residual(self, points: Sequence[Sequence[float]]) -> float:
        worst = 0.0
        for x in points:
            diff = self.wedge_form.values(x)[0] - self.contracted(x)
            worst = max(worst, float(np.max(np.abs(diff))))
        return worst


def dirac_operator(psi: SmoothMap, A: MatrixForm, tetrad: Tetrad) -> DiracOperator:
    """Dirac operator with Dψ = dψ + (−Ā*, 0; 0, Ā)ψ."""
    d_psi = exterior_derivative(MatrixForm.from_map(psi, dtype=complex)) + spin_connection_bar(A).right(psi, complex)
    g = tetrad.metric
    gamma = curved_gamma(tetrad)
    wedge_form = wedge(gamma, hodge_star(d_psi, g), matrix_product)

    def contracted(x, order):
        comps = d_psi.jets(x, order)
        g_inv, root = metric_jets(g, np.asarray(x, dtype=float), order)
        gammas = gamma.jets(x, order)
        total = None
        for mu in range(DIM):
            for nu in range(DIM):
                term = g_inv[mu, nu] * (gammas[(mu,)] @ comps[(nu,)])
                total = term if total is None else total + term
        return total * root

    return DiracOperator(wedge_form, SmoothMap(contracted, (4,), "γ^μD_μψ vol"))

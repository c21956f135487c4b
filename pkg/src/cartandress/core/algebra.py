"""
Matrix groups and algebras of the conformal Cartan geometry.

Real picture: so(2,4) acting on ℝ⁶ = (ρ, ℓ, σ) preserving Σ, graded as
𝔤₋₁ (τ) ⊕ 𝔤₀ (ε, s) ⊕ 𝔤₁ (ι). Complex picture: su(2,2) on ℂ⁴ = (π, ω) preserving Σ̄.

All linear maps in this module act on the trailing matrix axes and accept arbitrary leading
batch axes, so the same functions serve plain values and jet coefficient stacks. Nonlinear
constructors accept either arrays or jets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np

from cartandress.core.exceptions import AlgebraError
from cartandress.core.jets import Jet, contract, jet_sqrt

ArrayOrJet = Union[np.ndarray, Jet]

SQRT2 = np.sqrt(2.0)

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
ETA_INV = ETA.copy()

SIGMA = np.zeros((6, 6))
SIGMA[0, 5] = SIGMA[5, 0] = -1.0
SIGMA[1:5, 1:5] = ETA

SIGMA_BAR = np.zeros((4, 4), dtype=complex)
SIGMA_BAR[0:2, 2:4] = np.eye(2)
SIGMA_BAR[2:4, 0:2] = np.eye(2)

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
PAULI_TILDE = np.array([PAULI[0], -PAULI[1], -PAULI[2], -PAULI[3]])

_UPPER_LEFT = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)
_LOWER_RIGHT = np.diag([0.0, 0.0, 1.0, 1.0]).astype(complex)

# so(1,3) coordinates: three boosts then rotations about x1, x2, x3
_LORENTZ_SLOTS = ((0, 1), (0, 2), (0, 3), (2, 3), (1, 3), (1, 2))
_SPIN_BASIS = np.concatenate([PAULI[1:] / 2, 1j * PAULI[1:] / 2])


def _linear(fn: Callable[[np.ndarray], np.ndarray], x: ArrayOrJet) -> ArrayOrJet:
    """Apply a batch-linear array map to an array or to every coefficient of a jet."""
    return x.apply(fn) if isinstance(x, Jet) else fn(np.asarray(x))


def _inverse(m: ArrayOrJet) -> ArrayOrJet:
    return m.inv() if isinstance(m, Jet) else np.linalg.inv(m)


def _dagger(m: ArrayOrJet) -> ArrayOrJet:
    return m.H if isinstance(m, Jet) else np.conj(np.swapaxes(m, -1, -2))


# ---------------------------------------------------------------------------------------------
# Real so(2,4): assembly and grading
# ---------------------------------------------------------------------------------------------

def assemble(
    epsilon: Optional[np.ndarray] = None,
    s: Optional[np.ndarray] = None,
    iota: Optional[np.ndarray] = None,
    tau: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Block matrix (ε, ι, 0; τ, s, ιᵗ; 0, τᵗ, −ε) with ιᵗ = η⁻¹ιᵀ and τᵗ = τᵀη."""
    parts = [p for p in (epsilon, s, iota, tau) if p is not None]
    if not parts:
        return np.zeros((6, 6))
    batch = np.shape(epsilon) if epsilon is not None else None
    if batch is None:
        batch = np.shape(s)[:-2] if s is not None else np.shape(iota if iota is not None else tau)[:-1]
    dtype = np.result_type(*parts, float)
    out = np.zeros(tuple(batch) + (6, 6), dtype=dtype)
    if epsilon is not None:
        out[..., 0, 0] = epsilon
        out[..., 5, 5] = -np.asarray(epsilon)
    if s is not None:
        out[..., 1:5, 1:5] = s
    if iota is not None:
        out[..., 0, 1:5] = iota
        out[..., 1:5, 5] = np.asarray(iota) @ ETA_INV
    if tau is not None:
        out[..., 1:5, 0] = tau
        out[..., 5, 1:5] = np.asarray(tau) @ ETA
    return out


def decompose(m: np.ndarray):
    """(ε, s, ι, τ) read from the generating blocks of an so(2,4) matrix."""
    m = np.asarray(m)
    return m[..., 0, 0], m[..., 1:5, 1:5], m[..., 0, 1:5], m[..., 1:5, 0]


def grade_projection(m: np.ndarray, k: int) -> np.ndarray:
    """Project an so(2,4) matrix on 𝔤_k, k ∈ {−1, 0, 1}."""
    m = np.asarray(m)
    mask = np.zeros((6, 6), dtype=bool)
    if k == -1:
        mask[1:5, 0] = True
        mask[5, 1:5] = True
    elif k == 0:
        mask[0, 0] = mask[5, 5] = True
        mask[1:5, 1:5] = True
    elif k == 1:
        mask[0, 1:5] = True
        mask[1:5, 5] = True
    else:
        raise AlgebraError(f"grading degree must be -1, 0 or 1, got {k}")
    return np.where(mask, m, 0.0)


def so24_residual(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(np.swapaxes(m, -1, -2) @ SIGMA + SIGMA @ m)))


def _metric_scale(m: np.ndarray) -> float:
    """Spectral ‖m‖², at least 1."""
    return max(1.0, float(np.max(np.linalg.norm(m, ord=2, axis=(-2, -1)))) ** 2)


def group_metric_residual(m: np.ndarray, relative: bool = False) -> float:
    m = np.asarray(m)
    residual = float(np.max(np.abs(np.swapaxes(m, -1, -2) @ SIGMA @ m - SIGMA)))
    return residual / _metric_scale(m) if relative else residual


def complex_group_metric_residual(m: np.ndarray, relative: bool = False) -> float:
    m = np.asarray(m)
    residual = float(np.max(np.abs(np.conj(np.swapaxes(m, -1, -2)) @ SIGMA_BAR @ m - SIGMA_BAR)))
    return residual / _metric_scale(m) if relative else residual


def su22_residual(m: np.ndarray) -> float:
    m = np.asarray(m)
    herm = np.conj(np.swapaxes(m, -1, -2)) @ SIGMA_BAR + SIGMA_BAR @ m
    return float(max(np.max(np.abs(herm)), np.max(np.abs(np.trace(m, axis1=-2, axis2=-1)))))


def commutator(x, y):
    return x @ y - y @ x


@dataclass(frozen=True)
class LieElement:
    """Graded element of so(2,4)."""

    epsilon: float = 0.0
    s: np.ndarray = field(default_factory=lambda: np.zeros((4, 4)))
    iota: np.ndarray = field(default_factory=lambda: np.zeros(4))
    tau: np.ndarray = field(default_factory=lambda: np.zeros(4))

    @property
    def matrix(self) -> np.ndarray:
        return assemble(np.float64(self.epsilon), self.s, self.iota, self.tau)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "LieElement":
        if so24_residual(m) > 1e-10:
            raise AlgebraError("matrix is not in so(2,4)")
        eps, s, iota, tau = decompose(m)
        return cls(float(eps), np.array(s), np.array(iota), np.array(tau))

    def grade(self, k: int) -> "LieElement":
        return LieElement.from_matrix(grade_projection(self.matrix, k))

    def lorentz_residual(self) -> float:
        return float(np.max(np.abs(self.s.T @ ETA + ETA @ self.s)))

    def complexified(self) -> "ComplexLieElement":
        return ComplexLieElement(algebra_iso(self.matrix))


def bracket(x: LieElement, y: LieElement) -> LieElement:
    return LieElement.from_matrix(commutator(x.matrix, y.matrix))


# ---------------------------------------------------------------------------------------------
# SL(2,ℂ) ↔ SO(1,3)
# ---------------------------------------------------------------------------------------------

def vec_to_hermitian(x: ArrayOrJet) -> ArrayOrJet:
    """x̄ = xᵃσ_a."""
    return contract("a,aij->ij", x, PAULI)


def hermitian_to_vec(xbar: np.ndarray) -> np.ndarray:
    """xᵃ = ½ tr(σ_a x̄)."""
    return 0.5 * np.real(np.einsum("aji,...ij->...a", PAULI, xbar))


def _spin_generator_image(sbar: np.ndarray) -> np.ndarray:
    """Differential of the cover: ½ Re tr(σ_a (s̄σ_b + σ_b s̄*))."""
    sbar_h = np.conj(np.swapaxes(sbar, -1, -2))
    inner = np.einsum("...ij,bjk->...bik", sbar, PAULI) + np.einsum("bij,...jk->...bik", PAULI, sbar_h)
    return 0.5 * np.real(np.einsum("aki,...bik->...ab", PAULI, inner))


def spin_generator_to_lorentz(sbar: np.ndarray) -> np.ndarray:
    return _spin_generator_image(np.asarray(sbar, dtype=complex))


def _lorentz_coordinates(s: np.ndarray) -> np.ndarray:
    return np.stack([s[..., i, j] for i, j in _LORENTZ_SLOTS], axis=-1)


@lru_cache(maxsize=None)
def _cover_inverse() -> np.ndarray:
    images = np.stack([_lorentz_coordinates(_spin_generator_image(b)) for b in _SPIN_BASIS], axis=-1)
    return np.linalg.inv(images)


def spin_generator(weights: ArrayOrJet) -> ArrayOrJet:
    """Σ_k w_k b_k over the sl(2,ℂ) basis (σ_k/2, iσ_k/2); boosts first, then rotations."""
    return contract("k,kij->ij", weights, _SPIN_BASIS)


def lorentz_to_spin_generator(s: np.ndarray) -> np.ndarray:
    """s̄ ∈ sl(2,ℂ) with spin_generator_to_lorentz(s̄) = s."""
    coords = _lorentz_coordinates(np.asarray(s)) @ _cover_inverse().T
    return np.einsum("...k,kij->...ij", coords.astype(complex), _SPIN_BASIS)


def spin_to_lorentz(sbar: ArrayOrJet, check: bool = True) -> ArrayOrJet:
    """S^a_b = ½ Re tr(σ_a S̄ σ_b S̄*); raises AlgebraError when det S̄ ≠ 1."""
    if check:
        value = sbar.value if isinstance(sbar, Jet) else np.asarray(sbar)
        det = np.linalg.det(value)
        if np.max(np.abs(det - 1.0)) > 1e-10:
            raise AlgebraError(f"det S̄ = {det} is not 1")
    left = contract("jk,bkl->bjl", sbar, PAULI)
    moved = contract("bjl,ml->bjm", left, sbar.conj() if isinstance(sbar, Jet) else np.conj(sbar))
    image = contract("amj,bjm->ab", PAULI, moved)
    return 0.5 * (image.real if isinstance(image, Jet) else np.real(image))


# ---------------------------------------------------------------------------------------------
# so(2,4) → su(2,2)
# ---------------------------------------------------------------------------------------------

def algebra_iso(m: np.ndarray) -> np.ndarray:
    """(−(s̄* − ε/2), −i ῑ; i τ̄, s̄ − ε/2) with v̄ = vᵃσ_a/√2; batch-linear."""
    eps, s, iota, tau = decompose(m)
    sbar = lorentz_to_spin_generator(s)
    eye = np.eye(2)
    half = np.asarray(eps)[..., None, None] * eye / 2
    tbar = np.einsum("...a,aij->...ij", tau, PAULI) / SQRT2
    ibar = np.einsum("...a,aij->...ij", iota, PAULI) / SQRT2
    out = np.zeros(np.shape(eps) + (4, 4), dtype=complex)
    out[..., 0:2, 0:2] = -(np.conj(np.swapaxes(sbar, -1, -2)) - half)
    out[..., 0:2, 2:4] = -1j * ibar
    out[..., 2:4, 0:2] = 1j * tbar
    out[..., 2:4, 2:4] = sbar - half
    return out


def embed_vector(x: np.ndarray) -> np.ndarray:
    """Complex image of the so(2,4) element with τ = x, ι = −xᵀη."""
    x = np.asarray(x)
    return algebra_iso(assemble(iota=-(x @ ETA), tau=x))


# block masks of the su(2,2) grading: 𝔤̄₋₁ lower left, 𝔤̄₀ diagonal, 𝔤̄₁ upper right
COMPLEX_GRADE_MASKS = {k: np.zeros((4, 4), dtype=bool) for k in (-1, 0, 1)}
COMPLEX_GRADE_MASKS[-1][2:4, 0:2] = True
COMPLEX_GRADE_MASKS[0][0:2, 0:2] = COMPLEX_GRADE_MASKS[0][2:4, 2:4] = True
COMPLEX_GRADE_MASKS[1][0:2, 2:4] = True


@dataclass(frozen=True)
class ComplexLieElement:
    """Element of su(2,2) in its 4×4 representation."""

    matrix: np.ndarray

    def su22_residual(self) -> float:
        return su22_residual(self.matrix)

    def grade(self, k: int) -> "ComplexLieElement":
        if k not in COMPLEX_GRADE_MASKS:
            raise AlgebraError(f"grading degree must be -1, 0 or 1, got {k}")
        return ComplexLieElement(np.where(COMPLEX_GRADE_MASKS[k], self.matrix, 0.0))


def complex_bracket(x: ComplexLieElement, y: ComplexLieElement) -> ComplexLieElement:
    return ComplexLieElement(commutator(x.matrix, y.matrix))


# ---------------------------------------------------------------------------------------------
# Group elements
# ---------------------------------------------------------------------------------------------

class GroupKind(str, Enum):
    WEYL = "weyl"
    LORENTZ = "lorentz"
    BOOST = "boost"
    GENERAL = "general"


def weyl_matrix(z: ArrayOrJet) -> ArrayOrJet:
    """Z = diag(z, 1₄, z⁻¹)."""
    e0 = np.zeros((6, 6))
    e0[0, 0] = 1.0
    e5 = np.zeros((6, 6))
    e5[5, 5] = 1.0
    mid = np.diag([0.0, 1.0, 1.0, 1.0, 1.0, 0.0])
    return z * e0 + (1.0 / z) * e5 + mid


def lorentz_matrix(S: ArrayOrJet) -> ArrayOrJet:
    """diag(1, S, 1)."""
    def embed(block):
        out = np.zeros(block.shape[:-2] + (6, 6), dtype=block.dtype)
        out[..., 1:5, 1:5] = block
        return out

    corners = np.zeros((6, 6))
    corners[0, 0] = corners[5, 5] = 1.0
    return _linear(embed, S) + corners


def boost_matrix(r: ArrayOrJet) -> ArrayOrJet:
    """K₁(r) = exp of the 𝔤₁ element ι = r: (1, r, ½rrᵗ; 0, 1₄, rᵗ; 0, 0, 1)."""
    gen = _linear(lambda v: assemble(iota=v), r)
    return np.eye(6) + gen + 0.5 * (gen @ gen)


def complex_weyl_matrix(z: ArrayOrJet) -> ArrayOrJet:
    root = jet_sqrt(z)
    return root * _UPPER_LEFT + (1.0 / root) * _LOWER_RIGHT


def complex_lorentz_matrix(sbar: ArrayOrJet) -> ArrayOrJet:
    """diag(S̄^{-1*}, S̄)."""
    upper = _dagger(_inverse(sbar))

    def embed_upper(block):
        out = np.zeros(block.shape[:-2] + (4, 4), dtype=complex)
        out[..., 0:2, 0:2] = block
        return out

    def embed_lower(block):
        out = np.zeros(block.shape[:-2] + (4, 4), dtype=complex)
        out[..., 2:4, 2:4] = block
        return out

    return _linear(embed_upper, upper) + _linear(embed_lower, sbar)


def complex_boost_matrix(r: ArrayOrJet) -> ArrayOrJet:
    """(1₂, −i r̄; 0, 1₂) with r̄ = r_aσ_a/√2."""
    def embed(v):
        out = np.zeros(v.shape[:-1] + (4, 4), dtype=complex)
        out[..., 0:2, 2:4] = -1j * np.einsum("...a,aij->...ij", v, PAULI) / SQRT2
        return out

    return _linear(embed, r) + np.eye(4, dtype=complex)


def cayley(x: ArrayOrJet) -> ArrayOrJet:
    """(1 − X)⁻¹(1 + X); maps so(2,4) into SO(2,4) and sl(2,ℂ) into SL(2,ℂ)."""
    n = x.shape[-1]
    eye = np.eye(n)
    return _inverse(eye - x) @ (eye + x)


@dataclass(frozen=True)
class GroupElement:
    """Element of the conformal group H = K₀ ⋉ K₁ in its 6×6 representation."""

    kind: GroupKind
    matrix: np.ndarray

    @classmethod
    def weyl(cls, z: float) -> "GroupElement":
        if z <= 0:
            raise AlgebraError(f"Weyl parameter must be positive, got {z}")
        return cls(GroupKind.WEYL, weyl_matrix(float(z)))

    @classmethod
    def lorentz(cls, S: np.ndarray) -> "GroupElement":
        S = np.asarray(S, dtype=float)
        if np.max(np.abs(S.T @ ETA @ S - ETA)) > 1e-10:
            raise AlgebraError("matrix is not in SO(1,3)")
        return cls(GroupKind.LORENTZ, lorentz_matrix(S))

    @classmethod
    def boost(cls, r: np.ndarray) -> "GroupElement":
        return cls(GroupKind.BOOST, boost_matrix(np.asarray(r, dtype=float)))

    @classmethod
    def general(cls, m: np.ndarray) -> "GroupElement":
        if group_metric_residual(m, relative=True) > 1e-10:
            raise AlgebraError("matrix does not preserve Σ")
        return cls(GroupKind.GENERAL, np.asarray(m, dtype=float))

    @classmethod
    def from_factors(cls, z: float, S: np.ndarray, r: np.ndarray) -> "GroupElement":
        """Z·S·K₁(r)."""
        m = cls.weyl(z).matrix @ cls.lorentz(S).matrix @ cls.boost(r).matrix
        return cls(GroupKind.GENERAL, m)

    def factors(self):
        """(z, S, r) with self = Z(z)·S·K₁(r)."""
        z = float(self.matrix[0, 0])
        if z <= 0:
            raise AlgebraError(f"not a Z·S·K₁ product (m₀₀ = {z})")
        return z, self.matrix[1:5, 1:5].copy(), self.matrix[0, 1:5] / z

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        kind = self.kind if self.kind == other.kind else GroupKind.GENERAL
        return GroupElement(kind, self.matrix @ other.matrix)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.kind, np.linalg.inv(self.matrix))

    def metric_residual(self, relative: bool = False) -> float:
        return group_metric_residual(self.matrix, relative)


@dataclass(frozen=True)
class ComplexGroupElement:
    """Element of the double cover H̄ ⊂ SU(2,2)."""

    kind: GroupKind
    matrix: np.ndarray

    @classmethod
    def weyl(cls, z: float) -> "ComplexGroupElement":
        if z <= 0:
            raise AlgebraError(f"Weyl parameter must be positive, got {z}")
        return cls(GroupKind.WEYL, complex_weyl_matrix(float(z)))

    @classmethod
    def lorentz(cls, sbar: np.ndarray) -> "ComplexGroupElement":
        det = np.linalg.det(sbar)
        if abs(det - 1.0) > 1e-10:
            raise AlgebraError(f"det S̄ = {det} is not 1")
        return cls(GroupKind.LORENTZ, complex_lorentz_matrix(np.asarray(sbar, dtype=complex)))

    @classmethod
    def boost(cls, r: np.ndarray) -> "ComplexGroupElement":
        return cls(GroupKind.BOOST, complex_boost_matrix(np.asarray(r, dtype=float)))

    def __matmul__(self, other: "ComplexGroupElement") -> "ComplexGroupElement":
        kind = self.kind if self.kind == other.kind else GroupKind.GENERAL
        return ComplexGroupElement(kind, self.matrix @ other.matrix)

    def inverse(self) -> "ComplexGroupElement":
        return ComplexGroupElement(self.kind, np.linalg.inv(self.matrix))

    def metric_residual(self, relative: bool = False) -> float:
        return complex_group_metric_residual(self.matrix, relative)

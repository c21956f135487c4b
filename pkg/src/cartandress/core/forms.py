"""
Matrix-valued differential forms on the chart.

A form of degree p stores one smooth value per increasing index tuple (μ₁ < … < μ_p); its
evaluator returns the complete component dictionary as jets at a point. Orientation is
(x⁰, x¹, x², x³) with ε₀₁₂₃ = +1.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from cartandress.core.algebra import ETA
from cartandress.core.exceptions import DegenerateFieldError, FormError
from cartandress.core.fields import JetMemo, SmoothMap
from cartandress.core.jets import DIM, Jet, contract, determinant

Index = Tuple[int, ...]
Components = Dict[Index, Jet]
Product = Callable[[Jet, Jet], Jet]

DEGENERACY_THRESHOLD = 1e-12


@lru_cache(maxsize=None)
def basis(degree: int) -> Tuple[Index, ...]:
    return tuple(combinations(range(DIM), degree))


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting seq; 0 when an index repeats."""
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def matrix_product(a: Jet, b: Jet) -> Jet:
    """Value product used by wedge: elementwise for scalars, matrix product otherwise."""
    if a.ndim == 0 or b.ndim == 0:
        return a * b
    return a @ b


def outer_product(a: Jet, b: Jet) -> Jet:
    return contract("i,j->ij", a, b)


class MatrixForm:
    """Degree-p differential form with values of a fixed shape."""

    __array_ufunc__ = None

    def __init__(
        self,
        degree: int,
        evaluate: Callable[[np.ndarray, int], Components],
        shape: Tuple[int, ...] = (),
        dtype=float,
        label: str = "",
    ):
        if not 0 <= degree <= DIM:
            raise FormError(f"form degree must lie in 0..{DIM}, got {degree}")
        self.degree = degree
        self.shape = tuple(shape)
        self.dtype = np.dtype(dtype)
        self.label = label
        self._evaluate = evaluate
        self._memo = JetMemo()

    def jets(self, x: Sequence[float], order: int) -> Components:
        return self._memo.lookup(np.asarray(x, dtype=float), order, self._evaluate)

    def component(self, index: Index) -> SmoothMap:
        index = tuple(index)
        if index not in basis(self.degree):
            raise FormError(f"{index} is not an increasing index tuple of length {self.degree}")
        return SmoothMap(lambda x, order: self.jets(x, order)[index], self.shape, f"{self.label}{index}")

    def values(self, x: Sequence[float]) -> np.ndarray:
        """Component values stacked in basis order, shape (n_components, *shape)."""
        comps = self.jets(x, 0)
        return np.stack([np.broadcast_to(comps[i].value, self.shape) for i in basis(self.degree)])

    def __repr__(self) -> str:
        return f"MatrixForm({self.label or '?'}, degree={self.degree}, shape={self.shape})"

    # constructors -------------------------------------------------------------------------

    @classmethod
    def from_map(cls, smap: SmoothMap, label: str = "", dtype=float) -> "MatrixForm":
        return cls(0, lambda x, order: {(): smap.jet(x, order)}, smap.shape, dtype, label or smap.label)

    @classmethod
    def from_components(
        cls,
        degree: int,
        components: Dict[Index, SmoothMap],
        shape: Tuple[int, ...],
        dtype=float,
        label: str = "",
    ) -> "MatrixForm":
        for index in components:
            if tuple(index) not in basis(degree):
                raise FormError(f"{index} is not an increasing index tuple of length {degree}")

        def evaluate(x, order):
            return {
                i: components[i].jet(x, order) if i in components else Jet.zeros(shape, order, dtype)
                for i in basis(degree)
            }

        return cls(degree, evaluate, shape, dtype, label)

    @classmethod
    def zero(cls, degree: int, shape: Tuple[int, ...] = (), dtype=float) -> "MatrixForm":
        return cls(
            degree,
            lambda x, order: {i: Jet.zeros(shape, order, dtype) for i in basis(degree)},
            shape,
            dtype,
            "0",
        )

    # coefficient-wise operations ----------------------------------------------------------

    def map_components(self, fn: Callable[[Jet], Jet], shape=None, dtype=None, label: str = "") -> "MatrixForm":
        return MatrixForm(
            self.degree,
            lambda x, order: {i: fn(j) for i, j in self.jets(x, order).items()},
            self.shape if shape is None else shape,
            self.dtype if dtype is None else dtype,
            label or self.label,
        )

    def map(self, linear: Callable[[np.ndarray], np.ndarray], shape, dtype=None) -> "MatrixForm":
        """Apply a batch-linear value map to every component."""
        return self.map_components(lambda j: j.apply(linear), shape, dtype)

    def combine_map(self, m: SmoothMap, product: Product, shape=None, dtype=None) -> "MatrixForm":
        """Pointwise product(ω_I, m) on every component."""
        if shape is None:
            shape = product(Jet.zeros(self.shape, 0), Jet.zeros(m.shape, 0)).shape
        return MatrixForm(
            self.degree,
            lambda x, order: {i: product(j, m.jet(x, order)) for i, j in self.jets(x, order).items()},
            shape,
            np.result_type(self.dtype, dtype or float),
            f"{self.label}·{m.label}",
        )

    def left(self, m: SmoothMap, dtype=None) -> "MatrixForm":
        """m·ω pointwise."""
        return self.combine_map(m, lambda j, mj: matrix_product(mj, j), dtype=dtype)

    def right(self, m: SmoothMap, dtype=None) -> "MatrixForm":
        """ω·m pointwise."""
        return self.combine_map(m, matrix_product, dtype=dtype)

    def scale(self, f: SmoothMap) -> "MatrixForm":
        return MatrixForm(
            self.degree,
            lambda x, order: {i: f.jet(x, order) * j for i, j in self.jets(x, order).items()},
            self.shape,
            self.dtype,
            self.label,
        )

    def __getitem__(self, key) -> "MatrixForm":
        shape = np.empty(self.shape, dtype=np.int8)[key].shape
        return self.map_components(lambda j: j[key], shape, label=f"{self.label}[{key}]")

    def conj(self) -> "MatrixForm":
        return self.map_components(lambda j: j.conj())

    @property
    def T(self) -> "MatrixForm":
        return self.map_components(lambda j: j.T, self.shape[::-1])

    def __mul__(self, c) -> "MatrixForm":
        return self.map_components(lambda j: j * c, dtype=np.result_type(self.dtype, np.asarray(c).dtype))

    __rmul__ = __mul__

    def __neg__(self) -> "MatrixForm":
        return self.map_components(lambda j: -j)

    def _combine(self, other: "MatrixForm", op) -> "MatrixForm":
        if other.degree != self.degree:
            raise FormError(f"cannot combine forms of degree {self.degree} and {other.degree}")
        shape = tuple(np.broadcast_shapes(self.shape, other.shape))

        def evaluate(x, order):
            mine, theirs = self.jets(x, order), other.jets(x, order)
            return {i: op(mine[i], theirs[i]) for i in basis(self.degree)}

        return MatrixForm(self.degree, evaluate, shape, np.result_type(self.dtype, other.dtype), self.label)

    def __add__(self, other: "MatrixForm") -> "MatrixForm":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "MatrixForm") -> "MatrixForm":
        return self._combine(other, lambda a, b: a - b)


def exterior_derivative(omega: MatrixForm) -> MatrixForm:
    """(dω)_J = Σ_k (−1)^k ∂_{J_k} ω_{J without J_k}."""
    if omega.degree >= DIM:
        raise FormError("exterior derivative of a top-degree form")
    degree = omega.degree + 1

    def evaluate(x, order):
        comps = omega.jets(x, order + 1)
        out = {}
        for J in basis(degree):
            total = None
            for k, mu in enumerate(J):
                rest = J[:k] + J[k + 1:]
                term = comps[rest].partial(mu)
                term = term if k % 2 == 0 else -term
                total = term if total is None else total + term
            out[J] = total
        return out

    return MatrixForm(degree, evaluate, omega.shape, omega.dtype, f"d{omega.label}")


def _product_shape(a: MatrixForm, b: MatrixForm, product: Product) -> Tuple[Tuple[int, ...], np.dtype]:
    sample = product(Jet.zeros(a.shape, 0, a.dtype), Jet.zeros(b.shape, 0, b.dtype))
    return sample.shape, sample.dtype


def wedge(omega: MatrixForm, chi: MatrixForm, product: Optional[Product] = None) -> MatrixForm:
    """ω∧χ with values multiplied by ``product`` (matrix product by default)."""
    product = product or matrix_product
    degree = omega.degree + chi.degree
    if degree > DIM:
        raise FormError(f"wedge of degrees {omega.degree} and {chi.degree} exceeds {DIM}")
    try:
        shape, dtype = _product_shape(omega, chi, product)
    except ValueError as e:
        raise FormError(f"incompatible value shapes {omega.shape} and {chi.shape}: {e}") from e

    terms = {K: [] for K in basis(degree)}
    for I in basis(omega.degree):
        for J in basis(chi.degree):
            sign = permutation_sign(I + J)
            if sign:
                terms[tuple(sorted(I + J))].append((sign, I, J))

    def evaluate(x, order):
        left, right = omega.jets(x, order), chi.jets(x, order)
        out = {}
        for K, pieces in terms.items():
            total = Jet.zeros(shape, order, dtype)
            for sign, I, J in pieces:
                term = product(left[I], right[J])
                total = total + term if sign > 0 else total - term
            out[K] = total
        return out

    return MatrixForm(degree, evaluate, shape, dtype, f"{omega.label}∧{chi.label}")


def metric_jets(g: SmoothMap, x: np.ndarray, order: int):
    gj = g.jet(x, order)
    det = determinant(gj)
    if abs(float(det.value)) < DEGENERACY_THRESHOLD:
        raise DegenerateFieldError(f"degenerate metric (det g = {float(det.value):.3e})", x)
    root = (det * float(np.sign(det.value))).sqrt()
    return gj.inv(), root


def _raise_indices(ginv: Jet, comps: Components, degree: int) -> Components:
    """ω^I = Σ_K det(g^{I K}) ω_K over increasing tuples."""
    if degree == 0:
        return dict(comps)
    raised = {}
    for I in basis(degree):
        total = None
        for K in basis(degree):
            minor = determinant(ginv[np.ix_(I, K)])
            term = minor * comps[K]
            total = term if total is None else total + term
        raised[I] = total
    return raised


def hodge_star(omega: MatrixForm, g: SmoothMap) -> MatrixForm:
    """(*ω)_J = √|g| ε_{IJ} ω^I with I the increasing complement of J; entrywise on values."""
    degree = DIM - omega.degree

    def evaluate(x, order):
        ginv, root = metric_jets(g, x, order)
        raised = _raise_indices(ginv, omega.jets(x, order), omega.degree)
        out = {}
        for J in basis(degree):
            I = tuple(mu for mu in range(DIM) if mu not in J)
            sign = permutation_sign(I + J)
            out[J] = root * raised[I] * float(sign)
        return out

    return MatrixForm(degree, evaluate, omega.shape, omega.dtype, f"*{omega.label}")


def volume_form(g: SmoothMap) -> MatrixForm:
    """√|det g| dx⁰∧dx¹∧dx²∧dx³."""
    return hodge_star(MatrixForm.from_map(SmoothMap.constant(1.0, "1")), g)


def hodge_sign(degree: int, g_value: np.ndarray) -> int:
    """** = (−1)^{p(4−p)}·sign(det g) on p-forms."""
    return (-1) ** (degree * (DIM - degree)) * int(np.sign(np.linalg.det(g_value)))


def max_residual(forms: Iterable[MatrixForm], points: Iterable[Sequence[float]]) -> float:
    """Largest absolute component value of the given forms over the points."""
    worst = 0.0
    for x in points:
        for form in forms:
            worst = max(worst, float(np.max(np.abs(form.values(x)), initial=0.0)))
    return worst


def signature(g_value: np.ndarray) -> Tuple[int, int]:
    """(#positive, #negative) eigenvalues of a symmetric metric value."""
    eig = np.linalg.eigvalsh(0.5 * (g_value + g_value.T))
    return int(np.sum(eig > 0)), int(np.sum(eig < 0))


@dataclass(frozen=True, eq=False)
class Tetrad:
    """Frame field e^a_μ; rows are frame indices, columns chart indices."""

    e: SmoothMap

    @cached_property
    def metric(self) -> SmoothMap:
        """g = eᵀηe."""
        return SmoothMap.lift(lambda e: e.T @ ETA @ e, self.e, shape=(DIM, DIM), label="g")

    @cached_property
    def inverse(self) -> SmoothMap:
        """E^μ_a with E e = 1."""
        return self.e.inv()

    @cached_property
    def theta(self) -> MatrixForm:
        """Soldering 1-form θ^a = e^a_μ dx^μ."""
        return MatrixForm(
            1,
            lambda x, order: {(mu,): self.e.jet(x, order)[:, mu] for mu in range(DIM)},
            (DIM,),
            float,
            "θ",
        )

    @classmethod
    def from_theta(cls, theta: MatrixForm) -> "Tetrad":
        if theta.degree != 1 or theta.shape != (DIM,):
            raise FormError(f"soldering form must be a vector 1-form, got {theta}")

        def evaluate(x, order):
            comps = theta.jets(x, order)
            return Jet.stack([comps[(mu,)] for mu in range(DIM)], axis=-1)

        return cls(SmoothMap(evaluate, (DIM, DIM), "e"))

    def check_regular(self, points: Iterable[Sequence[float]]) -> None:
        for x in points:
            det = np.linalg.det(self.e(x))
            if abs(det) < DEGENERACY_THRESHOLD:
                raise DegenerateFieldError(f"singular tetrad (det e = {det:.3e})", x)

    def signature(self, x: Sequence[float]) -> Tuple[int, int]:
        return signature(self.metric(x))

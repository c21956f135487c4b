"""
Truncated multivariate Taylor (jet) arithmetic in the four chart coordinates.

A jet of order K at a point x stores the Taylor coefficients c_m = ∂^m f(x) / m! for every
multi-index m with |m| <= K. Monomials are ordered by total degree, so the coefficient list of
order K is a prefix of the one of order K + 1 and truncation is a slice.

Coefficients live on the leading axis: a jet of a 6×6 matrix of order K has coefficient array
shape (N_K, 6, 6). Linear maps therefore act on jets by acting on the coefficient stack, and
products use a precomputed pair table.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

DIM = 4
_BATCH = "Z"

Number = Union[int, float, complex]
Operand = Union["Jet", np.ndarray, Number]


@lru_cache(maxsize=None)
def monomials(order: int) -> Tuple[Tuple[int, ...], ...]:
    """Exponent tuples of all monomials of degree <= order, degree-major."""
    out: List[Tuple[int, ...]] = []
    for degree in range(order + 1):
        for combo in combinations_with_replacement(range(DIM), degree):
            exps = [0] * DIM
            for mu in combo:
                exps[mu] += 1
            out.append(tuple(exps))
    return tuple(out)


def n_coeffs(order: int) -> int:
    return len(monomials(order))


@lru_cache(maxsize=None)
def _index(order: int) -> Dict[Tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomials(order))}


@lru_cache(maxsize=None)
def _product_table(order: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pairs (i, j) of factor coefficients sorted by their product slot, plus segment starts."""
    mons = monomials(order)
    index = _index(order)
    triples = []
    for i, a in enumerate(mons):
        for j, b in enumerate(mons):
            if sum(a) + sum(b) > order:
                continue
            triples.append((index[tuple(x + y for x, y in zip(a, b))], i, j))
    triples.sort()
    slots = np.array([t[0] for t in triples])
    left = np.array([t[1] for t in triples])
    right = np.array([t[2] for t in triples])
    starts = np.flatnonzero(np.r_[True, slots[1:] != slots[:-1]])
    return left, right, starts


@lru_cache(maxsize=None)
def _derivative_table(order: int, mu: int) -> Tuple[np.ndarray, np.ndarray]:
    """Source slots and integer factors mapping an order-K jet to its ∂_mu jet of order K-1."""
    index = _index(order)
    src, factor = [], []
    for m in monomials(order - 1):
        up = list(m)
        up[mu] += 1
        src.append(index[tuple(up)])
        factor.append(float(up[mu]))
    return np.array(src, dtype=int), np.array(factor)


def _matmul_subscripts(nda: int, ndb: int) -> str:
    table = {
        (2, 2): "ij,jk->ik",
        (2, 1): "ij,j->i",
        (1, 2): "j,jk->k",
        (1, 1): "j,j->",
    }
    try:
        return table[(nda, ndb)]
    except KeyError:
        raise ValueError(f"matrix product undefined for value ranks {nda} and {ndb}") from None


def _pad(coeffs: np.ndarray, ndim: int) -> np.ndarray:
    """Insert unit value axes after the coefficient axis so value shapes broadcast."""
    missing = ndim - (coeffs.ndim - 1)
    if missing <= 0:
        return coeffs
    return coeffs.reshape((coeffs.shape[0],) + (1,) * missing + coeffs.shape[1:])


class Jet:
    """Order-K Taylor jet of a scalar, vector or matrix valued map at one chart point."""

    __slots__ = ("coeffs", "order")
    __array_ufunc__ = None

    def __init__(self, coeffs: np.ndarray, order: int):
        coeffs = np.asarray(coeffs)
        if coeffs.shape[0] != n_coeffs(order):
            raise ValueError(
                f"jet of order {order} needs {n_coeffs(order)} coefficients, got {coeffs.shape[0]}"
            )
        self.coeffs = coeffs
        self.order = order

    # construction -------------------------------------------------------------------------

    @classmethod
    def constant(cls, value: Union[np.ndarray, Number], order: int) -> "Jet":
        value = np.asarray(value)
        dtype = np.result_type(value.dtype, float)
        coeffs = np.zeros((n_coeffs(order),) + value.shape, dtype=dtype)
        coeffs[0] = value
        return cls(coeffs, order)

    @classmethod
    def zeros(cls, shape: Tuple[int, ...], order: int, dtype=float) -> "Jet":
        return cls(np.zeros((n_coeffs(order),) + tuple(shape), dtype=dtype), order)

    @classmethod
    def variable(cls, x: Sequence[float], mu: int, order: int) -> "Jet":
        coeffs = np.zeros(n_coeffs(order))
        coeffs[0] = x[mu]
        if order >= 1:
            coeffs[1 + mu] = 1.0
        return cls(coeffs, order)

    @classmethod
    def stack(cls, jets: Sequence["Jet"], axis: int = -1) -> "Jet":
        order = min(j.order for j in jets)
        arrays = [j.truncate(order).coeffs for j in jets]
        axis = axis if axis < 0 else axis + 1
        return cls(np.stack(arrays, axis=axis), order)

    # basic properties ---------------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.coeffs.shape[1:]

    @property
    def ndim(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def dtype(self):
        return self.coeffs.dtype

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError(f"cannot raise a jet of order {self.order} to order {order}")
        if order == self.order:
            return self
        return Jet(self.coeffs[: n_coeffs(order)], order)

    def derivative(self, multi_index: Sequence[int]) -> np.ndarray:
        """Partial derivative ∂^m at the base point; multi_index holds exponents per axis."""
        m = tuple(int(v) for v in multi_index)
        if sum(m) > self.order:
            raise ValueError(f"derivative of order {sum(m)} exceeds jet order {self.order}")
        scale = math.prod(math.factorial(v) for v in m)
        return self.coeffs[_index(self.order)[m]] * scale

    def partial(self, mu: int) -> "Jet":
        if self.order == 0:
            raise ValueError("a jet of order 0 carries no derivative")
        src, factor = _derivative_table(self.order, mu)
        factor = factor.reshape((-1,) + (1,) * self.ndim)
        return Jet(self.coeffs[src] * factor, self.order - 1)

    def gradient(self) -> "Jet":
        """Stack of ∂_mu along a new trailing axis."""
        return Jet.stack([self.partial(mu) for mu in range(DIM)], axis=-1)

    # value-level reshaping ----------------------------------------------------------------

    def __getitem__(self, key) -> "Jet":
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.coeffs[(slice(None),) + key], self.order)

    @property
    def T(self) -> "Jet":
        return Jet(np.swapaxes(self.coeffs, -1, -2), self.order)

    def transpose(self, *axes: int) -> "Jet":
        return Jet(np.transpose(self.coeffs, (0,) + tuple(a + 1 for a in axes)), self.order)

    def conj(self) -> "Jet":
        return Jet(np.conj(self.coeffs), self.order)

    @property
    def H(self) -> "Jet":
        return self.conj().T

    @property
    def real(self) -> "Jet":
        return Jet(self.coeffs.real, self.order)

    @property
    def imag(self) -> "Jet":
        return Jet(self.coeffs.imag, self.order)

    def reshape(self, shape: Tuple[int, ...]) -> "Jet":
        return Jet(self.coeffs.reshape((self.coeffs.shape[0],) + tuple(shape)), self.order)

    def trace(self) -> "Jet":
        return Jet(np.trace(self.coeffs, axis1=-2, axis2=-1), self.order)

    def apply(self, linear) -> "Jet":
        """Apply a linear map acting on arrays with a leading batch axis."""
        return Jet(linear(self.coeffs), self.order)

    # arithmetic ---------------------------------------------------------------------------

    def _pair(self, other: "Jet") -> Tuple["Jet", "Jet"]:
        order = min(self.order, other.order)
        return self.truncate(order), other.truncate(order)

    def __add__(self, other: Operand) -> "Jet":
        if isinstance(other, Jet):
            a, b = self._pair(other)
            nd = max(a.ndim, b.ndim)
            return Jet(_pad(a.coeffs, nd) + _pad(b.coeffs, nd), a.order)
        other = np.asarray(other)
        shape = np.broadcast_shapes(self.shape, other.shape)
        coeffs = np.broadcast_to(_pad(self.coeffs, len(shape)), (self.coeffs.shape[0],) + shape)
        coeffs = coeffs.astype(np.result_type(coeffs.dtype, other.dtype), copy=True)
        coeffs[0] = coeffs[0] + other
        return Jet(coeffs, self.order)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(-self.coeffs, self.order)

    def __sub__(self, other: Operand) -> "Jet":
        return self + (-other)

    def __rsub__(self, other: Operand) -> "Jet":
        return (-self) + other

    def __mul__(self, other: Operand) -> "Jet":
        if isinstance(other, Jet):
            a, b = self._pair(other)
            left, right, starts = _product_table(a.order)
            nd = max(a.ndim, b.ndim)
            terms = _pad(a.coeffs[left], nd) * _pad(b.coeffs[right], nd)
            return Jet(np.add.reduceat(terms, starts, axis=0), a.order)
        other = np.asarray(other)
        return Jet(_pad(self.coeffs, other.ndim) * other, self.order)

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "Jet":
        if isinstance(other, Jet):
            return self * other.reciprocal()
        other = np.asarray(other)
        return Jet(_pad(self.coeffs, other.ndim) / other, self.order)

    def __rtruediv__(self, other: Operand) -> "Jet":
        return self.reciprocal() * other

    def __pow__(self, exponent: Operand) -> "Jet":
        if isinstance(exponent, Jet):
            return (self.log() * exponent).exp()
        if isinstance(exponent, (int, np.integer)) or float(exponent).is_integer():
            n = int(exponent)
            if n < 0:
                return self.reciprocal() ** (-n)
            result = Jet.constant(np.ones(self.shape, dtype=self.dtype), self.order)
            base = self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        return self.power(float(exponent))

    def __rpow__(self, base: Number) -> "Jet":
        return (self * np.log(base)).exp()

    def __matmul__(self, other: Operand) -> "Jet":
        nb = other.ndim if isinstance(other, Jet) else np.ndim(other)
        return contract(_matmul_subscripts(self.ndim, nb), self, other)

    def __rmatmul__(self, other: Operand) -> "Jet":
        return contract(_matmul_subscripts(np.ndim(other), self.ndim), other, self)

    # functions of jets --------------------------------------------------------------------

    def _compose(self, series: Sequence[np.ndarray]) -> "Jet":
        """f(a) from the Taylor series c_n = f^(n)(a0)/n! of f at the base value a0."""
        nilpotent = self - self.value
        total = Jet.constant(series[0], self.order)
        power = None
        for n in range(1, self.order + 1):
            power = nilpotent if power is None else power * nilpotent
            total = total + power * series[n]
        return total

    def exp(self) -> "Jet":
        a0 = self.value
        return self._compose([np.exp(a0) / math.factorial(n) for n in range(self.order + 1)])

    def log(self) -> "Jet":
        a0 = self.value
        series = [np.log(a0)]
        series += [(-1.0) ** (n + 1) / (n * a0**n) for n in range(1, self.order + 1)]
        return self._compose(series)

    def reciprocal(self) -> "Jet":
        a0 = self.value
        return self._compose([(-1.0) ** n / a0 ** (n + 1) for n in range(self.order + 1)])

    def power(self, p: float) -> "Jet":
        a0 = self.value
        series = []
        for n in range(self.order + 1):
            binom = math.prod(p - k for k in range(n)) / math.factorial(n)
            series.append(binom * a0 ** (p - n))
        return self._compose(series)

    def sqrt(self) -> "Jet":
        return self.power(0.5)

    def inv(self) -> "Jet":
        """Matrix inverse: Σ (-M0⁻¹H)^n M0⁻¹ with H the nilpotent part."""
        m0_inv = np.linalg.inv(self.value)
        step = contract("ij,jk->ik", -m0_inv, self - self.value)
        term = Jet.constant(m0_inv, self.order)
        total = term
        for _ in range(self.order):
            term = step @ term
            total = total + term
        return total

    def det(self) -> "Jet":
        return determinant(self)

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, shape={self.shape}, value={self.value!r})"


def contract(subscripts: str, a: Operand, b: Operand) -> Union[Jet, np.ndarray]:
    """Bilinear einsum where either operand may be a jet (subscripts in lower case)."""
    lhs, out = subscripts.split("->")
    sa, sb = lhs.split(",")
    if isinstance(a, Jet) and isinstance(b, Jet):
        a, b = a._pair(b)
        left, right, starts = _product_table(a.order)
        terms = np.einsum(
            f"{_BATCH}{sa},{_BATCH}{sb}->{_BATCH}{out}", a.coeffs[left], b.coeffs[right]
        )
        return Jet(np.add.reduceat(terms, starts, axis=0), a.order)
    if isinstance(a, Jet):
        return Jet(np.einsum(f"{_BATCH}{sa},{sb}->{_BATCH}{out}", a.coeffs, np.asarray(b)), a.order)
    if isinstance(b, Jet):
        return Jet(np.einsum(f"{sa},{_BATCH}{sb}->{_BATCH}{out}", np.asarray(a), b.coeffs), b.order)
    return np.einsum(subscripts, a, b)


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _leibniz_terms(n: int) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
    return tuple((_permutation_sign(p), p) for p in permutations(range(n)))


def determinant(m: Union[Jet, np.ndarray]) -> Union[Jet, np.ndarray]:
    """Leibniz determinant; exact in jet arithmetic."""
    if not isinstance(m, Jet):
        return np.linalg.det(m)
    n = m.shape[-1]
    if n == 0:
        return Jet.constant(1.0, m.order)
    total = None
    for sign, perm in _leibniz_terms(n):
        term = m[0, perm[0]]
        for row in range(1, n):
            term = term * m[row, perm[row]]
        term = term if sign > 0 else -term
        total = term if total is None else total + term
    return total


# Elementwise functions usable from compiled expressions on jets and plain numbers.

def jet_exp(v):
    return v.exp() if isinstance(v, Jet) else np.exp(v)


def jet_log(v):
    return v.log() if isinstance(v, Jet) else np.log(v)


def jet_sqrt(v):
    return v.sqrt() if isinstance(v, Jet) else np.sqrt(v)

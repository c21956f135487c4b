"""
Smooth maps on the chart, evaluated as jets.

A SmoothMap wraps an evaluator ``(x, order) -> Jet`` and composes lazily: arithmetic on maps
builds new maps whose evaluators combine the operand jets. Evaluations are memoized per
(point, order) so shared sub-maps in a long chain are computed once.
"""

from collections import OrderedDict
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from cartandress.core.expressions import compile_expression
from cartandress.core.jets import Jet, contract

Evaluator = Callable[[np.ndarray, int], Jet]

_CACHE_SIZE = 64


class JetMemo:
    """Bounded per-(point, order) memo for jet evaluations."""

    def __init__(self, size: int = _CACHE_SIZE):
        self.size = size
        self._entries: "OrderedDict[tuple, object]" = OrderedDict()

    def lookup(self, x: np.ndarray, order: int, compute: Callable[[np.ndarray, int], object]):
        key = (x.tobytes(), order)
        cached = self._entries.get(key)
        if cached is not None:
            return cached
        result = compute(x, order)
        self._entries[key] = result
        if len(self._entries) > self.size:
            self._entries.popitem(last=False)
        return result


class SmoothMap:
    """Value-shaped smooth map U → ℝ^shape or ℂ^shape."""

    __array_ufunc__ = None

    def __init__(self, evaluate: Evaluator, shape: Tuple[int, ...], label: str = ""):
        self._evaluate = evaluate
        self.shape = tuple(shape)
        self.label = label
        self._memo = JetMemo()

    def jet(self, x: Sequence[float], order: int) -> Jet:
        return self._memo.lookup(np.asarray(x, dtype=float), order, self._evaluate)

    def __call__(self, x: Sequence[float]) -> np.ndarray:
        return self.jet(x, 0).value

    def derivative(self, x: Sequence[float], multi_index: Sequence[int]) -> np.ndarray:
        return self.jet(x, sum(multi_index)).derivative(multi_index)

    def __repr__(self) -> str:
        return f"SmoothMap({self.label or '?'}, shape={self.shape})"

    # constructors -------------------------------------------------------------------------

    @classmethod
    def constant(cls, value, label: str = "") -> "SmoothMap":
        value = np.asarray(value)
        return cls(lambda x, order: Jet.constant(value, order), value.shape, label or "const")

    @classmethod
    def from_expressions(cls, exprs, label: str = "") -> "SmoothMap":
        """Map whose entries are scenario expressions; nested lists give the value shape."""
        array = np.array(exprs, dtype=object)
        compiled = [compile_expression(e) for e in array.ravel()]
        shape = array.shape

        def evaluate(x, order):
            jets = [c.evaluate(x, order) for c in compiled]
            if not shape:
                return jets[0]
            return Jet.stack(jets, axis=-1).reshape(shape)

        return cls(evaluate, shape, label or "expr")

    @classmethod
    def lift(cls, fn: Callable[..., Jet], *maps: "SmoothMap", shape: Tuple[int, ...], label: str = "") -> "SmoothMap":
        """Pointwise map built from the jets of other maps."""
        return cls(lambda x, order: fn(*(m.jet(x, order) for m in maps)), shape, label)

    @classmethod
    def stack(cls, maps: Sequence["SmoothMap"], label: str = "") -> "SmoothMap":
        return cls(
            lambda x, order: Jet.stack([m.jet(x, order) for m in maps], axis=-1),
            maps[0].shape + (len(maps),),
            label,
        )

    # algebra ------------------------------------------------------------------------------

    def _binary(self, other, op, shape, symbol):
        if isinstance(other, SmoothMap):
            return SmoothMap(
                lambda x, order: op(self.jet(x, order), other.jet(x, order)),
                shape,
                f"({self.label}{symbol}{other.label})",
            )
        return SmoothMap(lambda x, order: op(self.jet(x, order), other), shape, self.label)

    def _broadcast_shape(self, other) -> Tuple[int, ...]:
        other_shape = other.shape if isinstance(other, SmoothMap) else np.shape(other)
        return tuple(np.broadcast_shapes(self.shape, other_shape))

    def __add__(self, other: Union["SmoothMap", np.ndarray, float]) -> "SmoothMap":
        return self._binary(other, lambda a, b: a + b, self._broadcast_shape(other), "+")

    __radd__ = __add__

    def __sub__(self, other) -> "SmoothMap":
        return self._binary(other, lambda a, b: a - b, self._broadcast_shape(other), "-")

    def __rsub__(self, other) -> "SmoothMap":
        return (-self) + other

    def __neg__(self) -> "SmoothMap":
        return SmoothMap(lambda x, order: -self.jet(x, order), self.shape, f"-{self.label}")

    def __mul__(self, other) -> "SmoothMap":
        return self._binary(other, lambda a, b: a * b, self._broadcast_shape(other), "*")

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SmoothMap":
        return self._binary(other, lambda a, b: a / b, self._broadcast_shape(other), "/")

    def __rtruediv__(self, other) -> "SmoothMap":
        return SmoothMap(lambda x, order: other / self.jet(x, order), self.shape, f"1/{self.label}")

    def __matmul__(self, other) -> "SmoothMap":
        other_shape = other.shape if isinstance(other, SmoothMap) else np.shape(other)
        shape = _matmul_shape(self.shape, other_shape)
        return self._binary(other, lambda a, b: a @ b, shape, "@")

    def __rmatmul__(self, other) -> "SmoothMap":
        shape = _matmul_shape(np.shape(other), self.shape)
        return SmoothMap(lambda x, order: other @ self.jet(x, order), shape, self.label)

    def einsum(self, subscripts: str, other) -> "SmoothMap":
        out = subscripts.split("->")[1]
        lhs = subscripts.split("->")[0].split(",")
        dims = dict(zip(lhs[0], self.shape))
        other_shape = other.shape if isinstance(other, SmoothMap) else np.shape(other)
        dims.update(zip(lhs[1], other_shape))
        shape = tuple(dims[c] for c in out)
        if isinstance(other, SmoothMap):
            return SmoothMap(
                lambda x, order: contract(subscripts, self.jet(x, order), other.jet(x, order)),
                shape,
                self.label,
            )
        return SmoothMap(lambda x, order: contract(subscripts, self.jet(x, order), other), shape, self.label)

    # unary --------------------------------------------------------------------------------

    def map_jet(self, fn: Callable[[Jet], Jet], shape: Optional[Tuple[int, ...]] = None, label: str = "") -> "SmoothMap":
        return SmoothMap(lambda x, order: fn(self.jet(x, order)), self.shape if shape is None else shape, label or self.label)

    def inv(self) -> "SmoothMap":
        return self.map_jet(lambda j: j.inv(), label=f"{self.label}⁻¹")

    @property
    def T(self) -> "SmoothMap":
        return self.map_jet(lambda j: j.T, self.shape[::-1], f"{self.label}ᵀ")

    @property
    def H(self) -> "SmoothMap":
        return self.map_jet(lambda j: j.H, self.shape[::-1], f"{self.label}*")

    def conj(self) -> "SmoothMap":
        return self.map_jet(lambda j: j.conj())

    def det(self) -> "SmoothMap":
        return self.map_jet(lambda j: j.det(), (), f"det {self.label}")

    def exp(self) -> "SmoothMap":
        return self.map_jet(lambda j: j.exp())

    def log(self) -> "SmoothMap":
        return self.map_jet(lambda j: j.log())

    def sqrt(self) -> "SmoothMap":
        return self.map_jet(lambda j: j.sqrt())

    def __getitem__(self, key) -> "SmoothMap":
        shape = np.empty(self.shape, dtype=np.int8)[key].shape
        return self.map_jet(lambda j: j[key], shape, f"{self.label}[{key}]")

    def partial(self, mu: int) -> "SmoothMap":
        """∂_mu; consumes one jet order."""
        return SmoothMap(lambda x, order: self.jet(x, order + 1).partial(mu), self.shape, f"∂{mu}{self.label}")


def _matmul_shape(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    if len(a) == 2 and len(b) == 2:
        return (a[0], b[1])
    if len(a) == 2 and len(b) == 1:
        return (a[0],)
    if len(a) == 1 and len(b) == 2:
        return (b[1],)
    return ()

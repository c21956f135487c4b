"""
Seeded sample points and random fields for the verification suites.

Random fields are polynomials of degree ≤ 2 in the chart coordinates with bounded
coefficients, so their jets are exact at every order.
"""

import zlib
from typing import Optional, Tuple

import numpy as np

from cartandress.core.algebra import ETA, assemble, cayley, spin_generator, spin_to_lorentz
from cartandress.core.cartan import CartanConnection, GaugeMap
from cartandress.core.fields import SmoothMap
from cartandress.core.forms import MatrixForm, Tetrad
from cartandress.core.jets import DIM, Jet


def sample_points(box: Tuple[float, float], n: int, seed: int) -> np.ndarray:
    """n points uniformly in box⁴, shape (n, 4)."""
    rng = np.random.default_rng(seed)
    return rng.uniform(box[0], box[1], size=(n, DIM))


def suite_rng(seed: int, name: str) -> np.random.Generator:
    """Generator that depends on the run seed and the suite name only."""
    return np.random.default_rng([seed, zlib.crc32(name.encode("utf-8"))])


def polynomial_map(c0: np.ndarray, c1: np.ndarray, c2: np.ndarray, label: str = "poly") -> SmoothMap:
    """c0 + c1_μ x^μ + c2_μν x^μ x^ν (μ ≤ ν) with value shape c0.shape."""
    c0 = np.asarray(c0)

    def evaluate(x, order):
        xs = [Jet.variable(x, mu, order) for mu in range(DIM)]
        total = Jet.constant(c0, order)
        for mu in range(DIM):
            total = total + xs[mu] * c1[mu]
            for nu in range(mu, DIM):
                total = total + (xs[mu] * xs[nu]) * c2[mu, nu]
        return total

    return SmoothMap(evaluate, c0.shape, label)


def lorentz_generator(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random s ∈ so(1,3) as ηB with B antisymmetric."""
    b = rng.normal(scale=scale, size=(DIM, DIM))
    return ETA @ (b - b.T) / 2


def lie_element(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random so(2,4) matrix with every grading block populated."""
    return assemble(
        np.float64(rng.normal(scale=scale)),
        lorentz_generator(rng, scale),
        rng.normal(scale=scale, size=DIM),
        rng.normal(scale=scale, size=DIM),
    )


def sl2c_matrix(rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    return cayley(spin_generator(rng.normal(scale=scale, size=6)))


class FieldSampler:
    """Random smooth fields and gauge maps drawn from one generator."""

    def __init__(self, rng: np.random.Generator, scale: float = 0.2):
        self.rng = rng
        self.scale = scale

    def polynomial(self, shape: Tuple[int, ...] = (), scale: Optional[float] = None, label: str = "poly") -> SmoothMap:
        scale = self.scale if scale is None else scale

        def normal(*lead):
            return self.rng.normal(scale=scale, size=lead + tuple(shape))

        return polynomial_map(normal(), normal(DIM), normal(DIM, DIM), label)

    # gauge parameters ---------------------------------------------------------------------

    def weyl_factor(self) -> SmoothMap:
        """z = exp(p) > 0."""
        return self.polynomial(label="log z").exp()

    def weyl_map(self) -> GaugeMap:
        return GaugeMap.weyl(self.weyl_factor())

    def boost_map(self) -> GaugeMap:
        return GaugeMap.boost(self.polynomial((DIM,), label="r"))

    def sl2c_field(self) -> SmoothMap:
        weights = self.polynomial((6,), label="w")
        return SmoothMap.lift(lambda w: cayley(spin_generator(w)), weights, shape=(2, 2), label="S̄")

    def lorentz_map(self) -> GaugeMap:
        return GaugeMap.lorentz(self.sl2c_field())

    def gauge_map(self) -> GaugeMap:
        """Z·S·K₁ with all three factors random."""
        return self.weyl_map().compose(self.lorentz_map()).compose(self.boost_map())

    # values -------------------------------------------------------------------------------

    def lie_element(self, scale: float = 1.0) -> np.ndarray:
        return lie_element(self.rng, scale)

    def sl2c_matrix(self, scale: float = 0.5) -> np.ndarray:
        return sl2c_matrix(self.rng, scale)

    def lorentz_matrix(self, scale: float = 0.5) -> np.ndarray:
        return spin_to_lorentz(self.sl2c_matrix(scale))

    def spinor(self) -> np.ndarray:
        return self.rng.normal(size=4) + 1j * self.rng.normal(size=4)

    # fields -------------------------------------------------------------------------------

    def tetrad(self, amplitude: float = 0.1) -> Tetrad:
        return Tetrad(SmoothMap.constant(np.eye(DIM), "1") + self.polynomial((DIM, DIM), amplitude, "h"))

    def connection(self, scale: float = 0.3) -> CartanConnection:
        """Degree-2 polynomial so(2,4)-valued 1-form."""
        components = {}
        for mu in range(DIM):
            c0 = lie_element(self.rng, scale)
            c1 = np.stack([lie_element(self.rng, scale) for _ in range(DIM)])
            c2 = np.stack([[lie_element(self.rng, scale) for _ in range(DIM)] for _ in range(DIM)])
            components[(mu,)] = polynomial_map(c0, c1, c2, f"ϖ{mu}")
        return CartanConnection(MatrixForm.from_components(1, components, (6, 6), float, "ϖ"))

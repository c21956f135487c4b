from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Type

import numpy as np

from cartandress.core import suites
from cartandress.core.algebra import ETA, GroupKind, cayley, spin_generator
from cartandress.core.cartan import CartanConnection, GaugeMap, build_normal_connection
from cartandress.core.dressing import DressedFields, DressingChain, Stage, dress_all
from cartandress.core.exceptions import ConfigurationError, DegenerateFieldError
from cartandress.core.fields import SmoothMap
from cartandress.core.forms import MatrixForm, Tetrad
from cartandress.core.interfaces import VerificationSuite
from cartandress.core.jets import DIM
from cartandress.core.lagrangian import LagrangianParams
from cartandress.core.models import RunConfig, Scenario
from cartandress.core.sampling import FieldSampler

SIGMA_THRESHOLD = 1e-12


class FieldBuilder:
    """Builds the undressed fields and gauge maps a scenario describes."""

    def __init__(self, scenario: Scenario, corrupt_p: float = 0.0):
        self.scenario = scenario
        self.corrupt_p = corrupt_p

    def tetrad(self) -> Tetrad:
        spec = self.scenario.tetrad
        eye = np.eye(DIM)
        if spec.kind == "minkowski":
            e = SmoothMap.constant(eye, "1")
        elif spec.kind == "conformal_factor":
            e = SmoothMap.from_expressions(spec.expression, "Ω") * eye
        elif spec.kind == "perturbed":
            e = SmoothMap.constant(eye, "1") + spec.amplitude * SmoothMap.from_expressions(spec.components, "h")
        else:
            e = SmoothMap.from_expressions(spec.components, "e")
        return Tetrad(e)

    def schouten_shift(self) -> Optional[np.ndarray]:
        """Constant η-proportional shift of the Schouten block (scenario shift plus corrupt-p)."""
        shift = self.scenario.connection.schouten_shift + self.corrupt_p
        return shift * ETA if shift else None

    def normal_connection(self, tetrad: Optional[Tetrad] = None) -> CartanConnection:
        return build_normal_connection(tetrad or self.tetrad(), self.schouten_shift())

    def connection(self, tetrad: Optional[Tetrad] = None) -> CartanConnection:
        spec = self.scenario.connection
        tetrad = tetrad or self.tetrad()
        if spec.kind == "normal":
            base = self.normal_connection(tetrad)
            if spec.a is None:
                return base
            A, P = base.A, base.P
        else:
            A = MatrixForm.from_components(
                1, {(mu,): SmoothMap.from_expressions(spec.A[mu], f"A{mu}") for mu in range(DIM)}, (DIM, DIM)
            )
            P = MatrixForm.from_components(
                1, {(mu,): SmoothMap.from_expressions(spec.P[mu], f"P{mu}") for mu in range(DIM)}, (DIM,)
            )
        if spec.a is None:
            a = MatrixForm.zero(1)
        else:
            a = MatrixForm.from_components(
                1, {(mu,): SmoothMap.from_expressions(spec.a[mu], f"a{mu}") for mu in range(DIM)}, ()
            )
        return CartanConnection.from_blocks(a, A, P, tetrad.theta)

    def tractor(self) -> SmoothMap:
        return SmoothMap.from_expressions(self.scenario.tractor, "φ")

    def twistor(self) -> SmoothMap:
        return SmoothMap.from_expressions(self.scenario.twistor, "ψ")

    def fields(self) -> DressedFields:
        tetrad = self.tetrad()
        return DressedFields(Stage.UNDRESSED, self.connection(tetrad), self.tractor(), self.twistor())

    def gauge_map(self, kind: GroupKind) -> Optional[GaugeMap]:
        """Gauge map given by the scenario's parameter fields, None when not specified."""
        spec = self.scenario.gauge
        if kind == GroupKind.WEYL and spec.weyl:
            return GaugeMap.weyl(SmoothMap.from_expressions(spec.weyl, "z"))
        if kind == GroupKind.BOOST and spec.k1:
            return GaugeMap.boost(SmoothMap.from_expressions(spec.k1, "r"))
        if kind == GroupKind.LORENTZ and spec.lorentz:
            weights = SmoothMap.from_expressions(spec.lorentz, "w")
            return GaugeMap.lorentz(
                SmoothMap.lift(lambda w: cayley(spin_generator(w)), weights, shape=(2, 2), label="S̄")
            )
        return None

    def check(self, points: Sequence[Sequence[float]]) -> None:
        """Fail fast on a singular tetrad or a vanishing tractor σ-component at a sample."""
        self.tetrad().check_regular(points)
        tractor = self.tractor()
        for x in points:
            sigma = tractor(x)[5]
            if abs(sigma) < SIGMA_THRESHOLD:
                raise DegenerateFieldError(f"tractor σ-component vanishes ({float(np.real(sigma)):.3e})", x)


@dataclass
class SuiteContext:
    """Everything one suite needs: scenario, sample points, its own generator."""

    scenario: Scenario
    config: RunConfig
    points: np.ndarray
    rng: np.random.Generator
    seed: int

    @cached_property
    def builder(self) -> FieldBuilder:
        return FieldBuilder(self.scenario, self.config.corrupt_p)

    @cached_property
    def sampler(self) -> FieldSampler:
        return FieldSampler(self.rng)

    @cached_property
    def fields(self) -> DressedFields:
        return self.builder.fields()

    @cached_property
    def chain(self) -> DressingChain:
        return dress_all(self.fields)

    @property
    def params(self) -> LagrangianParams:
        return LagrangianParams(self.scenario.lagrangian.alpha, self.scenario.lagrangian.beta)

    def gauge_map(self, kind: GroupKind) -> GaugeMap:
        """Scenario gauge map of the given kind, random when the scenario has none."""
        given = self.builder.gauge_map(kind)
        if given is not None:
            return given
        if kind == GroupKind.WEYL:
            return self.sampler.weyl_map()
        if kind == GroupKind.BOOST:
            return self.sampler.boost_map()
        if kind == GroupKind.LORENTZ:
            return self.sampler.lorentz_map()
        return self.sampler.gauge_map()


class SuiteFactory:
    """Factory for creating verification suites by name."""

    _suites: Dict[str, Type[VerificationSuite]] = {suite.name: suite for suite in suites.ALL_SUITES}

    @classmethod
    def names(cls) -> List[str]:
        return list(cls._suites.keys())

    @classmethod
    def create(cls, name: str) -> VerificationSuite:
        """
        Create a verification suite by name.

        Raises:
            ConfigurationError: If the suite is unknown.
        """
        suite_class = cls._suites.get(name)
        if not suite_class:
            raise ConfigurationError(f"Unknown suite: {name}. Available: {cls.names()}")
        return suite_class()

    @classmethod
    def resolve(cls, names: Sequence[str]) -> List[str]:
        """Requested suite names in registry order; all suites when none are requested."""
        if not names:
            return cls.names()
        for name in names:
            cls.create(name)
        return [n for n in cls.names() if n in set(names)]

import argparse
from dataclasses import asdict, dataclass, field, fields as dataclass_fields
from typing import Any, Dict, List, Optional, Tuple

from cartandress.core.exceptions import ConfigurationError, ScenarioError

TETRAD_KINDS = ("minkowski", "conformal_factor", "perturbed", "explicit")
CONNECTION_KINDS = ("normal", "explicit_blocks")


def _expr_list(value: Any, length: int, what: str) -> List[str]:
    if not isinstance(value, (list, tuple)) or len(value) != length:
        raise ScenarioError(f"{what} must be a list of {length} expressions, got {value!r}")
    return [str(v) for v in value]


def _expr_matrix(value: Any, rows: int, cols: int, what: str) -> List[List[str]]:
    if not isinstance(value, (list, tuple)) or len(value) != rows:
        raise ScenarioError(f"{what} must have {rows} rows, got {value!r}")
    return [_expr_list(row, cols, f"{what} row") for row in value]


@dataclass
class ChartSpec:
    """Sampling box [min, max]⁴, number of sample points and seed."""
    box: Tuple[float, float] = (-0.5, 0.5)
    num_points: int = 20
    seed: int = 0

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ChartSpec":
        box = tuple(float(v) for v in data.get("box", cls.box))
        if len(box) != 2 or not box[0] < box[1]:
            raise ScenarioError(f"chart box must be [min, max] with min < max, got {list(box)}")
        num_points = int(data.get("num_points", data.get("numPoints", cls.num_points)))
        if num_points < 1:
            raise ScenarioError(f"num_points must be at least 1, got {num_points}")
        return cls(box=box, num_points=num_points, seed=int(data.get("seed", cls.seed)))


@dataclass
class TetradSpec:
    """
    Tetrad preset.

    minkowski: e = 1; conformal_factor: e = Ω(x)·1 from ``expression``;
    perturbed: e = 1 + amplitude·h with ``components`` the 4×4 expressions of h;
    explicit: e given entrywise by ``components``.
    """
    kind: str = "minkowski"
    expression: Optional[str] = None
    amplitude: float = 1.0
    components: Optional[List[List[str]]] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TetradSpec":
        kind = data.get("kind", "minkowski")
        if kind not in TETRAD_KINDS:
            raise ScenarioError(f"Unknown tetrad kind: {kind}. Available: {list(TETRAD_KINDS)}")
        spec = cls(kind=kind, expression=data.get("expression"), amplitude=float(data.get("amplitude", 1.0)))
        if kind == "conformal_factor" and not spec.expression:
            raise ScenarioError("conformal_factor tetrad needs an 'expression'")
        if kind in ("perturbed", "explicit"):
            if "components" not in data:
                raise ScenarioError(f"{kind} tetrad needs 4x4 'components'")
            spec.components = _expr_matrix(data["components"], 4, 4, "tetrad components")
        return spec


@dataclass
class ConnectionSpec:
    """
    Cartan connection preset.

    normal: built from the tetrad, optionally with an explicit Weyl block ``a`` (4 expressions
    a_μ) and a constant ``schouten_shift`` added to the Schouten block.
    explicit_blocks: ``A`` as 4 component matrices A_μ (4×4), ``P`` as 4 covectors P_μ,
    optional ``a``; the soldering block always comes from the tetrad.
    """
    kind: str = "normal"
    a: Optional[List[str]] = None
    A: Optional[List[List[List[str]]]] = None
    P: Optional[List[List[str]]] = None
    schouten_shift: float = 0.0

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ConnectionSpec":
        kind = data.get("kind", "normal")
        if kind not in CONNECTION_KINDS:
            raise ScenarioError(f"Unknown connection kind: {kind}. Available: {list(CONNECTION_KINDS)}")
        spec = cls(kind=kind, schouten_shift=float(data.get("schouten_shift", 0.0)))
        if data.get("a") is not None:
            spec.a = _expr_list(data["a"], 4, "connection block a")
        if kind == "explicit_blocks":
            if "A" not in data or "P" not in data:
                raise ScenarioError("explicit_blocks connection needs both 'A' and 'P'")
            if not isinstance(data["A"], list) or len(data["A"]) != 4:
                raise ScenarioError("connection block A must list 4 component matrices")
            spec.A = [_expr_matrix(m, 4, 4, "connection block A") for m in data["A"]]
            spec.P = _expr_matrix(data["P"], 4, 4, "connection block P")
        return spec


@dataclass
class GaugeSpec:
    """Gauge parameter fields: K₁ covector, positive Weyl factor, six SL(2,ℂ) generator weights."""
    k1: Optional[List[str]] = None
    weyl: Optional[str] = None
    lorentz: Optional[List[str]] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GaugeSpec":
        spec = cls(weyl=str(data["weyl"]) if data.get("weyl") is not None else None)
        if data.get("k1") is not None:
            spec.k1 = _expr_list(data["k1"], 4, "gauge k1")
        if data.get("lorentz") is not None:
            spec.lorentz = _expr_list(data["lorentz"], 6, "gauge lorentz")
        return spec


@dataclass
class LagrangianSpec:
    alpha: float = -2.0
    beta: float = 1.0


@dataclass
class Scenario:
    """Field configuration on one chart, parsed from a scenario file."""

    name: str = "scenario"
    chart: ChartSpec = field(default_factory=ChartSpec)
    tetrad: TetradSpec = field(default_factory=TetradSpec)
    connection: ConnectionSpec = field(default_factory=ConnectionSpec)
    tractor: List[str] = field(default_factory=lambda: ["0", "0", "0", "0", "0", "1"])
    twistor: List[str] = field(default_factory=lambda: ["0", "0", "0", "0"])
    gauge: GaugeSpec = field(default_factory=GaugeSpec)
    lagrangian: LagrangianSpec = field(default_factory=LagrangianSpec)
    tolerances: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], name: Optional[str] = None) -> "Scenario":
        if not isinstance(data, dict):
            raise ScenarioError(f"scenario must be a mapping, got {type(data).__name__}")
        try:
            lagrangian = data.get("lagrangian", {})
            return cls(
                name=name or data.get("name", "scenario"),
                chart=ChartSpec.from_dict(data.get("chart", {})),
                tetrad=TetradSpec.from_dict(data.get("tetrad", {})),
                connection=ConnectionSpec.from_dict(data.get("connection", {})),
                tractor=_expr_list(data.get("tractor", cls().tractor), 6, "tractor"),
                twistor=_expr_list(data.get("twistor", cls().twistor), 4, "twistor"),
                gauge=GaugeSpec.from_dict(data.get("gauge", data.get("gaugeParams", {}))),
                lagrangian=LagrangianSpec(
                    alpha=float(lagrangian.get("alpha", LagrangianSpec.alpha)),
                    beta=float(lagrangian.get("beta", LagrangianSpec.beta)),
                ),
                tolerances={str(k): float(v) for k, v in data.get("tolerances", {}).items()},
            )
        except (TypeError, ValueError, AttributeError) as e:
            raise ScenarioError(f"malformed scenario: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class RunConfig:
    """Verification run settings with support for CLI and YAML sources."""

    seed: Optional[int] = None
    points: Optional[int] = None
    box: Optional[Tuple[float, float]] = None
    lagrangian_points: int = 10
    threads: Optional[int] = None
    suites: List[str] = field(default_factory=list)
    tolerance: Optional[float] = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    corrupt_p: float = 0.0
    fd_step: float = 1e-4
    report_path: Optional[str] = None
    report_dir: str = "reports"
    storage_backend: str = "local"

    @classmethod
    def from_dict(
        cls,
        data: Dict[str, Any],
        cli_args: Optional[argparse.Namespace] = None
    ) -> "RunConfig":
        """Build RunConfig from a dictionary with optional CLI overrides."""
        cfg_data = data.copy()

        if cli_args:
            if getattr(cli_args, "seed", None) is not None:
                cfg_data["seed"] = int(cli_args.seed)
            if getattr(cli_args, "points", None) is not None:
                cfg_data["points"] = int(cli_args.points)
            if getattr(cli_args, "suite", None):
                cfg_data["suites"] = list(cli_args.suite)
            if getattr(cli_args, "tol", None) is not None:
                cfg_data["tolerance"] = float(cli_args.tol)
            if getattr(cli_args, "report", None):
                cfg_data["report_path"] = cli_args.report
            if getattr(cli_args, "corrupt_p", None):
                cfg_data["corrupt_p"] = float(cli_args.corrupt_p)

        valid_fields = {f.name for f in dataclass_fields(cls)}
        filtered = {k: v for k, v in cfg_data.items() if k in valid_fields}

        if filtered.get("box") is not None:
            filtered["box"] = tuple(float(v) for v in filtered["box"])
        cfg = cls(**filtered)
        if cfg.points is not None and cfg.points < 1:
            raise ConfigurationError(f"points must be at least 1, got {cfg.points}")
        if cfg.box is not None and (len(cfg.box) != 2 or not cfg.box[0] < cfg.box[1]):
            raise ConfigurationError(f"box must be [min, max] with min < max, got {list(cfg.box)}")
        if cfg.tolerance is not None and cfg.tolerance <= 0:
            raise ConfigurationError(f"tolerance must be positive, got {cfg.tolerance}")
        for name, tol in cfg.tolerances.items():
            if tol <= 0:
                raise ConfigurationError(f"tolerance for {name} must be positive, got {tol}")
        return cfg


@dataclass
class SuiteResult:
    name: str
    max_residual: float
    tolerance: float
    points: int
    seed: int
    reference: str
    details: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "points": self.points,
            "seed": self.seed,
            "reference": self.reference,
            "details": dict(sorted(self.details.items())),
        }


CONVENTIONS = {
    "metric_signature": "eta = diag(+1, -1, -1, -1)",
    "hodge_sign": "** = (-1)^(p(4-p)) sign(det g); +1 on 1-forms for eta",
    "orientation": "epsilon_0123 = +1 on (x0, x1, x2, x3)",
    "schouten": "P_ab = -1/2 (Ric_ab - R/6 eta_ab), Ric_bd = R^c_bcd",
    "trace_normalization": "fundamental 6x6 trace in 1/2 Tr(Omega ^ *Omega)",
    "hodge_metric": "Weyl-invariant metric bs g at every dressing stage",
    "complex_blocks": "v-bar = v^a sigma_a / sqrt(2) in the su(2,2) grading blocks",
    "yukawa_norm": "|phi| = sqrt(<phi, phi>), undefined when <phi, phi> < 0",
}


@dataclass
class Report:
    scenario: str
    seed: int
    suites: List[SuiteResult]
    timestamp: str
    metadata: Dict[str, Any] = field(default_factory=lambda: {"conventions": dict(CONVENTIONS)})

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "timestamp": self.timestamp,
            "verdict": self.verdict,
            "metadata": self.metadata,
            "suites": [s.to_dict() for s in self.suites],
        }


@dataclass
class LagrangianResult:
    """Density table of one scenario with the potential analysis and the stage agreement."""

    scenario: str
    seed: int
    potential: Dict[str, Any]
    rows: List[Dict[str, Any]]
    max_stage_delta: float
    tolerance: float
    timestamp: str
    metadata: Dict[str, Any] = field(default_factory=lambda: {"conventions": dict(CONVENTIONS)})

    @property
    def passed(self) -> bool:
        return self.max_stage_delta <= self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "timestamp": self.timestamp,
            "verdict": self.verdict,
            "metadata": self.metadata,
            "potential": self.potential,
            "max_stage_delta": self.max_stage_delta,
            "tolerance": self.tolerance,
            "rows": self.rows,
        }

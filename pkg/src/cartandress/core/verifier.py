import concurrent.futures
import math
import multiprocessing
import os
from datetime import datetime, timezone
from typing import Dict, List, Optional, Tuple

import numpy as np

from cartandress.core.dressing import dress_all
from cartandress.core.exceptions import (
    ConfigurationError,
    DegenerateFieldError,
    LagrangianError,
    ScenarioError,
    VerificationError,
)
from cartandress.core.factories import FieldBuilder, SuiteContext, SuiteFactory
from cartandress.core.interfaces import ReportRepository, VerificationSuite
from cartandress.core.lagrangian import LagrangianDensity, LagrangianParams, vev_mass
from cartandress.core.models import LagrangianResult, Report, RunConfig, Scenario, SuiteResult
from cartandress.core.sampling import sample_points, suite_rng
from cartandress.io.file_writer import FileWriter
from cartandress.utils.logger import setup_logger

logger = setup_logger()

THREADS_ENV = "CARTAN_DRESS_THREADS"

# raised unwrapped so callers can tell input problems and degenerate samples from crashes
_PASSTHROUGH = (DegenerateFieldError, ScenarioError, LagrangianError, VerificationError)


def resolve_tolerance(suite: VerificationSuite, scenario: Scenario, config: RunConfig) -> float:
    """--tol beats the scenario's tolerance map, which beats config.yaml, which beats the suite default."""
    if config.tolerance is not None:
        return config.tolerance
    if suite.name in scenario.tolerances:
        return scenario.tolerances[suite.name]
    if suite.name in config.tolerances:
        return config.tolerances[suite.name]
    return suite.default_tolerance


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _max_residual(residuals: Dict[str, float]) -> float:
    values = [float(v) for v in residuals.values()]
    if any(not math.isfinite(v) for v in values):
        return math.inf
    return max(values, default=0.0)


def _run_single_suite(args: Tuple[Scenario, RunConfig, str, int, np.ndarray]) -> SuiteResult:
    """Helper function for ProcessPoolExecutor to run one suite."""
    scenario, config, name, seed, points = args

    try:
        suite = SuiteFactory.create(name)
        context = SuiteContext(scenario, config, points, suite_rng(seed, name), seed)
        residuals = suite.evaluate(context)
        return SuiteResult(
            name=name,
            max_residual=_max_residual(residuals),
            tolerance=resolve_tolerance(suite, scenario, config),
            points=len(points),
            seed=seed,
            reference=suite.reference,
            details={k: float(v) for k, v in residuals.items()},
        )
    except _PASSTHROUGH:
        raise
    except Exception as e:
        raise VerificationError(f"Suite {name} failed: {e}") from e


class VerificationOrchestrator:
    """
    Runs the selected suites of one scenario, in parallel when more than one worker is allowed,
    and assembles the report in registry order.
    """

    def __init__(self, scenario: Scenario, config: RunConfig, writer: Optional[ReportRepository] = None):
        self.scenario = scenario
        self.config = config
        self.writer = writer or FileWriter()

    @property
    def seed(self) -> int:
        return self.config.seed if self.config.seed is not None else self.scenario.chart.seed

    def points(self) -> np.ndarray:
        chart = self.scenario.chart
        n = self.config.points or chart.num_points
        return sample_points(self.config.box or chart.box, n, self.seed)

    def max_workers(self, n_tasks: int) -> int:
        threads = self.config.threads
        if threads is None and os.getenv(THREADS_ENV):
            try:
                threads = int(os.environ[THREADS_ENV])
            except ValueError as e:
                raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {os.environ[THREADS_ENV]!r}") from e
        if threads is None:
            threads = multiprocessing.cpu_count()
        return max(1, min(n_tasks, threads))

    def run(self) -> Report:
        """Run the verification pipeline."""
        names = SuiteFactory.resolve(self.config.suites)
        points = self.points()
        logger.info(f"Verifying scenario {self.scenario.name} (seed {self.seed}, {len(points)} points)")

        # 1. Fail fast on degenerate samples
        FieldBuilder(self.scenario, self.config.corrupt_p).check(points)

        # 2. Run suites
        tasks = [(self.scenario, self.config, name, self.seed, points) for name in names]
        max_workers = self.max_workers(len(tasks))
        logger.info(f"Running {len(tasks)} suites using {max_workers} workers")

        if max_workers == 1:
            results = [_run_single_suite(task) for task in tasks]
        else:
            results = self._run_parallel(tasks, max_workers)

        # 3. Deterministic order regardless of completion order
        by_name = {r.name: r for r in results}
        ordered: List[SuiteResult] = [by_name[name] for name in names]
        for r in ordered:
            log = logger.info if r.passed else logger.warning
            log(f"{r.name}: max residual {r.max_residual:.3e} (tolerance {r.tolerance:.1e}) {r.verdict}")

        report = Report(scenario=self.scenario.name, seed=self.seed, suites=ordered, timestamp=_timestamp())

        # 4. Save
        if self.config.report_path:
            self.writer.write_report(report, self.config.report_path)

        logger.info(f"Verification finished: {report.verdict}")
        return report

    def _run_parallel(self, tasks, max_workers: int) -> List[SuiteResult]:
        results: List[SuiteResult] = []
        try:
            with concurrent.futures.ProcessPoolExecutor(max_workers=max_workers) as executor:
                futures = [executor.submit(_run_single_suite, task) for task in tasks]
                for future in concurrent.futures.as_completed(futures):
                    results.append(future.result())
        except _PASSTHROUGH:
            raise
        except Exception as e:
            logger.error(f"Suite worker failed: {e}")
            raise VerificationError(f"Verification execution failed: {e}") from e
        return results


class LagrangianRunner:
    """Evaluates the Lagrangian density at every dressing stage on the scenario's sample points."""

    def __init__(self, scenario: Scenario, config: RunConfig, writer: Optional[ReportRepository] = None):
        self.scenario = scenario
        self.config = config
        self.writer = writer or FileWriter()
        self.orchestrator = VerificationOrchestrator(scenario, config, self.writer)

    def run(self) -> LagrangianResult:
        points = self.orchestrator.points()[: self.config.lagrangian_points]
        seed = self.orchestrator.seed
        logger.info(f"Evaluating Lagrangian density of {self.scenario.name} at {len(points)} points")

        builder = FieldBuilder(self.scenario, self.config.corrupt_p)
        builder.check(points)
        spec = self.scenario.lagrangian
        params = LagrangianParams(spec.alpha, spec.beta)

        density = LagrangianDensity(dress_all(builder.fields()), params)
        rows = density.table(points)
        max_delta = max((row["stage_delta"] for row in rows), default=0.0)
        tolerance = resolve_tolerance(SuiteFactory.create("lagrangian_stages"), self.scenario, self.config)

        result = LagrangianResult(
            scenario=self.scenario.name,
            seed=seed,
            potential=vev_mass(params).to_dict(),
            rows=rows,
            max_stage_delta=float(max_delta),
            tolerance=tolerance,
            timestamp=_timestamp(),
        )
        logger.info(f"Max stage delta {result.max_stage_delta:.3e} (tolerance {tolerance:.1e}) {result.verdict}")

        if self.config.report_path:
            self.writer.write_lagrangian(result, self.config.report_path)
        return result


# Facade functions
def run_verification(scenario: Scenario, config: RunConfig) -> Report:
    return VerificationOrchestrator(scenario, config).run()


def run_lagrangian(scenario: Scenario, config: RunConfig) -> LagrangianResult:
    return LagrangianRunner(scenario, config).run()

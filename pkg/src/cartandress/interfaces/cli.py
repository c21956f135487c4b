import argparse
import os
import sys
from typing import List, Optional

from cartandress.core.exceptions import (
    CartanDressError,
    ConfigurationError,
    DataSourceError,
    DegenerateFieldError,
    LagrangianError,
    ScenarioError,
)
from cartandress.core.factories import SuiteFactory
from cartandress.core.verifier import run_lagrangian, run_verification
from cartandress.io.file_reader import FileReader
from cartandress.io.file_writer import suite_table, to_json
from cartandress.utils.config_loader import load_and_merge_config

DEFAULT_CONFIG = "config.yaml"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_DEGENERATE = 3

_INPUT_ERRORS = (ScenarioError, ConfigurationError, DataSourceError, LagrangianError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartan-dress",
        description="Numerical verification of conformal Cartan geometry under dressing",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run verification suites on a scenario")
    verify.add_argument("scenario", help="Scenario JSON (or YAML) path")
    verify.add_argument("--suite", action="append", help="Suite to run; repeatable, default all")
    verify.add_argument("--seed", type=int, help="Override the scenario seed")
    verify.add_argument("--points", type=int, help="Number of sample points")
    verify.add_argument("--tol", type=float, help="Tolerance for every selected suite")
    verify.add_argument("--report", help="Write the JSON report here instead of stdout")
    verify.add_argument("--corrupt-p", dest="corrupt_p", type=float, default=0.0,
                        help="Add EPS·η to the Schouten block of the normal connection")
    verify.add_argument("--config", default=DEFAULT_CONFIG, help="YAML config path")

    lagrangian = sub.add_parser("lagrangian", help="Evaluate the Lagrangian density at every stage")
    lagrangian.add_argument("scenario", help="Scenario JSON (or YAML) path")
    lagrangian.add_argument("--seed", type=int, help="Override the scenario seed")
    lagrangian.add_argument("--points", type=int, help="Number of sample points")
    lagrangian.add_argument("--report", help="Write JSON here and the CSV table next to it")
    lagrangian.add_argument("--config", default=DEFAULT_CONFIG, help="YAML config path")

    sub.add_parser("list-suites", help="List available suites")
    return parser


def _load(args: argparse.Namespace):
    config_path = args.config
    if config_path == DEFAULT_CONFIG and not os.path.exists(config_path):
        config_path = None
    cfg = load_and_merge_config(config_path, args)
    scenario = FileReader().load_scenario(args.scenario)
    return scenario, cfg


def _verify(args: argparse.Namespace) -> int:
    scenario, cfg = _load(args)
    report = run_verification(scenario, cfg)
    if cfg.report_path:
        print(suite_table(report))
        print(f"Verdict: {report.verdict}. Report written to {cfg.report_path}")
    else:
        print(to_json(report.to_dict()), end="")
    return EXIT_PASS if report.passed else EXIT_FAIL


def _lagrangian(args: argparse.Namespace) -> int:
    scenario, cfg = _load(args)
    result = run_lagrangian(scenario, cfg)
    if cfg.report_path:
        print(f"Max stage delta {result.max_stage_delta:.3e}: {result.verdict}. "
              f"Report written to {cfg.report_path}")
    else:
        print(to_json(result.to_dict()), end="")
    return EXIT_PASS if result.passed else EXIT_FAIL


def _list_suites() -> int:
    for name in SuiteFactory.names():
        suite = SuiteFactory.create(name)
        print(f"{name:<24} tol={suite.default_tolerance:.0e}  {suite.reference}")
    return EXIT_PASS


def run(argv: Optional[List[str]] = None) -> int:
    """Execute one CLI command and return its exit code."""
    args = build_parser().parse_args(argv)

    try:
        if args.command == "list-suites":
            return _list_suites()
        if args.command == "lagrangian":
            return _lagrangian(args)
        return _verify(args)
    except DegenerateFieldError as e:
        print(f"Degenerate field: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except _INPUT_ERRORS as e:
        print(f"Invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CartanDressError as e:
        print(f"Verification failed: {e}", file=sys.stderr)
        return EXIT_FAIL


def main():
    """Cartan dressing verifier command-line interface."""
    sys.exit(run())


if __name__ == "__main__":
    main()

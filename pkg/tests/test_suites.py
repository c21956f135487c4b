import math

import pytest

from cartandress.core.factories import SuiteFactory
from cartandress.core.suites import NormalitySuite, TwistingMapSuite

FAST_SUITES = [
    "lie_iso",
    "group_metric",
    "bianchi",
    "gauge_covariance",
    "normality",
    "u1_dressing_law",
    "twisting_map",
    "dressed_block_formula",
    "gamma_algebra",
    "dirac_operator",
    "potential_vev",
]


BUNDLED = [
    "minkowski_scenario",
    "vev_scenario",
    "conformal_scenario",
    pytest.param("generic_scenario", marks=pytest.mark.slow),
]


@pytest.mark.parametrize("scenario", BUNDLED)
@pytest.mark.parametrize("name", FAST_SUITES)
def test_suite_passes_on_bundled_scenario(request, make_context, scenario, name):
    suite = SuiteFactory.create(name)
    residuals = suite.evaluate(make_context(request.getfixturevalue(scenario), name))
    assert residuals
    assert all(math.isfinite(v) for v in residuals.values())
    assert max(residuals.values()) <= suite.default_tolerance, residuals


@pytest.mark.slow
@pytest.mark.parametrize(
    "name",
    ["structure_equation", "k1_invariance", "residual_laws", "weyl_erasure", "lagrangian_stages"],
)
def test_heavier_suites_pass_on_conformal_scenario(make_context, conformal_scenario, name):
    suite = SuiteFactory.create(name)
    residuals = suite.evaluate(make_context(conformal_scenario, name, lagrangian_points=1))
    assert max(residuals.values()) <= suite.default_tolerance, residuals


def test_normality_detects_shifted_schouten_block(make_context, minkowski_scenario):
    residuals = NormalitySuite().evaluate(make_context(minkowski_scenario, corrupt_p=0.5))
    assert residuals["w_trace"] > NormalitySuite.default_tolerance
    assert residuals["torsion"] < 1e-12
    assert residuals["f"] < 1e-12


def test_twisting_map_witness_is_not_a_homomorphism(make_context, conformal_scenario):
    residuals = TwistingMapSuite().evaluate(make_context(conformal_scenario, "twisting_map"))
    assert residuals["non_homomorphism"] == 0.0
    assert residuals["composition"] < 1e-9


def test_gauge_covariance_reports_every_kind(make_context, generic_scenario):
    residuals = SuiteFactory.create("gauge_covariance").evaluate(make_context(generic_scenario))
    for kind in ("weyl", "boost", "lorentz", "general"):
        assert f"{kind}_curvature" in residuals
    assert max(residuals.values()) < 1e-8


def test_suites_are_deterministic_per_seed(make_context, minkowski_scenario):
    suite = SuiteFactory.create("lie_iso")
    first = suite.evaluate(make_context(minkowski_scenario, "lie_iso", seed=3))
    second = suite.evaluate(make_context(minkowski_scenario, "lie_iso", seed=3))
    assert first == second

import json
import sys
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from cartandress.core.factories import SuiteContext
from cartandress.core.models import RunConfig, Scenario
from cartandress.core.sampling import sample_points, suite_rng
from cartandress.interfaces.api import app as fastapi_app

SCENARIO_DIR = Path(__file__).parent.parent / "scenarios"


def load_bundled(name: str) -> Scenario:
    with open(SCENARIO_DIR / f"{name}.json", "r", encoding="utf-8") as f:
        return Scenario.from_dict(json.load(f))


@pytest.fixture(scope="session")
def test_client():
    """Provides a FastAPI TestClient for integration testing."""
    return TestClient(fastapi_app)


@pytest.fixture
def isolated_env(tmp_path, monkeypatch):
    """Local storage under tmp_path and no thread override from the environment."""
    monkeypatch.setenv("STORAGE_BACKEND", "local")
    monkeypatch.setenv("LOCAL_DATA_DIR", str(tmp_path))
    monkeypatch.delenv("CARTAN_DRESS_THREADS", raising=False)
    return tmp_path


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def minkowski_scenario() -> Scenario:
    return load_bundled("minkowski")


@pytest.fixture
def conformal_scenario() -> Scenario:
    return load_bundled("conformally_flat")


@pytest.fixture
def generic_scenario() -> Scenario:
    return load_bundled("generic")


@pytest.fixture
def vev_scenario() -> Scenario:
    return load_bundled("vev")


@pytest.fixture
def points():
    """Three fixed chart points well inside every bundled box."""
    return sample_points((-0.3, 0.3), 3, 42)


@pytest.fixture
def make_context(points):
    """Builds a serial SuiteContext on a few points."""

    def build(scenario: Scenario, name: str = "test", seed: int = 0, **config) -> SuiteContext:
        cfg = RunConfig(threads=1, **config)
        return SuiteContext(scenario, cfg, points, suite_rng(seed, name), seed)

    return build


@pytest.fixture
def scenario_file(tmp_path):
    """Writes a scenario mapping to tmp_path and returns its path."""

    def write(data: dict, name: str = "scenario.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write

import logging
from pathlib import Path

import pytest
import yaml

from cartandress.core.exceptions import ConfigurationError, DataSourceError
from cartandress.core.models import RunConfig
from cartandress.utils.config_loader import load_and_merge_config
from cartandress.utils.logger import setup_logger


def test_load_configuration_from_yaml(tmp_path):
    """Config YAML should load into RunConfig properly."""
    yaml_path = tmp_path / "config.yaml"
    yaml_content = {
        "seed": 5,
        "points": 8,
        "box": [-0.2, 0.2],
        "tolerances": {"lie_iso": 1e-9},
        "fd_step": 1e-3,
    }
    yaml_path.write_text(yaml.dump(yaml_content))

    cfg = load_and_merge_config(str(yaml_path))

    assert isinstance(cfg, RunConfig)
    assert cfg.seed == 5
    assert cfg.box == (-0.2, 0.2)
    assert cfg.tolerances == {"lie_iso": 1e-9}
    assert cfg.fd_step == 1e-3


def test_bundled_config_loads():
    cfg = load_and_merge_config(str(Path(__file__).parent.parent / "config.yaml"))
    assert cfg.seed is None
    assert cfg.lagrangian_points == 10
    assert cfg.tolerances["gamma_algebra"] == 1e-11


def test_load_configuration_from_dict():
    cfg = load_and_merge_config({"threads": 2, "suites": ["bianchi"]})
    assert cfg.threads == 2
    assert cfg.suites == ["bianchi"]


def test_load_configuration_none_gives_defaults():
    assert load_and_merge_config(None) == RunConfig()


def test_load_configuration_invalid_source(tmp_path):
    """Non-dict/non-str sources, missing files and non-mapping YAML are configuration errors."""
    with pytest.raises(ConfigurationError):
        load_and_merge_config(12345)
    with pytest.raises(ConfigurationError):
        load_and_merge_config(str(tmp_path / "missing.yaml"))
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigurationError) as exc:
        load_and_merge_config(str(listing))
    assert isinstance(exc.value.__cause__, DataSourceError)
    broken = tmp_path / "broken.yaml"
    broken.write_text("seed: [1\n")
    with pytest.raises(ConfigurationError):
        load_and_merge_config(str(broken))


def test_load_configuration_bad_value():
    with pytest.raises(ConfigurationError):
        load_and_merge_config({"points": "many"})


def test_logger_setup_creates_logger():
    """setup_logger should create or return a valid logger with correct level."""
    logger = setup_logger("DEBUG")
    assert isinstance(logger, logging.Logger)
    assert logger.name == "cartandress"
    assert logger.level == logging.DEBUG


def test_logger_is_singleton_behavior():
    """setup_logger should not duplicate handlers on multiple calls."""
    logger1 = setup_logger("INFO")
    initial_handlers = len(logger1.handlers)

    logger2 = setup_logger("INFO")
    assert logger1 is logger2
    assert len(logger2.handlers) == initial_handlers


def test_logger_level_from_environment(monkeypatch):
    monkeypatch.setenv("CARTAN_DRESS_LOG_LEVEL", "warning")
    assert setup_logger().level == logging.WARNING
    setup_logger("INFO")

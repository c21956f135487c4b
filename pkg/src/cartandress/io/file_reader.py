import json
import os
from typing import Any, Dict

import yaml

from cartandress.core.exceptions import DataSourceError, ScenarioError
from cartandress.core.models import Scenario
from cartandress.io.storage_adapters import get_storage


class FileReader:
    """Scenario and YAML reader with storage adapter support."""

    def __init__(self, storage=None):
        self.storage = storage or get_storage()

    def read_scenario(self, source: str) -> Dict[str, Any]:
        """Read a scenario mapping from JSON (or YAML for .yaml/.yml files)."""
        try:
            text = self.storage.read_text(source)
        except FileNotFoundError as e:
            raise ScenarioError(f"Scenario file not found: {source}") from e
        except Exception as e:
            raise DataSourceError(f"Failed to read scenario: {source} ({e})") from e

        try:
            if source.endswith((".yaml", ".yml")):
                data = yaml.safe_load(text)
            else:
                data = json.loads(text)
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ScenarioError(f"Invalid scenario file: {source} ({e})") from e
        if not isinstance(data, dict):
            raise ScenarioError(f"Invalid scenario structure: {source}")
        return data

    def load_scenario(self, source: str) -> Scenario:
        """Parse a scenario file; the name defaults to the file stem."""
        data = self.read_scenario(source)
        name = data.get("name") or os.path.splitext(os.path.basename(source))[0]
        return Scenario.from_dict(data, name=name)

    @staticmethod
    def read_yaml(path: str) -> Dict[str, Any]:
        """Read YAML configuration from local filesystem."""
        if not os.path.exists(path):
            raise DataSourceError(f"YAML file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except Exception as e:
            raise DataSourceError(f"Failed to read YAML: {path} ({e})") from e
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise DataSourceError(f"Invalid YAML structure: {path}")
        return data

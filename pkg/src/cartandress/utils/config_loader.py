import argparse
from typing import Any, Dict, Optional, Union

from dotenv import load_dotenv

from cartandress.core.exceptions import ConfigurationError, DataSourceError
from cartandress.core.models import RunConfig
from cartandress.io.file_reader import FileReader


def load_and_merge_config(
    data_or_path: Union[str, Dict[str, Any], None],
    cli_args: Optional[argparse.Namespace] = None,
) -> RunConfig:
    """Load RunConfig from a YAML file path or dictionary, after reading ``.env`` if present."""
    load_dotenv(override=False)

    if data_or_path is None:
        data = {}
    elif isinstance(data_or_path, str):
        try:
            data = FileReader.read_yaml(data_or_path)
        except DataSourceError as e:
            raise ConfigurationError(f"Config file unusable: {e}") from e
    elif isinstance(data_or_path, dict):
        data = data_or_path.copy()
    else:
        raise ConfigurationError("Config source must be dict or YAML path")

    try:
        return RunConfig.from_dict(data, cli_args)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"Invalid configuration: {e}") from e

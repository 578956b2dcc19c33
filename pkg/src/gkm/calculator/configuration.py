# Copyright GKM Calculator contributors. All Rights Reserved.

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, Optional

import jsonschema

from .polyalg import GkmError

_logger = logging.getLogger(__name__)

_PACKAGE_DIR = os.path.dirname(os.path.abspath(__file__))
DEFAULT_CONFIG_PATH = os.path.join(_PACKAGE_DIR, "GkmCalculator.json")
CONFIG_SCHEMA_PATH = os.path.join(_PACKAGE_DIR, "schemas", "config.schema.json")


class ConfigurationError(GkmError):
    """Raised when a configuration file cannot be read or does not match the schema"""

    pass


@dataclass(frozen=True)
class CalculatorConfiguration:
    log_level: str = "WARNING"
    max_workers: int = 1


def _read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as f:
            document = json.load(f)
    except OSError as e:
        raise ConfigurationError(f"Could not read configuration file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Configuration file {path} is not valid JSON: {e}") from e
    if not isinstance(document, dict):
        raise ConfigurationError(f"Configuration file {path} must contain a JSON object")
    return document


def load_configuration(path: Optional[str] = None) -> CalculatorConfiguration:
    """
    Loads the packaged defaults and overlays the file at path, if given.

    Args:
        path (Optional[str]): A JSON configuration file.

    Raises:
        ConfigurationError: If a file is unreadable or the merged document fails validation.

    Returns:
        CalculatorConfiguration: The validated configuration.
    """
    merged = _read_json(DEFAULT_CONFIG_PATH)
    if path is not None:
        merged.update(_read_json(path))
        _logger.debug("Loaded configuration overrides from %s", path)

    schema = _read_json(CONFIG_SCHEMA_PATH)
    try:
        jsonschema.validate(merged, schema)
    except jsonschema.ValidationError as e:
        location = ".".join(str(p) for p in e.absolute_path) or "configuration"
        raise ConfigurationError(f"Invalid configuration at {location}: {e.message}") from e

    return CalculatorConfiguration(**merged)

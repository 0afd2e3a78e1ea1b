"""Logging configuration."""

from __future__ import annotations

import importlib.resources
import json
import logging
import logging.config
import os
import pathlib
from typing import Any

LOG_CONFIG_ENV = "KLEENE_LOG_CONFIG"


def get_log_config_path() -> pathlib.Path | None:
    """Get the log configuration path set in the environment, if any."""
    if path := os.getenv(LOG_CONFIG_ENV):
        return pathlib.Path(path).resolve()
    return None


def get_log_config() -> dict[str, Any]:
    """Read the log configuration from the environment path, else the packaged default."""
    if (path := get_log_config_path()) is not None:
        text = path.read_text()
    else:
        text = importlib.resources.files("kleene_workbench").joinpath("log_config.json").read_text()
    config: dict[str, Any] = json.loads(text)
    return config


def configure_logging(level: str | None = None) -> None:
    """Apply the log configuration; ``level`` overrides the root logger level."""
    logging.config.dictConfig(get_log_config())
    if level is not None:
        logging.getLogger().setLevel(level.upper())

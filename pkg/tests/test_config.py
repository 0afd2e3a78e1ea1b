"""Test command-line configuration and logging setup."""

from __future__ import annotations

import json
import logging
from typing import TYPE_CHECKING

import pytest
from pydantic import ValidationError

from kleene_workbench import config, ids
from kleene_workbench.helpers import logs
from kleene_workbench.series import Alphabet, InvalidAlphabetError

if TYPE_CHECKING:
    import pathlib


def test_defaults(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test the default configuration."""
    monkeypatch.delenv(config.WORKERS_ENV, raising=False)
    cfg = config.CliConfig()
    assert cfg.semiring == ids.NAT_INF
    assert cfg.alphabet == Alphabet(("a", "b"))
    assert cfg.bound == config.DEFAULT_BOUND
    assert cfg.workers == 1
    assert cfg.effective_horizon == 2 * config.DEFAULT_BOUND + 8


def test_flags_are_parsed() -> None:
    """Test that string flags become typed values."""
    cfg = config.CliConfig.model_validate({"semiring": "chain(4)", "alphabet": "x, y", "bound": 2, "horizon": 5})
    assert cfg.semiring == ids.chain(4)
    assert list(cfg.alphabet) == ["x", "y"]
    assert cfg.effective_horizon == 5
    assert cfg.model_dump(mode="json")["semiring"] == "chain(4)"


def test_workers_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that the worker count is read from the environment."""
    monkeypatch.setenv(config.WORKERS_ENV, "3")
    assert config.get_default_workers() == 3
    assert config.CliConfig().workers == 3


@pytest.mark.parametrize(
    "data",
    [
        pytest.param({"bound": -1}, id="negative-bound"),
        pytest.param({"trials": 0}, id="no-trials"),
        pytest.param({"seed": 2**64}, id="seed-too-large"),
        pytest.param({"horizon": 0}, id="empty-horizon"),
    ],
)
def test_invalid_config(data: dict[str, int]) -> None:
    """Test that out-of-range settings are rejected."""
    with pytest.raises(ValidationError):
        config.CliConfig.model_validate(data)


def test_invalid_alphabet_flag() -> None:
    """Test that alphabet errors surface unchanged."""
    with pytest.raises(InvalidAlphabetError):
        config.CliConfig.model_validate({"alphabet": "a,a"})


def test_log_config_from_environment(monkeypatch: pytest.MonkeyPatch, tmp_path: pathlib.Path) -> None:
    """Test that a log configuration file can be set in the environment."""
    path = tmp_path / "log_config.json"
    path.write_text(json.dumps({"version": 1, "root": {"level": "ERROR"}}))
    monkeypatch.setenv(logs.LOG_CONFIG_ENV, str(path))
    assert logs.get_log_config_path() == path.resolve()

    logs.configure_logging()
    assert logging.getLogger().level == logging.ERROR


def test_packaged_log_config(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test the packaged log configuration and the level override."""
    monkeypatch.delenv(logs.LOG_CONFIG_ENV, raising=False)
    assert logs.get_log_config_path() is None
    assert logs.get_log_config()["formatters"]["json"]["class"] == "pythonjsonlogger.json.JsonFormatter"

    logs.configure_logging("debug")
    assert logging.getLogger().level == logging.DEBUG

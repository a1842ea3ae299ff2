"""Unit tests for SuccminConfig."""

import os

import pytest

from succmin.config import SuccminConfig
from succmin.core.errors import ConfigError


def test_defaults():
    """Test built-in defaults."""
    config = SuccminConfig()
    assert config.delta == 0.99
    assert config.log_base == "2"
    assert config.threshold_mode == "exp2c"
    assert config.bisect_tol == 1e-6
    assert config.max_bisect_iter == 200
    assert config.reduction == "plll"
    assert config.initializer == "closed-form"
    assert config.log_dir is None


def test_environment(monkeypatch):
    """Test environment variables override defaults."""
    monkeypatch.setenv("SUCCMIN_DELTA", "0.75")
    monkeypatch.setenv("SUCCMIN_THRESHOLD_MODE", "pow2c")
    monkeypatch.setenv("SUCCMIN_LOG_LEVEL", "debug")
    config = SuccminConfig()
    assert config.delta == 0.75
    assert config.threshold_mode == "pow2c"
    assert config.log_level == "DEBUG"


def test_dotenv_file(tmp_path):
    """Test a .env file in the working directory is read."""
    (tmp_path / ".env").write_text("SUCCMIN_REDUCTION=lll\n")
    assert SuccminConfig().reduction == "lll"
    os.environ.pop("SUCCMIN_REDUCTION", None)


def test_overrides_win(monkeypatch):
    """Test explicit overrides beat the environment; None is ignored."""
    monkeypatch.setenv("SUCCMIN_LOG_BASE", "e")
    assert SuccminConfig(log_base="2").log_base == "2"
    assert SuccminConfig(log_base=None).log_base == "e"


@pytest.mark.parametrize(
    "overrides",
    [
        {"delta": 0.25},
        {"log_base": "10"},
        {"threshold_mode": "exp3c"},
        {"bisect_tol": 0.0},
        {"max_bisect_iter": 0},
        {"reduction": "bkz"},
        {"initializer": "random"},
        {"max_exact_dim": 11},
        {"node_budget": 0},
        {"log_level": "LOUD"},
        {"colour": "blue"},
    ],
)
def test_invalid_values(overrides):
    """Test out-of-range values raise ConfigError."""
    with pytest.raises(ConfigError):
        SuccminConfig(**overrides)


def test_malformed_environment(monkeypatch):
    """Test non-numeric environment values raise ConfigError."""
    monkeypatch.setenv("SUCCMIN_NODE_BUDGET", "lots")
    with pytest.raises(ConfigError):
        SuccminConfig()


def test_echo_excludes_logging():
    """Test the echoed config carries solver settings only."""
    echo = SuccminConfig().to_echo()
    assert echo["threshold_mode"] == "exp2c"
    assert "log_dir" not in echo and "log_level" not in echo

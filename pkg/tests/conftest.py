"""Shared fixtures."""

import logging
import os

import numpy as np
import pytest

from succmin.config import SuccminConfig
from succmin.lattice.sampling import make_rng
from succmin.utils.logging import RunLogger


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    """Run every test without SUCCMIN_* variables or a stray .env file."""
    for name in list(os.environ):
        if name.startswith("SUCCMIN_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def rng():
    """Seeded generator for one test."""
    return make_rng(20240611)


@pytest.fixture
def config():
    """Default configuration."""
    return SuccminConfig()


@pytest.fixture
def quiet_logger():
    """Logger that drops everything below ERROR."""
    return RunLogger(log_level=logging.ERROR)


@pytest.fixture
def counterexample_grams():
    """The two-dimensional counterexample pair."""
    return np.diag([3.0, 1.0]), np.diag([1.0, 8.0])

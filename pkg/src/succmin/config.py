"""Run configuration from environment variables, ``.env`` and overrides."""

import logging
import os
from typing import Any, Dict, Optional

from dotenv import find_dotenv, load_dotenv

from succmin.core.errors import ConfigError

LOG_BASES = ("2", "e")
THRESHOLD_MODES = ("exp2c", "expc", "pow2c")
REDUCTIONS = ("plll", "lll")
INITIALIZERS = ("closed-form", "legacy")


class SuccminConfig:
    """Tunables shared by the solvers and the CLI."""

    def __init__(self, **overrides: Any):
        """
        Initialize from environment variables, then apply overrides.

        Args:
            **overrides: Field values that win over the environment
                (None values are ignored)

        Environment Variables:
            SUCCMIN_DELTA, SUCCMIN_LOG_BASE, SUCCMIN_THRESHOLD_MODE,
            SUCCMIN_BISECT_TOL, SUCCMIN_MAX_BISECT_ITER, SUCCMIN_REDUCTION,
            SUCCMIN_INITIALIZER, SUCCMIN_MAX_EXACT_DIM, SUCCMIN_NODE_BUDGET,
            SUCCMIN_LOG_DIR, SUCCMIN_LOG_LEVEL
        """
        load_dotenv(find_dotenv(usecwd=True))

        self.delta = self._float("SUCCMIN_DELTA", "0.99")
        self.log_base = os.getenv("SUCCMIN_LOG_BASE", "2")
        self.threshold_mode = os.getenv("SUCCMIN_THRESHOLD_MODE", "exp2c")
        self.bisect_tol = self._float("SUCCMIN_BISECT_TOL", "1e-6")
        self.max_bisect_iter = self._int("SUCCMIN_MAX_BISECT_ITER", "200")
        self.reduction = os.getenv("SUCCMIN_REDUCTION", "plll")
        self.initializer = os.getenv("SUCCMIN_INITIALIZER", "closed-form")
        self.max_exact_dim = self._int("SUCCMIN_MAX_EXACT_DIM", "10")
        self.node_budget = self._int("SUCCMIN_NODE_BUDGET", "10000000")
        self.strict_tol = 1e-9
        self.log_dir: Optional[str] = os.getenv("SUCCMIN_LOG_DIR") or None
        self.log_level = os.getenv("SUCCMIN_LOG_LEVEL", "WARNING").upper()

        for key, value in overrides.items():
            if not hasattr(self, key):
                raise ConfigError(f"unknown config field {key!r}")
            if value is not None:
                setattr(self, key, value)

        self.validate()

    @staticmethod
    def _float(name: str, default: str) -> float:
        raw = os.getenv(name, default)
        try:
            return float(raw)
        except ValueError as e:
            raise ConfigError(f"{name}={raw!r} is not a number") from e

    @staticmethod
    def _int(name: str, default: str) -> int:
        raw = os.getenv(name, default)
        try:
            return int(raw)
        except ValueError as e:
            raise ConfigError(f"{name}={raw!r} is not an integer") from e

    def validate(self) -> None:
        """Raise ConfigError for any field outside its documented range."""
        if not 0.25 < self.delta <= 1.0:
            raise ConfigError(f"delta={self.delta} must lie in (0.25, 1]")
        if self.log_base not in LOG_BASES:
            raise ConfigError(f"log_base={self.log_base!r} not in {LOG_BASES}")
        if self.threshold_mode not in THRESHOLD_MODES:
            raise ConfigError(f"threshold_mode={self.threshold_mode!r} not in {THRESHOLD_MODES}")
        if not 0.0 < self.bisect_tol < 1.0:
            raise ConfigError(f"bisect_tol={self.bisect_tol} must lie in (0, 1)")
        if self.max_bisect_iter < 1:
            raise ConfigError("max_bisect_iter must be positive")
        if self.reduction not in REDUCTIONS:
            raise ConfigError(f"reduction={self.reduction!r} not in {REDUCTIONS}")
        if self.initializer not in INITIALIZERS:
            raise ConfigError(f"initializer={self.initializer!r} not in {INITIALIZERS}")
        if not 1 <= self.max_exact_dim <= 10:
            raise ConfigError("max_exact_dim must lie in 1..10")
        if self.node_budget < 1:
            raise ConfigError("node_budget must be positive")
        if not isinstance(logging.getLevelName(self.log_level), int):
            raise ConfigError(f"unknown log level {self.log_level!r}")

    def to_echo(self) -> Dict[str, Any]:
        """Fields echoed into output files (log settings excluded)."""
        return {
            "delta": self.delta,
            "log_base": self.log_base,
            "threshold_mode": self.threshold_mode,
            "bisect_tol": self.bisect_tol,
            "max_bisect_iter": self.max_bisect_iter,
            "reduction": self.reduction,
            "initializer": self.initializer,
            "max_exact_dim": self.max_exact_dim,
            "node_budget": self.node_budget,
            "strict_tol": self.strict_tol,
        }

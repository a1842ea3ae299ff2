"""Structured run logging."""

import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional


class RunLogger:
    """JSON event logger for reductions, enumerations, bisections and checks."""

    def __init__(self, log_dir: Optional[str] = None, log_level: int = logging.INFO):
        """
        Initialize the run logger.

        Args:
            log_dir: Directory for dated log files; stderr when None
            log_level: Logging level
        """
        self.log_dir = Path(log_dir) if log_dir else None

        self.logger = logging.getLogger("succmin.run")
        self.logger.setLevel(log_level)
        self.logger.propagate = False

        if self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            log_file = self.log_dir / f"succmin_{datetime.now().strftime('%Y%m%d')}.log"
            handler: logging.Handler = logging.FileHandler(log_file)
        else:
            handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(log_level)

        # JSON formatter for structured logging
        formatter = logging.Formatter(
            '{"timestamp": "%(asctime)s", "level": "%(levelname)s", "message": %(message)s}'
        )
        handler.setFormatter(formatter)

        # one handler per logger instance target; repeated construction replaces it
        for old in list(self.logger.handlers):
            self.logger.removeHandler(old)
            old.close()
        self.logger.addHandler(handler)

    def _log_event(self, event_type: str, level: int = logging.DEBUG, **kwargs):
        """Log a run event."""
        if not self.logger.isEnabledFor(level):
            return
        event = {
            "event_type": event_type,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            **kwargs,
        }
        self.logger.log(level, json.dumps(event, default=str))

    def log_reduction(self, kind: str, dim: int, swaps: int, seconds: float):
        """Log a basis reduction."""
        self._log_event("REDUCTION", kind=kind, dim=dim, swaps=swaps, seconds=seconds)

    def log_enumeration(self, dim: int, nodes: int, radius: float, exact: bool):
        """Log an enumeration run."""
        self._log_event("ENUMERATION", dim=dim, nodes=nodes, radius=radius, exact=exact)

    def log_bisection(self, d_lo: float, d_hi: float, iterations: int, threshold: float):
        """Log a completed bisection."""
        self._log_event(
            "BISECTION",
            level=logging.INFO,
            d_lo=d_lo,
            d_hi=d_hi,
            iterations=iterations,
            threshold=threshold,
        )

    def log_verification(self, prop: str, checks: int, violations: int):
        """Log a property-suite result."""
        self._log_event(
            "VERIFICATION",
            level=logging.INFO if violations == 0 else logging.WARNING,
            property=prop,
            checks=checks,
            violations=violations,
        )

    def log_command(self, command: str, success: bool, error: Optional[str] = None):
        """Log a CLI command outcome."""
        event_data = {"command": command, "success": success}
        if error:
            event_data["error"] = error

        self._log_event(
            "COMMAND", level=logging.INFO if success else logging.ERROR, **event_data
        )


_default: Optional[RunLogger] = None


def get_logger() -> RunLogger:
    """Process-wide default logger, created on first use."""
    global _default
    if _default is None:
        _default = RunLogger(log_level=logging.WARNING)
    return _default

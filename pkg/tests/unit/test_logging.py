"""Unit tests for RunLogger."""

import json
import logging

from succmin.utils.logging import RunLogger, get_logger


def read_events(log_dir):
    files = list(log_dir.glob("succmin_*.log"))
    assert len(files) == 1
    return [json.loads(line)["message"] for line in files[0].read_text().splitlines()]


def test_events_are_json(tmp_path):
    """Test each event is one JSON line with its payload."""
    logger = RunLogger(log_dir=str(tmp_path), log_level=logging.DEBUG)
    logger.log_reduction("plll", 4, 3, 0.01)
    logger.log_bisection(0.5, 0.6, 12, 2.7)
    logger.log_command("smp", False, "boom")
    events = read_events(tmp_path)
    assert [e["event_type"] for e in events] == ["REDUCTION", "BISECTION", "COMMAND"]
    assert events[0]["swaps"] == 3
    assert events[2]["error"] == "boom"


def test_level_filters_events(tmp_path):
    """Test debug events are dropped at INFO."""
    logger = RunLogger(log_dir=str(tmp_path), log_level=logging.INFO)
    logger.log_enumeration(3, 100, 1.5, True)
    logger.log_verification("additive-bound", 10, 0)
    events = read_events(tmp_path)
    assert [e["event_type"] for e in events] == ["VERIFICATION"]
    assert events[0]["property"] == "additive-bound"


def test_reconstruction_replaces_handler(tmp_path):
    """Test constructing twice leaves a single handler."""
    RunLogger(log_dir=str(tmp_path))
    logger = RunLogger(log_dir=str(tmp_path))
    assert len(logger.logger.handlers) == 1


def test_default_logger_is_shared():
    """Test the lazy default is created once."""
    assert get_logger() is get_logger()

"""Unit tests for the verification property suite."""

import numpy as np
import pytest

from succmin.core.errors import RadiusOverflow
from succmin.lattice import properties
from succmin.lattice.properties import (
    TRIAL_PROPERTIES,
    PropertyTally,
    VerifyReport,
    brute_force_minima,
    run_fixtures,
    run_suite,
    run_trial,
)

EXPECTED_PROPERTIES = {
    "oracle-cross-check",
    "minima-chain",
    "diagonal-sandwich",
    "determinant-bound",
    "product-bound",
    "lll-quality",
    "additive-bound",
    "weakened-additive-bound",
    "woodbury-reconstruction",
    "inverse-additive-bound",
    "monotonicity",
    "congruence-monotonicity",
    "inverse-gap-spd",
    "psd-shift-monotonicity",
    "reduction-invariants",
    "generalization-counterexample",
    "additive-bound-tight",
    "inverse-bound-tight",
    "scaled-identity-equality",
}


def test_brute_force_small_lattices():
    """Test the box scan on diagonal and hexagonal lattices."""
    assert brute_force_minima(np.diag([2.0, 3.0])) == pytest.approx([2.0, 3.0])
    hexagonal = np.array([[1.0, 0.5], [0.0, np.sqrt(3.0) / 2.0]])
    assert brute_force_minima(hexagonal) == pytest.approx([1.0, 1.0])


def test_brute_force_refuses_large_box():
    """Test a huge box returns None."""
    assert brute_force_minima(np.diag([1.0, 1e-4, 1e-4]), max_points=1000) is None


def test_tally():
    """Test pass/violation counting and merging."""
    a, b = PropertyTally(), PropertyTally()
    a.record(True)
    a.record(False)
    b.record(True)
    a.merge(b)
    assert (a.checks, a.violations) == (3, 1)


def test_fixtures_pass():
    """Test the worked examples all pass."""
    tallies = {}
    run_fixtures(tallies)
    assert {
        "generalization-counterexample",
        "additive-bound-tight",
        "inverse-bound-tight",
        "scaled-identity-equality",
    } <= set(tallies)
    assert all(t.violations == 0 and t.checks > 0 for t in tallies.values())


def test_trial_table_names_real_properties():
    """Test every trial function declares only properties the suite reports."""
    declared = {name for _, names in TRIAL_PROPERTIES for name in names}
    assert declared <= EXPECTED_PROPERTIES


def test_node_budget_skips_use_property_names(monkeypatch):
    """Test an enumeration budget overflow is tallied as skips of the affected properties."""

    def exhausted(*args, **kwargs):
        raise RadiusOverflow("budget exhausted")

    monkeypatch.setattr(properties, "solve_smp", exhausted)
    tallies = run_trial(1, 0, 3)
    assert set(tallies) <= EXPECTED_PROPERTIES
    assert tallies["oracle-cross-check"].skipped == 1
    assert tallies["minima-chain"].skipped == 1
    assert tallies["minima-chain"].checks == 0
    assert tallies["additive-bound"].skipped == 1
    assert tallies["reduction-invariants"].skipped == 0
    assert tallies["reduction-invariants"].checks == 2


def test_trial_is_deterministic():
    """Test the same seed and trial give the same counts."""
    first = run_trial(7, 3, 3)
    second = run_trial(7, 3, 3)
    assert {k: (v.checks, v.violations) for k, v in first.items()} == {
        k: (v.checks, v.violations) for k, v in second.items()
    }


def test_run_suite_passes(quiet_logger):
    """Test a short sweep has zero violations and covers every property."""
    report = run_suite(trials=12, dims=[2, 3, 4], seed=11, logger=quiet_logger)
    assert isinstance(report, VerifyReport)
    assert report.ok, {k: v for k, v in report.tallies.items() if v.violations}
    assert EXPECTED_PROPERTIES <= set(report.tallies)
    model = report.to_model({"delta": 0.99})
    assert model.ok is True
    assert model.properties["additive-bound"]["violations"] == 0
    assert list(model.properties) == sorted(model.properties)


def test_run_suite_workers_match_serial(quiet_logger):
    """Test fanning trials out to processes gives identical counts."""
    serial = run_suite(trials=4, dims=[2, 3], seed=5, logger=quiet_logger)
    parallel = run_suite(trials=4, dims=[2, 3], seed=5, workers=2, logger=quiet_logger)
    assert serial.to_model({}).model_dump() == parallel.to_model({}).model_dump()


def test_run_suite_rejects_zero_trials():
    """Test trials must be positive."""
    with pytest.raises(ValueError):
        run_suite(trials=0, dims=[2], seed=0)

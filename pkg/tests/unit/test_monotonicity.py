"""Unit tests for monotonicity checks and the worked fixtures."""

import math

import numpy as np
import pytest

from succmin.core.errors import PreconditionViolated, RankDeficient
from succmin.lattice import monotonicity
from succmin.lattice.sampling import (
    make_rng,
    random_full_column_rank,
    random_ordered_pair,
    random_psd_singular,
    random_spd,
)


def test_strictly_greater():
    """Test the relative strictness margin."""
    assert monotonicity.strictly_greater(1.0 + 1e-6, 1.0)
    assert not monotonicity.strictly_greater(1.0 + 1e-12, 1.0)
    assert not monotonicity.strictly_greater(1.0, 1.0)


def test_counterexample_report():
    """Test the counterexample minima and which generalizations fail."""
    report = monotonicity.counterexample_report()
    assert report["lambda2_r1"] == pytest.approx(math.sqrt(3.0), rel=1e-9)
    assert report["lambda2_r2"] == pytest.approx(math.sqrt(8.0), rel=1e-9)
    assert report["lambda2_r3"] == pytest.approx(3.0, rel=1e-9)
    margins = report["margins"]
    assert margins.direct == pytest.approx(3.0 - math.sqrt(11.0))
    assert margins.inverse_first < -1e-3
    assert margins.inverse_second == pytest.approx(0.0, abs=1e-9)
    assert report["failed"] == ["direct", "inverse-first"]


def test_generalization_holds_at_first_index(counterexample_grams):
    """Test the i = 1 forms hold on the counterexample pair."""
    g1, g2 = counterexample_grams
    margins = monotonicity.generalized_failure(g1, g2, 1)
    assert margins.failed() == []


@pytest.mark.parametrize("seed", range(10))
def test_check_monotonicity(seed):
    """Test both chains hold strictly when G1 - G2 is SPD."""
    rng = make_rng(seed)
    g1, g2 = random_ordered_pair(rng, 2 + seed % 3)
    report = monotonicity.check_monotonicity(g1, g2)
    assert report.ok
    assert set(report.to_dict()) == {"direct", "inverse"}
    assert monotonicity.inverse_gap_is_spd(g1, g2)


def test_check_monotonicity_precondition():
    """Test G1 - G2 must be SPD."""
    g = np.eye(2)
    with pytest.raises(PreconditionViolated):
        monotonicity.check_monotonicity(g, g)


@pytest.mark.parametrize("seed", range(10))
def test_check_cor2(seed):
    """Test the four congruence chains with a singular PSD shift."""
    rng = make_rng(seed)
    n = 2 + seed % 3
    m = 1 + seed % n
    g1, g2 = random_ordered_pair(rng, n)
    g = random_psd_singular(rng, m) if m > 1 else np.zeros((1, 1))
    b = random_full_column_rank(rng, n, m)
    report = monotonicity.check_cor2(g, b, g1, g2)
    assert report.ok
    assert len(report.chains) == 4


def test_check_cor2_preconditions(rng):
    """Test rank-deficient B and indefinite G are refused."""
    g1, g2 = random_ordered_pair(rng, 2)
    with pytest.raises(RankDeficient):
        monotonicity.check_cor2(np.eye(2), np.array([[1.0, 2.0], [2.0, 4.0]]), g1, g2)
    with pytest.raises(PreconditionViolated):
        monotonicity.check_cor2(-np.eye(2), np.eye(2), g1, g2)


def test_check_remark1(rng):
    """Test adding a singular PSD matrix never shrinks a minimum."""
    g1 = random_spd(rng, 3)
    assert all(monotonicity.check_remark1(g1, random_psd_singular(rng, 3, rank=1)))
    with pytest.raises(PreconditionViolated):
        monotonicity.check_remark1(g1, -np.eye(3))


def test_tight_families_validate():
    """Test the fixture families refuse invalid parameters."""
    with pytest.raises(PreconditionViolated):
        monotonicity.additive_tight_family([1.0, -1.0], 1.0)
    with pytest.raises(PreconditionViolated):
        monotonicity.inverse_tight_family([1.0, 5.0], 4.0)


def test_inverse_tight_closed_forms():
    """Test the closed-form minima of the inverse factors."""
    g1, g2, closed = monotonicity.inverse_tight_family([1.0, 2.0, 5.0], 6.0)
    assert monotonicity.minima(np.linalg.inv(g1)) == pytest.approx(closed["r1"], rel=1e-9)
    assert monotonicity.minima(np.linalg.inv(g2)) == pytest.approx(closed["r2"], rel=1e-9)

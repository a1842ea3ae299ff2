"""Unit tests for the successive-minima bounds."""

import math

import numpy as np
import pytest

from succmin.core.errors import DimensionMismatch, IndexOutOfRange, NegativeInput
from succmin.core.linalg import cholesky, spd_inverse
from succmin.lattice import bounds
from succmin.lattice.bounds import Provenance
from succmin.lattice.enumeration import solve_smp
from succmin.lattice.monotonicity import additive_tight_family, inverse_tight_family
from succmin.lattice.sampling import make_rng, random_basis, random_spd

TOL = 1e-9


def le(a, b):
    return a <= b + TOL * max(abs(a), abs(b))


def test_prop1_scaled_identity_is_tight():
    """Test both sides equal alpha for alpha * I."""
    for i in (1, 2, 3):
        assert bounds.prop1_bounds(2.5 * np.eye(3), i) == pytest.approx((2.5, 2.5))


def test_prop1_counterexample_factor():
    """Test the sandwich on diag(sqrt(3), 1)."""
    r = np.diag([math.sqrt(3.0), 1.0])
    assert bounds.prop1_bounds(r, 1) == pytest.approx((1.0, math.sqrt(3.0)))
    assert bounds.prop1_bounds(r, 2) == pytest.approx((1.0, math.sqrt(3.0)))


def test_prop1_index_range():
    """Test indices outside 1..n are refused."""
    with pytest.raises(IndexOutOfRange):
        bounds.prop1_bounds(np.eye(2), 0)
    with pytest.raises(IndexOutOfRange):
        bounds.prop1_bounds(np.eye(2), 3)


@pytest.mark.parametrize("seed", range(15))
def test_single_basis_bounds_hold(seed):
    """Test the sandwich, determinant and product bounds against the oracle."""
    rng = make_rng(seed)
    n = 2 + seed % 4
    r = random_basis(rng, n)
    values = solve_smp(r).values
    for i in range(1, n + 1):
        lo, hi = bounds.prop1_bounds(r, i)
        assert le(lo, values[i - 1]) and le(values[i - 1], hi)
    assert le(bounds.remark3_lower(r), values[-1])
    assert bounds.product_bound_holds(values, r)
    report = bounds.bounds_report(r)
    assert report.consistent()
    assert all(le(lo, v) and le(v, hi) for lo, v, hi in zip(report.lower, values, report.upper))


def test_remark3_value():
    """Test the determinant root."""
    assert bounds.remark3_lower(np.diag([2.0, 8.0])) == pytest.approx(4.0)


def test_bounds_report_provenance():
    """Test the determinant bound wins at i = n for diag(1, 4)."""
    report = bounds.bounds_report(np.diag([1.0, 4.0]))
    assert report.lower == pytest.approx((1.0, 2.0))
    assert report.upper == pytest.approx((1.0, 4.0))
    assert report.lower_provenance == (Provenance.PROP1_LOWER, Provenance.REMARK3)
    assert report.to_model().lower_provenance == ["prop1-lower", "remark3"]


def test_bounds_report_unreduced():
    """Test the unreduced report uses the input columns."""
    r = np.diag([3.0, 1.0])
    assert bounds.bounds_report(r, reduce=False).upper == pytest.approx((3.0, 3.0))
    assert bounds.bounds_report(r, reduce=True).upper == pytest.approx((1.0, 3.0))


def test_thm1_inputs_validated():
    """Test negative minima and bad indices are refused."""
    g = np.eye(2)
    with pytest.raises(NegativeInput):
        bounds.thm1_lower(g, g, 1, -1.0, 1.0, 1.0, 1.0)
    with pytest.raises(IndexOutOfRange):
        bounds.thm1_lower(g, g, 3, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(DimensionMismatch):
        bounds.thm1_lower(g, np.eye(3), 1, 1.0, 1.0, 1.0, 1.0)


@pytest.mark.parametrize("alphas,beta", [([1.0, 2.0, 5.0], 0.5), ([0.3, 4.0], 2.0)])
def test_thm1_tight_on_diagonal_family(alphas, beta):
    """Test the additive bound is attained for diag(alpha) + beta I."""
    g1, g2, expected = additive_tight_family(alphas, beta)
    for i in range(1, len(alphas) + 1):
        assert bounds.thm1_lower_exact(g1, g2, i) == pytest.approx(expected[i - 1], rel=TOL)


@pytest.mark.parametrize("seed", range(10))
def test_thm1_and_cor3_hold(seed):
    """Test lower bounds on chol(G1 + G2) and their ordering."""
    rng = make_rng(seed)
    n = 2 + seed % 3
    g1, g2 = random_spd(rng, n), random_spd(rng, n)
    values = solve_smp(cholesky(g1 + g2)).values
    for i in range(1, n + 1):
        t1 = bounds.thm1_lower_exact(g1, g2, i)
        c3 = bounds.cor3_lower(g1, g2, i)
        assert le(t1, values[i - 1])
        assert le(c3, t1)
    report = bounds.pair_lower_bounds(g1, g2)
    assert all(le(lo, v) for lo, v in zip(report.lower, values))
    assert set(report.lower_provenance) <= {Provenance.THM1, Provenance.COR3_GENERIC, Provenance.COR3_LAST}


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("which", ["first", "second"])
def test_thm2_holds(seed, which):
    """Test the inverse-form lower bounds."""
    rng = make_rng(seed)
    n = 2 + seed % 3
    g1, g2 = random_spd(rng, n), random_spd(rng, n)
    target = g1 if which == "first" else g2
    values = solve_smp(cholesky(spd_inverse(target))).values
    for i in range(1, n + 1):
        assert le(bounds.thm2_lower(g1, g2, i, which), values[i - 1])
    report = bounds.inverse_pair_lower_bounds(g1, g2, which)
    expected_tag = Provenance.THM2_A if which == "first" else Provenance.THM2_B
    assert set(report.lower_provenance) == {expected_tag}


def test_thm2_tight_on_complementary_family():
    """Test both inverse bounds are attained for G2 = beta I - diag(alpha)."""
    g1, g2, closed = inverse_tight_family([1.0, 2.0, 5.0], 6.0)
    first = [bounds.thm2_lower(g1, g2, i, "first") for i in (1, 2, 3)]
    second = [bounds.thm2_lower(g1, g2, i, "second") for i in (1, 2, 3)]
    assert first == pytest.approx(closed["r1"], rel=TOL)
    assert second == pytest.approx(closed["r2"], rel=TOL)


def test_inverse_factors_which():
    """Test an unknown selector is refused."""
    with pytest.raises(ValueError):
        bounds.inverse_factors(np.eye(2), np.eye(2), "third")

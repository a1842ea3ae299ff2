"""
Bounds on successive minima.

Single-basis bounds (diagonal/column-norm sandwich and the determinant
bound on the last minimum) and the sum-of-Grams lower bounds: the
additive bound for chol(G1 + G2), its inverse form obtained through the
Woodbury split, and the weakened form that needs only diagonals,
determinants and first minima.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel

from succmin.core.errors import DimensionMismatch, IndexOutOfRange, NegativeInput
from succmin.core.linalg import cholesky, det, spd_inverse, woodbury_decompose
from succmin.core.matrix import ArrayLike, as_square, as_upper_factor
from succmin.lattice.enumeration import MAX_EXACT_DIM, solve_smp, solve_svp
from succmin.lattice.reduction import DEFAULT_DELTA, lll_reduce


class Provenance(str, Enum):
    """Formula a bound entry came from."""

    PROP1_LOWER = "prop1-lower"
    PROP1_UPPER = "prop1-upper"
    REMARK3 = "remark3"
    THM1 = "thm1"
    THM2_A = "thm2-a"
    THM2_B = "thm2-b"
    COR3_GENERIC = "cor3-generic"
    COR3_LAST = "cor3-last"


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"index {i} outside 1..{n}")


def _pair(g1: ArrayLike, g2: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    g1, g2 = as_square(g1), as_square(g2)
    if g1.shape != g2.shape:
        raise DimensionMismatch(f"{g1.shape} vs {g2.shape}")
    return g1, g2


def prop1_bounds(r: ArrayLike, i: int) -> Tuple[float, float]:
    """
    Sandwich on lambda_i(R).

    Returns:
        ``(min_j |r_jj|, max_{j<=i} ||R[:j, j]||)``

    Raises:
        IndexOutOfRange: If i is outside 1..n
    """
    r = as_upper_factor(r)
    n = r.shape[0]
    _check_index(i, n)
    lower = float(np.min(np.abs(np.diag(r))))
    upper = max(float(np.linalg.norm(r[: j + 1, j])) for j in range(i))
    return lower, upper


def remark3_lower(r: ArrayLike) -> float:
    """|det R|^(1/n), a lower bound on lambda_n(R)."""
    r = as_upper_factor(r)
    n = r.shape[0]
    return math.exp(float(np.sum(np.log(np.abs(np.diag(r))))) / n)


def thm1_lower(
    g1: ArrayLike,
    g2: ArrayLike,
    i: int,
    lam1_g1: float,
    lam1_g2: float,
    lam_i_g1: float,
    lam_i_g2: float,
) -> float:
    """
    Lower bound on lambda_i(chol(G1 + G2)) from minima of chol(G1), chol(G2).

    The minima are taken as inputs so callers may pass exact values or
    certified lower bounds; the formula is monotone in each of them.

    Raises:
        NegativeInput: If any minimum is negative
        IndexOutOfRange: If i is outside 1..n
    """
    g1, _ = _pair(g1, g2)
    _check_index(i, g1.shape[0])
    for name, v in (
        ("lam1_g1", lam1_g1),
        ("lam1_g2", lam1_g2),
        ("lam_i_g1", lam_i_g1),
        ("lam_i_g2", lam_i_g2),
    ):
        if v < 0:
            raise NegativeInput(f"{name}={v} is negative")
    return max(math.hypot(lam_i_g1, lam1_g2), math.hypot(lam_i_g2, lam1_g1))


def thm1_lower_exact(g1: ArrayLike, g2: ArrayLike, i: int, **oracle) -> float:
    """thm1_lower with every minimum computed by the exact oracle."""
    m1 = solve_smp(cholesky(g1), **oracle).values
    m2 = solve_smp(cholesky(g2), **oracle).values
    return thm1_lower(g1, g2, i, m1[0], m2[0], m1[i - 1], m2[i - 1])


def inverse_factors(g1: ArrayLike, g2: ArrayLike, which: str) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cholesky factors of the two Woodbury parts of G1^-1 ("first") or G2^-1 ("second").

    Returns:
        ``(chol((G1 + G2)^-1), chol(Gk^-1 (G1^-1 + G2^-1)^-1 Gk^-1))``
    """
    g1, g2 = _pair(g1, g2)
    if which == "first":
        s, t = woodbury_decompose(g1, g2)
    elif which == "second":
        s, t = woodbury_decompose(g2, g1)
    else:
        raise ValueError(f"which must be 'first' or 'second', got {which!r}")
    return cholesky(s), cholesky(t)


def thm2_lower(
    g1: ArrayLike,
    g2: ArrayLike,
    i: int,
    which: str = "first",
    max_exact_dim: int = MAX_EXACT_DIM,
    **oracle,
) -> float:
    """
    Lower bound on lambda_i(chol(G1^-1)) (``which="first"``) or
    lambda_i(chol(G2^-1)) (``which="second"``).

    The minima of the two Woodbury parts are computed exactly.

    Raises:
        NotPositiveDefinite: If an input is not SPD
        DimensionTooLarge: If n exceeds ``max_exact_dim``
    """
    _check_index(i, as_square(g1).shape[0])
    return _thm2_all(g1, g2, which, max_exact_dim=max_exact_dim, **oracle)[i - 1]


def _thm2_all(g1: ArrayLike, g2: ArrayLike, which: str, **oracle) -> List[float]:
    r_sum, r_part = inverse_factors(g1, g2, which)
    m_sum = solve_smp(r_sum, **oracle).values
    m_part = solve_smp(r_part, **oracle).values
    return [
        max(math.hypot(m_sum[i], m_part[0]), math.hypot(m_part[i], m_sum[0]))
        for i in range(r_sum.shape[0])
    ]


def cor3_lower(g1: ArrayLike, g2: ArrayLike, i: int, **oracle) -> float:
    """
    Weakened additive bound needing only diagonals, determinants and first minima.

    For i < n the diagonal minimum of each factor stands in for lambda_i;
    for i = n the determinant root |det R_k|^(1/n) does.
    """
    g1, g2 = _pair(g1, g2)
    n = g1.shape[0]
    _check_index(i, n)
    r1, r2 = cholesky(g1), cholesky(g2)
    lam1_r1 = solve_svp(r1, **oracle)[0]
    lam1_r2 = solve_svp(r2, **oracle)[0]
    if i < n:
        a1 = float(np.min(np.diag(r1)))
        a2 = float(np.min(np.diag(r2)))
    else:
        a1 = remark3_lower(r1)
        a2 = remark3_lower(r2)
    return max(math.hypot(a1, lam1_r2), math.hypot(a2, lam1_r1))


class BoundsReportModel(BaseModel):
    """On-disk form of a BoundsReport."""

    lower: List[float]
    upper: List[float]
    lower_provenance: List[str]
    upper_provenance: List[str]
    reduced: bool


@dataclass(frozen=True)
class BoundsReport:
    """Per-index lower/upper bounds with the formula each came from."""

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    lower_provenance: Tuple[Provenance, ...]
    upper_provenance: Tuple[Provenance, ...]
    reduced: bool

    def consistent(self) -> bool:
        return all(lo <= hi for lo, hi in zip(self.lower, self.upper))

    def to_model(self) -> BoundsReportModel:
        return BoundsReportModel(
            lower=list(self.lower),
            upper=list(self.upper),
            lower_provenance=[p.value for p in self.lower_provenance],
            upper_provenance=[p.value for p in self.upper_provenance],
            reduced=self.reduced,
        )


def bounds_report(r: ArrayLike, reduce: bool = True, delta: float = DEFAULT_DELTA) -> BoundsReport:
    """
    Bounds on every lambda_i(R) from the diagonal/column-norm sandwich and
    the determinant bound at i = n.

    With ``reduce`` the upper bounds come from the LLL-reduced basis, which
    spans the same lattice and usually has shorter leading columns; the
    lower diagonal bound is taken as the better of both bases.
    """
    r = as_upper_factor(r)
    n = r.shape[0]
    basis = lll_reduce(r, delta).r if reduce else r
    last = remark3_lower(r)
    lower: List[float] = []
    upper: List[float] = []
    lower_prov: List[Provenance] = []
    for i in range(1, n + 1):
        lo, hi = prop1_bounds(basis, i)
        if reduce:
            lo = max(lo, prop1_bounds(r, i)[0])
        if i == n and last > lo:
            lower.append(last)
            lower_prov.append(Provenance.REMARK3)
        else:
            lower.append(lo)
            lower_prov.append(Provenance.PROP1_LOWER)
        upper.append(hi)
    return BoundsReport(
        lower=tuple(lower),
        upper=tuple(upper),
        lower_provenance=tuple(lower_prov),
        upper_provenance=tuple(Provenance.PROP1_UPPER for _ in range(n)),
        reduced=reduce,
    )


def pair_lower_bounds(g1: ArrayLike, g2: ArrayLike, **oracle) -> BoundsReport:
    """
    Lower bounds on every lambda_i(chol(G1 + G2)): the exact additive bound
    and its weakened form, keeping the larger; the upper bounds are the
    column-norm bounds of the reduced chol(G1 + G2).
    """
    g1, g2 = _pair(g1, g2)
    n = g1.shape[0]
    upper = bounds_report(cholesky(g1 + g2)).upper
    m1 = solve_smp(cholesky(g1), **oracle).values
    m2 = solve_smp(cholesky(g2), **oracle).values
    lower: List[float] = []
    prov: List[Provenance] = []
    for i in range(1, n + 1):
        t1 = thm1_lower(g1, g2, i, m1[0], m2[0], m1[i - 1], m2[i - 1])
        c3 = cor3_lower(g1, g2, i, **oracle)
        if c3 > t1:
            lower.append(c3)
            prov.append(Provenance.COR3_LAST if i == n else Provenance.COR3_GENERIC)
        else:
            lower.append(t1)
            prov.append(Provenance.THM1)
    return BoundsReport(
        lower=tuple(lower),
        upper=upper,
        lower_provenance=tuple(prov),
        upper_provenance=tuple(Provenance.PROP1_UPPER for _ in range(n)),
        reduced=True,
    )


def product_bound_holds(values, r: ArrayLike, tol: float = 1e-9) -> bool:
    """prod lambda_i >= |det R| (relative tolerance ``tol``)."""
    return float(np.prod(values)) >= abs(det(as_upper_factor(r))) * (1.0 - tol)


def inverse_pair_lower_bounds(
    g1: ArrayLike, g2: ArrayLike, which: str = "first", **oracle
) -> BoundsReport:
    """
    Bounds on every lambda_i(chol(Gk^-1)), k = 1 for ``which="first"`` and
    k = 2 for ``"second"``: Woodbury-split lower bounds, column-norm upper
    bounds of the reduced factor.
    """
    g1, g2 = _pair(g1, g2)
    target = g1 if which == "first" else g2
    tag = Provenance.THM2_A if which == "first" else Provenance.THM2_B
    lower = _thm2_all(g1, g2, which, **oracle)
    n = len(lower)
    return BoundsReport(
        lower=tuple(lower),
        upper=bounds_report(cholesky(spd_inverse(target))).upper,
        lower_provenance=tuple(tag for _ in range(n)),
        upper_provenance=tuple(Provenance.PROP1_UPPER for _ in range(n)),
        reduced=True,
    )

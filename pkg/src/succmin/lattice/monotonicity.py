"""
Monotonicity of successive minima under Loewner order, checked with the
exact oracle, plus the worked fixtures (tightness families and the
counterexample to the i > 1 generalization).
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from succmin.core.errors import DimensionMismatch, PreconditionViolated, RankDeficient
from succmin.core.linalg import cholesky, is_spd, spd_inverse, symmetrize
from succmin.core.matrix import ArrayLike, as_matrix, as_square
from succmin.lattice.bounds import inverse_factors
from succmin.lattice.enumeration import solve_smp

STRICT_TOL = 1e-9


def strictly_greater(a: float, b: float, tol: float = STRICT_TOL) -> bool:
    """a > b with a relative margin."""
    return a - b > tol * max(abs(a), abs(b))


def minima(g: ArrayLike, **oracle) -> Tuple[float, ...]:
    """Exact successive minima of chol(G)."""
    return solve_smp(cholesky(g), **oracle).values


@dataclass
class ChainReport:
    """Per-index outcome of one family of strict inequalities."""

    name: str
    larger: Tuple[float, ...]
    smaller: Tuple[float, ...]
    holds: List[bool] = field(default_factory=list)

    def __post_init__(self):
        if not self.holds:
            self.holds = [strictly_greater(a, b) for a, b in zip(self.larger, self.smaller)]

    @property
    def ok(self) -> bool:
        return all(self.holds)


@dataclass
class MonotonicityReport:
    """Outcome of a set of chains; ``ok`` iff every strict inequality held."""

    chains: List[ChainReport]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.chains)

    def to_dict(self) -> Dict[str, List[bool]]:
        return {c.name: c.holds for c in self.chains}


def _require_gap_spd(g1: np.ndarray, g2: np.ndarray) -> None:
    if g1.shape != g2.shape:
        raise DimensionMismatch(f"{g1.shape} vs {g2.shape}")
    if not is_spd(g1 - g2):
        raise PreconditionViolated("G1 - G2 is not SPD")


def check_monotonicity(g1: ArrayLike, g2: ArrayLike, **oracle) -> MonotonicityReport:
    """
    lambda_i(chol G1) > lambda_i(chol G2) and
    lambda_i(chol G1^-1) < lambda_i(chol G2^-1) for every i, when G1 - G2 is SPD.

    Raises:
        PreconditionViolated: If G1 - G2 is not SPD
    """
    g1, g2 = as_square(g1), as_square(g2)
    _require_gap_spd(g1, g2)
    return MonotonicityReport(
        chains=[
            ChainReport("direct", minima(g1, **oracle), minima(g2, **oracle)),
            ChainReport(
                "inverse", minima(spd_inverse(g2), **oracle), minima(spd_inverse(g1), **oracle)
            ),
        ]
    )


def check_cor2(g: ArrayLike, b: ArrayLike, g1: ArrayLike, g2: ArrayLike, **oracle) -> MonotonicityReport:
    """
    Monotonicity after congruence by B and a PSD shift G.

    With Gk' = G + B^T Gk B and Gk'' = G + B^T Gk^-1 B:
    lambda_i(chol G1') > lambda_i(chol G2'), lambda_i(chol G1'^-1) < lambda_i(chol G2'^-1),
    lambda_i(chol G1'') < lambda_i(chol G2''), lambda_i(chol G1''^-1) > lambda_i(chol G2''^-1).

    Args:
        g: m x m symmetric positive semidefinite matrix
        b: n x m full column rank matrix
        g1: n x n SPD matrix
        g2: n x n SPD matrix with G1 - G2 SPD

    Raises:
        RankDeficient: If B is not full column rank
        PreconditionViolated: If G is not PSD or G1 - G2 is not SPD
    """
    g, b = as_square(g), as_matrix(b)
    g1, g2 = as_square(g1), as_square(g2)
    n, m = b.shape
    if g.shape[0] != m or g1.shape[0] != n:
        raise DimensionMismatch(f"G is {g.shape}, B is {b.shape}, G1 is {g1.shape}")
    if np.linalg.matrix_rank(b) < m:
        raise RankDeficient(f"B ({n}x{m}) is not full column rank")
    if not is_spd(g, strict=False):
        raise PreconditionViolated("G is not positive semidefinite")
    _require_gap_spd(g1, g2)

    def shifted(k: np.ndarray) -> np.ndarray:
        return symmetrize(g + b.T @ k @ b)

    a1, a2 = shifted(g1), shifted(g2)
    c1, c2 = shifted(spd_inverse(g1)), shifted(spd_inverse(g2))
    return MonotonicityReport(
        chains=[
            ChainReport("direct", minima(a1, **oracle), minima(a2, **oracle)),
            ChainReport("direct-inverse", minima(spd_inverse(a2), **oracle), minima(spd_inverse(a1), **oracle)),
            ChainReport("congruent-inverse", minima(c2, **oracle), minima(c1, **oracle)),
            ChainReport(
                "congruent-inverse-inverse",
                minima(spd_inverse(c1), **oracle),
                minima(spd_inverse(c2), **oracle),
            ),
        ]
    )


def inverse_gap_is_spd(g1: ArrayLike, g2: ArrayLike) -> bool:
    """G2^-1 - G1^-1 is SPD whenever G1 - G2 is."""
    g1, g2 = as_square(g1), as_square(g2)
    _require_gap_spd(g1, g2)
    return is_spd(spd_inverse(g2) - spd_inverse(g1))


def check_remark1(g1: ArrayLike, g2_psd: ArrayLike, tol: float = STRICT_TOL, **oracle) -> List[bool]:
    """
    With G2 only positive semidefinite, lambda_i(chol(G1 + G2)) >= lambda_i(chol G1).

    Raises:
        PreconditionViolated: If G2 is not PSD
    """
    g1, g2 = as_square(g1), as_square(g2_psd)
    if not is_spd(g2, strict=False):
        raise PreconditionViolated("G2 is not positive semidefinite")
    summed = minima(symmetrize(g1 + g2), **oracle)
    base = minima(g1, **oracle)
    return [a >= b * (1.0 - tol) for a, b in zip(summed, base)]


@dataclass(frozen=True)
class GeneralizationMargins:
    """
    Margins lhs - rhs of the three inequalities obtained by replacing
    lambda_1 with lambda_i on the right-hand side; negative means it fails.
    """

    direct: float
    inverse_first: float
    inverse_second: float

    def failed(self, tol: float = STRICT_TOL) -> List[str]:
        """Names of the inequalities violated by more than ``tol``."""
        return [
            name
            for name, m in (
                ("direct", self.direct),
                ("inverse-first", self.inverse_first),
                ("inverse-second", self.inverse_second),
            )
            if m < -tol
        ]


def generalized_failure(g1: ArrayLike, g2: ArrayLike, i: int, **oracle) -> GeneralizationMargins:
    """Evaluate the i > 1 generalizations of the additive bounds."""
    g1, g2 = as_square(g1), as_square(g2)
    k = i - 1
    m1, m2 = minima(g1, **oracle), minima(g2, **oracle)
    m3 = minima(symmetrize(g1 + g2), **oracle)
    direct = m3[k] - math.hypot(m1[k], m2[k])

    margins = []
    for which, target in (("first", g1), ("second", g2)):
        r_sum, r_part = inverse_factors(g1, g2, which)
        lhs = minima(spd_inverse(target), **oracle)[k]
        s = solve_smp(r_sum, **oracle).values[k]
        t = solve_smp(r_part, **oracle).values[k]
        margins.append(lhs - math.hypot(s, t))
    return GeneralizationMargins(direct=direct, inverse_first=margins[0], inverse_second=margins[1])


COUNTEREXAMPLE_G1 = ((3.0, 0.0), (0.0, 1.0))
COUNTEREXAMPLE_G2 = ((1.0, 0.0), (0.0, 8.0))


def counterexample_report(**oracle) -> Dict[str, object]:
    """
    The two-dimensional counterexample: minima of chol(G1), chol(G2),
    chol(G1 + G2) at i = 2 and the three generalization margins.
    """
    g1, g2 = np.array(COUNTEREXAMPLE_G1), np.array(COUNTEREXAMPLE_G2)
    margins = generalized_failure(g1, g2, 2, **oracle)
    return {
        "lambda2_r1": minima(g1, **oracle)[1],
        "lambda2_r2": minima(g2, **oracle)[1],
        "lambda2_r3": minima(g1 + g2, **oracle)[1],
        "margins": margins,
        "failed": margins.failed(),
    }


def additive_tight_family(alphas, beta: float) -> Tuple[np.ndarray, np.ndarray, List[float]]:
    """
    G1 = diag(alpha), G2 = beta I, where the additive bound is attained.

    Returns:
        ``(G1, G2, [sqrt(alpha_i + beta)])`` with alpha sorted ascending
    """
    a = np.sort(np.asarray(alphas, dtype=float))
    if beta <= 0 or np.any(a <= 0):
        raise PreconditionViolated("alphas and beta must be positive")
    expected = [math.sqrt(x + beta) for x in a]
    return np.diag(a), beta * np.eye(len(a)), expected


def inverse_tight_family(alphas, beta: float) -> Tuple[np.ndarray, np.ndarray, Dict[str, List[float]]]:
    """
    G1 = diag(alpha), G2 = beta I - G1 (beta > max alpha), where both
    inverse-form bounds are attained.

    Returns:
        ``(G1, G2, closed_form)`` with the closed-form minima of chol(G1^-1),
        chol(G2^-1) and of the Woodbury parts
    """
    a = np.sort(np.asarray(alphas, dtype=float))
    if np.any(a <= 0) or beta <= a[-1]:
        raise PreconditionViolated("need 0 < alpha_1 <= ... <= alpha_n < beta")
    n = len(a)
    rev = a[::-1]
    closed_form = {
        "r1": [1.0 / math.sqrt(x) for x in rev],
        "r2": [1.0 / math.sqrt(beta - x) for x in a],
        "r3": [1.0 / math.sqrt(beta)] * n,
        "r4": [math.sqrt(1.0 / x - 1.0 / beta) for x in rev],
        "r5": [math.sqrt(1.0 / (beta - x) - 1.0 / beta) for x in a],
    }
    return np.diag(a), beta * np.eye(n) - np.diag(a), closed_form

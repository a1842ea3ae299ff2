"""
Exact successive minima by sphere enumeration.

The basis is LLL-reduced first; every lattice vector (up to sign) inside
the ball whose radius is the largest reduced column norm is enumerated
depth-first, the vectors are sorted by norm, and a nondecreasing,
linearly independent sequence is extracted greedily. This is the
verification oracle and is refused beyond ``MAX_EXACT_DIM``.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from succmin.core.errors import DimensionTooLarge, EnumerationIncomplete, RadiusOverflow
from succmin.core.matrix import ArrayLike, as_upper_factor
from succmin.lattice.integer import IndependenceTracker
from succmin.lattice.reduction import ReducedBasis, lll_reduce
from succmin.utils.logging import RunLogger, get_logger

MAX_EXACT_DIM = 10
NODE_BUDGET = 10**7
RADIUS_SLACK = 1e-9
ORACLE_DELTA = 0.99


class MinimaResultModel(BaseModel):
    """On-disk form of a MinimaResult."""

    values: List[float]
    witnesses: List[List[int]]
    exact: bool
    search_radius: float


@dataclass(frozen=True)
class MinimaResult:
    """Successive minima with one integer witness per index."""

    dim: int
    values: Tuple[float, ...]
    witnesses: Tuple[Tuple[int, ...], ...]
    exact: bool
    search_radius: float
    nodes: int = 0

    def witness_matrix(self) -> np.ndarray:
        """Witnesses as the columns of an integer matrix."""
        return np.array(self.witnesses, dtype=np.int64).T

    def to_model(self) -> MinimaResultModel:
        return MinimaResultModel(
            values=list(self.values),
            witnesses=[list(w) for w in self.witnesses],
            exact=self.exact,
            search_radius=self.search_radius,
        )


def _check_dim(n: int, max_exact_dim: int) -> None:
    if n > max_exact_dim:
        raise DimensionTooLarge(f"exact enumeration is limited to dim <= {max_exact_dim}, got {n}")


def enumerate_ball(r: np.ndarray, radius: float, node_budget: int = NODE_BUDGET):
    """
    All nonzero y with ||r y|| <= radius whose last nonzero entry is positive.

    Args:
        r: Upper-triangular basis
        radius: Ball radius
        node_budget: Maximum number of search-tree nodes

    Returns:
        Tuple ``(vectors, nodes)``

    Raises:
        RadiusOverflow: If the search tree exceeds ``node_budget``
    """
    n = r.shape[0]
    radius_sq = radius * radius
    y = [0] * n
    found: List[Tuple[int, ...]] = []
    nodes = 0

    def visit(k: int, dist_sq: float, zero_above: bool) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise RadiusOverflow(f"enumeration exceeded {node_budget} nodes at radius {radius:.6g}")
        rkk = r[k, k]
        center = -sum(r[k, j] * y[j] for j in range(k + 1, n)) / rkk
        half_width = math.sqrt(max(radius_sq - dist_sq, 0.0)) / rkk
        lo = math.ceil(center - half_width)
        hi = math.floor(center + half_width)
        if zero_above:
            lo = max(lo, 0)
        for v in range(lo, hi + 1):
            dist = dist_sq + (rkk * (v - center)) ** 2
            if dist > radius_sq:
                continue
            y[k] = v
            if k == 0:
                if not (zero_above and v == 0):
                    found.append(tuple(y))
            else:
                visit(k - 1, dist, zero_above and v == 0)
        y[k] = 0

    visit(n - 1, 0.0, True)
    return found, nodes


def _canonical(x: np.ndarray) -> Tuple[int, ...]:
    """Sign-normalize so the first nonzero entry is positive."""
    for a in x:
        if a != 0:
            return tuple(int(v) for v in (x if a > 0 else -x))
    return tuple(int(v) for v in x)


def _ball_vectors(
    r: np.ndarray, reduced: ReducedBasis, radius: float, node_budget: int
) -> Tuple[List[Tuple[float, Tuple[int, ...]]], int]:
    """Lattice vectors of L(r) inside the ball, sorted by (norm, lexicographic)."""
    ys, nodes = enumerate_ball(reduced.r, radius, node_budget)
    if not ys:
        return [], nodes
    xs = np.array(ys, dtype=np.int64) @ reduced.z.T
    norms = np.linalg.norm(xs @ r.T, axis=1)
    ranked = sorted((float(nv), _canonical(x)) for nv, x in zip(norms, xs))
    return ranked, nodes


def oracle_radius(reduced: ReducedBasis) -> float:
    """Largest column norm of an LLL-reduced basis, slightly inflated."""
    return float(np.max(reduced.column_norms())) * (1.0 + RADIUS_SLACK)


def solve_smp(
    r: ArrayLike,
    max_exact_dim: int = MAX_EXACT_DIM,
    node_budget: int = NODE_BUDGET,
    logger: Optional[RunLogger] = None,
) -> MinimaResult:
    """
    Solve the successive minima problem exactly.

    Args:
        r: UpperTriangularFactor
        max_exact_dim: Largest dimension accepted
        node_budget: Enumeration node limit
        logger: Optional run logger

    Returns:
        MinimaResult with ``exact=True``

    Raises:
        DimensionTooLarge: If dim exceeds ``max_exact_dim``
        RadiusOverflow: If enumeration exceeds ``node_budget``
        EnumerationIncomplete: If the ball yields no full-rank nondecreasing set
    """
    r = as_upper_factor(r)
    n = r.shape[0]
    _check_dim(n, max_exact_dim)
    reduced = lll_reduce(r, ORACLE_DELTA)
    radius = oracle_radius(reduced)
    ranked, nodes = _ball_vectors(r, reduced, radius, node_budget)

    tracker = IndependenceTracker(n)
    values: List[float] = []
    witnesses: List[Tuple[int, ...]] = []
    for norm, x in ranked:
        if tracker.add(x):
            values.append(norm)
            witnesses.append(x)
            if tracker.rank == n:
                break

    # the reduced basis itself lies in the ball, so rank n is always reached
    if len(values) != n:
        raise EnumerationIncomplete(f"ball of radius {radius:.6g} held rank {len(values)} < {n}")
    if any(a > b for a, b in zip(values, values[1:])):
        raise EnumerationIncomplete(f"minima are not nondecreasing: {values}")

    (logger or get_logger()).log_enumeration(n, nodes, radius, True)
    return MinimaResult(
        dim=n,
        values=tuple(values),
        witnesses=tuple(witnesses),
        exact=True,
        search_radius=radius,
        nodes=nodes,
    )


def solve_svp(
    r: ArrayLike,
    max_exact_dim: int = MAX_EXACT_DIM,
    node_budget: int = NODE_BUDGET,
    logger: Optional[RunLogger] = None,
) -> Tuple[float, Tuple[int, ...]]:
    """
    Shortest nonzero lattice vector.

    The search radius is the shortest reduced column norm, which always
    bounds lambda_1.

    Returns:
        Tuple ``(lambda_1, witness)``
    """
    r = as_upper_factor(r)
    n = r.shape[0]
    _check_dim(n, max_exact_dim)
    reduced = lll_reduce(r, ORACLE_DELTA)
    radius = float(np.min(reduced.column_norms())) * (1.0 + RADIUS_SLACK)
    ranked, nodes = _ball_vectors(r, reduced, radius, node_budget)
    (logger or get_logger()).log_enumeration(n, nodes, radius, True)
    norm, x = ranked[0]
    return norm, x


def solve_sivp(
    r: ArrayLike,
    max_exact_dim: int = MAX_EXACT_DIM,
    node_budget: int = NODE_BUDGET,
    logger: Optional[RunLogger] = None,
) -> Tuple[float, np.ndarray]:
    """
    Shortest independent vectors: an invertible integer X with
    max_i ||R x_i|| = lambda_n. X is invertible, not necessarily unimodular.

    Returns:
        Tuple ``(objective, X)``
    """
    result = solve_smp(r, max_exact_dim, node_budget, logger)
    return result.values[-1], result.witness_matrix()

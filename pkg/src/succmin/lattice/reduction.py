"""
Lattice basis reduction on upper-triangular R-factors.

Size reduction, LLL and PLLL (partial LLL: swaps driven by the
diagonal-decrease test only, followed by one size-reduction pass). Every
reduction tracks the integer transform Z so that the reduced factor is
the R-factor of R @ Z.
"""

import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel

from succmin.core.errors import InvalidDelta, TransformOverflow
from succmin.core.linalg import triangularize
from succmin.core.matrix import ArrayLike, MatrixModel, as_integer_matrix, as_upper_factor
from succmin.utils.logging import RunLogger, get_logger

DEFAULT_DELTA = 0.99

_INT_LIMIT = 2**63 - 1


class ReductionKind(str, Enum):
    """Which reduction produced a basis."""

    SIZE = "size-only"
    LLL = "lll"
    PLLL = "plll+size"


class ReducedBasisModel(BaseModel):
    """On-disk form of a ReducedBasis."""

    r: MatrixModel
    z: List[List[int]]
    quality: str
    delta: float
    swaps: int
    config: Dict[str, Any] = {}


@dataclass(frozen=True)
class ReducedBasis:
    """Reduced R-factor with the unimodular transform that produced it."""

    r: np.ndarray
    z: np.ndarray
    quality: ReductionKind
    delta: float
    swaps: int = 0

    @property
    def dim(self) -> int:
        return self.r.shape[0]

    def column_norms(self) -> np.ndarray:
        return np.linalg.norm(self.r, axis=0)

    def to_model(self, config: Optional[Dict[str, Any]] = None) -> ReducedBasisModel:
        return ReducedBasisModel(
            r=MatrixModel.from_array(self.r),
            z=self.z.tolist(),
            quality=self.quality.value,
            delta=self.delta,
            swaps=self.swaps,
            config=config or {},
        )


class _Workspace:
    """Call-local mutable copies of R and Z."""

    def __init__(self, r: np.ndarray, z: np.ndarray):
        self.r = np.array(r, dtype=np.float64)
        self.z = np.array(z, dtype=np.int64)
        self.n = self.r.shape[0]
        self.swaps = 0

    def reduce(self, j: int, k: int) -> None:
        """Subtract round(r_jk / r_jj) copies of column j from column k."""
        r = self.r
        if abs(r[j, k]) <= 0.5 * r[j, j]:
            return
        mu = int(np.rint(r[j, k] / r[j, j]))
        bound = abs(mu) * int(np.max(np.abs(self.z[:, j]))) + int(np.max(np.abs(self.z[:, k])))
        if bound > _INT_LIMIT:
            raise TransformOverflow(f"transform entry would exceed 64 bits (mu={mu})")
        r[: j + 1, k] -= mu * r[: j + 1, j]
        self.z[:, k] -= mu * self.z[:, j]

    def swap(self, k: int) -> None:
        """Swap columns k-1 and k and restore triangular form by a Givens rotation."""
        r = self.r
        r[:, [k - 1, k]] = r[:, [k, k - 1]]
        self.z[:, [k - 1, k]] = self.z[:, [k, k - 1]]
        a, b = r[k - 1, k - 1], r[k, k - 1]
        rho = float(np.hypot(a, b))
        c, s = a / rho, b / rho
        rot = np.array([[c, s], [-s, c]])
        r[k - 1 : k + 1, k - 1 :] = rot @ r[k - 1 : k + 1, k - 1 :]
        r[k - 1, k - 1] = rho
        r[k, k - 1] = 0.0
        if r[k, k] < 0.0:
            r[k, k:] = -r[k, k:]
        self.swaps += 1

    def lovasz_fails(self, k: int, delta: float, r_off: float) -> bool:
        r = self.r
        return delta * r[k - 1, k - 1] ** 2 > r_off**2 + r[k, k] ** 2

    def size_reduce_all(self) -> None:
        for k in range(1, self.n):
            for j in range(k - 1, -1, -1):
                self.reduce(j, k)

    def result(self, kind: ReductionKind, delta: float) -> ReducedBasis:
        r = np.triu(self.r)
        r.setflags(write=False)
        z = self.z.copy()
        z.setflags(write=False)
        return ReducedBasis(r=r, z=z, quality=kind, delta=delta, swaps=self.swaps)


def _check_delta(delta: float) -> None:
    if not 0.25 < delta <= 1.0:
        raise InvalidDelta(f"delta={delta} must lie in (0.25, 1]")


def _workspace(r: ArrayLike, start: Optional[ArrayLike]) -> _Workspace:
    r = as_upper_factor(r)
    if start is None:
        return _Workspace(r, np.eye(r.shape[0], dtype=np.int64))
    z0 = as_integer_matrix(start)
    return _Workspace(triangularize(r @ z0), z0)


def size_reduce(r: ArrayLike, start: Optional[ArrayLike] = None) -> ReducedBasis:
    """
    Size-reduce a basis: |r'_jk| <= r'_jj / 2 for all j < k.

    Args:
        r: UpperTriangularFactor
        start: Optional unimodular transform to apply first

    Returns:
        ReducedBasis tagged size-only
    """
    ws = _workspace(r, start)
    ws.size_reduce_all()
    return ws.result(ReductionKind.SIZE, 0.0)


def lll_reduce(
    r: ArrayLike,
    delta: float = DEFAULT_DELTA,
    start: Optional[ArrayLike] = None,
    logger: Optional[RunLogger] = None,
) -> ReducedBasis:
    """
    LLL-reduce an upper-triangular basis.

    Args:
        r: UpperTriangularFactor
        delta: Lovasz parameter in (1/4, 1]
        start: Optional unimodular transform the reduction restarts from
        logger: Optional run logger

    Returns:
        ReducedBasis satisfying the size and Lovasz conditions

    Raises:
        InvalidDelta: If delta is out of range
        TransformOverflow: If Z leaves the 64-bit range
    """
    _check_delta(delta)
    started = time.perf_counter()
    ws = _workspace(r, start)
    k = 1
    while k < ws.n:
        ws.reduce(k - 1, k)
        if ws.lovasz_fails(k, delta, ws.r[k - 1, k]):
            ws.swap(k)
            k = max(k - 1, 1)
        else:
            for j in range(k - 2, -1, -1):
                ws.reduce(j, k)
            k += 1
    (logger or get_logger()).log_reduction("lll", ws.n, ws.swaps, time.perf_counter() - started)
    return ws.result(ReductionKind.LLL, delta)


def plll_reduce(
    r: ArrayLike,
    delta: float = DEFAULT_DELTA,
    start: Optional[ArrayLike] = None,
    logger: Optional[RunLogger] = None,
) -> ReducedBasis:
    """
    PLLL reduction followed by a full size-reduction pass.

    A column is reduced against its left neighbour only when the
    diagonal-decrease test calls for a swap; all other size reduction is
    deferred to the final pass. Ties in the test do not swap.

    Args:
        r: UpperTriangularFactor
        delta: Lovasz parameter in (1/4, 1]
        start: Optional unimodular transform the reduction restarts from
        logger: Optional run logger

    Returns:
        ReducedBasis tagged plll+size

    Raises:
        InvalidDelta: If delta is out of range
        TransformOverflow: If Z leaves the 64-bit range
    """
    _check_delta(delta)
    started = time.perf_counter()
    ws = _workspace(r, start)
    k = 1
    while k < ws.n:
        a, b = ws.r[k - 1, k - 1], ws.r[k - 1, k]
        zeta = np.rint(b / a)
        if ws.lovasz_fails(k, delta, b - zeta * a):
            ws.reduce(k - 1, k)
            ws.swap(k)
            k = max(k - 1, 1)
        else:
            k += 1
    ws.size_reduce_all()
    (logger or get_logger()).log_reduction("plll", ws.n, ws.swaps, time.perf_counter() - started)
    return ws.result(ReductionKind.PLLL, delta)


def reduce_basis(
    r: ArrayLike,
    kind: str = "plll",
    delta: float = DEFAULT_DELTA,
    start: Optional[ArrayLike] = None,
    logger: Optional[RunLogger] = None,
) -> ReducedBasis:
    """Dispatch on ``kind`` ("plll", "lll" or "size")."""
    if kind == "plll":
        return plll_reduce(r, delta, start=start, logger=logger)
    if kind == "lll":
        return lll_reduce(r, delta, start=start, logger=logger)
    if kind == "size":
        return size_reduce(r, start=start)
    raise ValueError(f"unknown reduction kind {kind!r}")


def is_size_reduced(r: np.ndarray, tol: float = 1e-9) -> bool:
    n = r.shape[0]
    return all(
        abs(r[j, k]) <= 0.5 * r[j, j] * (1.0 + tol) for k in range(n) for j in range(k)
    )


def lovasz_holds(r: np.ndarray, delta: float, tol: float = 1e-9) -> bool:
    """Lovasz condition at every adjacent pair of an upper-triangular basis."""
    return all(
        delta * r[k - 1, k - 1] ** 2 <= (r[k - 1, k] ** 2 + r[k, k] ** 2) * (1.0 + tol)
        for k in range(1, r.shape[0])
    )

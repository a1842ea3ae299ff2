"""Dense real linear algebra shared by every other module."""

from typing import Tuple

import numpy as np
import scipy.linalg

from succmin.core.errors import DimensionMismatch, NotPositiveDefinite
from succmin.core.matrix import ArrayLike, as_matrix, as_square

SYM_TOL = 1e-10
PIVOT_TOL = 1e-12
FACT_TOL = 1e-9


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def rel_error(a: np.ndarray, b: np.ndarray) -> float:
    """Max elementwise error of ``a`` against ``b``, relative to ``max|b|``."""
    scale = max(max_abs(b), np.finfo(float).tiny)
    return max_abs(np.asarray(a) - np.asarray(b)) / scale


def is_symmetric(m: np.ndarray, tol: float = SYM_TOL) -> bool:
    return max_abs(m - m.T) <= tol * max(max_abs(m), 1.0)


def symmetrize(m: np.ndarray) -> np.ndarray:
    return (m + m.T) / 2.0


def cholesky(g: ArrayLike) -> np.ndarray:
    """
    Upper-triangular Cholesky factor R with R^T R = G.

    Args:
        g: Strictly SPD matrix

    Returns:
        Read-only R with positive diagonal

    Raises:
        NonSquare: If g is not square
        NotPositiveDefinite: If g is not symmetric or a pivot falls to
            ``PIVOT_TOL`` times the largest diagonal entry or below
    """
    g = as_square(g)
    if not is_symmetric(g):
        raise NotPositiveDefinite("matrix is not symmetric")
    g = symmetrize(g)
    pivot_floor = PIVOT_TOL * max(float(np.max(np.diag(g))), 0.0)
    try:
        r = scipy.linalg.cholesky(g, lower=False, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefinite(f"matrix is not positive definite: {e}") from e
    pivots = np.diag(r) ** 2
    if np.any(pivots <= pivot_floor):
        j = int(np.argmin(pivots))
        raise NotPositiveDefinite(
            f"pivot {j + 1} is {pivots[j]:.3e}, at or below tolerance {pivot_floor:.3e}"
        )
    r = np.triu(r)
    r.setflags(write=False)
    return r


def is_spd(m: ArrayLike, strict: bool = True) -> bool:
    """
    SPD (strict) or PSD (non-strict) predicate.

    The non-strict test factors ``m + PIVOT_TOL * I``.

    Raises:
        NonSquare: If m is not square
    """
    m = as_square(m)
    if not is_symmetric(m):
        return False
    if not strict:
        scale = max(float(np.max(np.abs(np.diag(m)))), 1.0)
        m = m + PIVOT_TOL * scale * np.eye(m.shape[0])
    try:
        cholesky(m)
    except NotPositiveDefinite:
        return False
    return True


def spd_inverse(g: ArrayLike) -> np.ndarray:
    """Inverse of an SPD matrix through Cholesky solves."""
    r = cholesky(g)
    n = r.shape[0]
    inv = scipy.linalg.cho_solve((r, False), np.eye(n), check_finite=False)
    return symmetrize(inv)


def woodbury_decompose(g1: ArrayLike, g2: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    Split G1^-1 as S + T by the Woodbury identity.

    Args:
        g1: Strictly SPD matrix
        g2: Strictly SPD matrix of the same size

    Returns:
        Tuple ``(S, T)`` with ``S = (G1 + G2)^-1`` and
        ``T = G1^-1 (G1^-1 + G2^-1)^-1 G1^-1``

    Raises:
        DimensionMismatch: If the sizes differ
        NotPositiveDefinite: If either input is not SPD
    """
    g1 = as_square(g1)
    g2 = as_square(g2)
    if g1.shape != g2.shape:
        raise DimensionMismatch(f"{g1.shape} vs {g2.shape}")
    g1_inv = spd_inverse(g1)
    g2_inv = spd_inverse(g2)
    s = spd_inverse(symmetrize(g1) + symmetrize(g2))
    t = symmetrize(g1_inv @ spd_inverse(g1_inv + g2_inv) @ g1_inv)
    return s, t


def det(m: ArrayLike) -> float:
    """
    Determinant. Triangular input returns the diagonal product.

    Raises:
        NonSquare: If m is not square
    """
    m = as_square(m)
    if np.all(np.tril(m, -1) == 0.0) or np.all(np.triu(m, 1) == 0.0):
        return float(np.prod(np.diag(m)))
    return float(scipy.linalg.det(m, check_finite=False))


def gram(r: np.ndarray) -> np.ndarray:
    return symmetrize(r.T @ r)


def triangularize(a: ArrayLike) -> np.ndarray:
    """
    R-factor of a full column rank basis with its diagonal made positive.

    The returned factor generates a lattice isometric to L(a).
    """
    a = as_matrix(a)
    if a.shape[0] < a.shape[1]:
        raise DimensionMismatch(f"basis {a.shape} has more columns than rows")
    r = scipy.linalg.qr(a, mode="r", check_finite=False)[0][: a.shape[1], :]
    signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
    r = np.triu(signs[:, None] * r)
    if np.any(np.diag(r) <= PIVOT_TOL * max_abs(np.diag(r))):
        raise NotPositiveDefinite("basis is not full column rank")
    r.setflags(write=False)
    return r


def column_norms(a: np.ndarray) -> np.ndarray:
    return np.linalg.norm(a, axis=0)

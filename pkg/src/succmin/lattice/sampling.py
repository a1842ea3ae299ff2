"""Seeded random instances for property sweeps (numpy PCG64 generators)."""

import numpy as np

from succmin.core.linalg import cholesky, symmetrize


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator for ``seed``; extra integers select an independent stream."""
    return np.random.default_rng([seed, *stream])


def random_spd(rng: np.random.Generator, n: int, shift: float = 0.1) -> np.ndarray:
    """A A^T / n + shift I with A standard normal."""
    a = rng.standard_normal((n, n))
    return symmetrize(a @ a.T / n + shift * np.eye(n))


def random_basis(rng: np.random.Generator, n: int) -> np.ndarray:
    """Cholesky factor of a random SPD matrix."""
    return cholesky(random_spd(rng, n))


def random_ordered_pair(rng: np.random.Generator, n: int):
    """(G1, G2) with G1 - G2 SPD."""
    g2 = random_spd(rng, n)
    return symmetrize(g2 + random_spd(rng, n, shift=0.05)), g2


def random_psd_singular(rng: np.random.Generator, m: int, rank: int = -1) -> np.ndarray:
    """C C^T with C of ``rank`` columns (default m - 1, at least 1)."""
    k = max(1, m - 1) if rank < 0 else rank
    c = rng.standard_normal((m, k))
    return symmetrize(c @ c.T)


def random_full_column_rank(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """n x m matrix of full column rank (n >= m)."""
    while True:
        b = rng.standard_normal((n, m))
        if np.linalg.matrix_rank(b) == m:
            return b

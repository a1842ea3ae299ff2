"""Exact integer helpers: determinants and rational-rank tests."""

from math import gcd
from typing import List, Sequence, Tuple

import numpy as np


def integer_det(z: np.ndarray) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = [[int(x) for x in row] for row in np.asarray(z)]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def is_unimodular(z: np.ndarray) -> bool:
    return abs(integer_det(z)) == 1


class IndependenceTracker:
    """
    Incremental rational-rank test over integer vectors.

    Stored rows are kept in fraction-free echelon form; a candidate is
    eliminated against them and is independent iff something survives.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: List[Tuple[int, List[int]]] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _eliminate(self, v: Sequence[int]) -> List[int]:
        w = [int(x) for x in v]
        for pivot, row in self._rows:
            if w[pivot] != 0:
                p, q = row[pivot], w[pivot]
                w = [p * a - q * b for a, b in zip(w, row)]
                g = 0
                for a in w:
                    g = gcd(g, a)
                if g > 1:
                    w = [a // g for a in w]
        return w

    def add(self, v: Sequence[int]) -> bool:
        """Add ``v`` if it is independent of the stored vectors."""
        w = self._eliminate(v)
        pivot = next((i for i, a in enumerate(w) if a != 0), None)
        if pivot is None:
            return False
        self._rows.append((pivot, w))
        return True

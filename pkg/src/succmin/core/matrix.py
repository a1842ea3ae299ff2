"""Dense matrix value types and the shared matrix JSON format.

Matrices are plain ``numpy`` float64 arrays. The ``as_*`` helpers
validate a type invariant, copy the data and return a read-only array,
so a value that passed validation cannot be mutated afterwards.
"""

import json
from pathlib import Path
from typing import Any, List, Union

import numpy as np
from pydantic import BaseModel, model_validator

from succmin.core.errors import InvalidMatrix, NonSquare, ParseError

ArrayLike = Union[np.ndarray, List[List[float]]]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_matrix(data: ArrayLike) -> np.ndarray:
    """
    Validate a DenseMatrix.

    Args:
        data: Nested lists or a 2-D array

    Returns:
        Read-only float64 copy

    Raises:
        InvalidMatrix: If not 2-D, empty, or holding NaN/infinity
    """
    a = np.array(data, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidMatrix(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrix("matrix has non-finite entries")
    return _frozen(a)


def as_square(data: ArrayLike) -> np.ndarray:
    """Validate a square DenseMatrix."""
    a = as_matrix(data)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square matrix, got {a.shape[0]}x{a.shape[1]}")
    return a


def as_upper_factor(data: ArrayLike) -> np.ndarray:
    """
    Validate an UpperTriangularFactor: square, exact zeros below the
    diagonal and a strictly positive diagonal.
    """
    r = as_square(data)
    if np.any(np.tril(r, -1) != 0.0):
        raise InvalidMatrix("factor has nonzero entries below the diagonal")
    if np.any(np.diag(r) <= 0.0):
        raise InvalidMatrix("factor diagonal must be strictly positive")
    return r


def as_integer_matrix(data: Any) -> np.ndarray:
    """Validate a square integer matrix (stored as int64)."""
    a = np.array(data)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise NonSquare(f"expected a square integer matrix, got shape {a.shape}")
    if a.dtype.kind == "f":
        if not np.all(np.isfinite(a)) or np.any(a != np.round(a)):
            raise InvalidMatrix("integer matrix has non-integral entries")
    elif a.dtype.kind not in "iu":
        raise InvalidMatrix(f"integer matrix has dtype {a.dtype}")
    return _frozen(a.astype(np.int64))


class MatrixModel(BaseModel):
    """On-disk matrix: ``{"rows": r, "cols": c, "data": [row-major]}``."""

    rows: int
    cols: int
    data: List[float]

    @model_validator(mode="after")
    def _check_shape(self) -> "MatrixModel":
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be positive")
        if len(self.data) != self.rows * self.cols:
            raise ValueError(
                f"data has {len(self.data)} entries, expected {self.rows * self.cols}"
            )
        return self

    @classmethod
    def from_array(cls, a: np.ndarray) -> "MatrixModel":
        a = np.asarray(a)
        return cls(rows=a.shape[0], cols=a.shape[1], data=[float(x) for x in a.ravel()])

    def to_array(self) -> np.ndarray:
        return as_matrix(np.array(self.data, dtype=np.float64).reshape(self.rows, self.cols))


def _reject_constant(token: str) -> Any:
    raise ParseError(f"non-finite token {token!r} is not allowed")


def loads_json(text: str) -> Any:
    """Parse JSON, rejecting the NaN/Infinity extension tokens."""
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from e


def dumps_json(obj: Any) -> str:
    """Serialize deterministically (sorted keys, shortest float repr)."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def parse_matrix(obj: Any) -> np.ndarray:
    """Build a validated matrix from an already-decoded JSON object."""
    try:
        return MatrixModel.model_validate(obj).to_array()
    except InvalidMatrix:
        raise
    except ValueError as e:
        raise ParseError(f"invalid matrix object: {e}") from e


def load_matrix(path: Union[str, Path]) -> np.ndarray:
    """Read a matrix JSON file."""
    return parse_matrix(loads_json(Path(path).read_text()))


def dump_matrix(a: np.ndarray, path: Union[str, Path]) -> None:
    """Write a matrix JSON file."""
    Path(path).write_text(dumps_json(MatrixModel.from_array(a).model_dump()))

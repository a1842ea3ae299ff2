"""
IF C-RAN problem instances: channel H, block-diagonal equalizer B, power
constant P and fronthaul capacity C.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel
from scipy.linalg import block_diag

from succmin.core.errors import (
    DimensionMismatch,
    GenerationFailed,
    InvalidMatrix,
    ParseError,
    PreconditionViolated,
    RankDeficient,
)
from succmin.core.linalg import symmetrize
from succmin.core.matrix import ArrayLike, MatrixModel, as_matrix, as_square, dumps_json, loads_json
from succmin.lattice.sampling import make_rng

GENERATION_ATTEMPTS = 100
MAX_BLOCK_CONDITION = 1e6
INSTANCE_MODES = ("plain", "random")


class InstanceModel(BaseModel):
    """On-disk instance: ``{"h", "b", "blocks", "p", "c"}`` plus the generating run's config."""

    h: MatrixModel
    b: MatrixModel
    blocks: List[int]
    p: float
    c: float
    config: Dict[str, Any] = {}


def _check_block_structure(b: np.ndarray, blocks: Sequence[int]) -> None:
    if any(k < 1 for k in blocks) or sum(blocks) != b.shape[0]:
        raise DimensionMismatch(f"blocks {list(blocks)} do not partition dimension {b.shape[0]}")
    mask = block_diag(*[np.ones((k, k)) for k in blocks]) == 0.0
    if np.any(b[mask] != 0.0):
        raise InvalidMatrix("B has nonzero entries outside its diagonal blocks")


@dataclass(frozen=True)
class IfCranInstance:
    """
    Validated instance.

    H is m x n with full column rank, B is m x m block-diagonal per
    ``blocks`` and invertible, P > 0 and C >= 0 are finite.
    """

    h: np.ndarray
    b: np.ndarray
    blocks: Tuple[int, ...]
    p: float
    c: float

    def __post_init__(self):
        h = as_matrix(self.h)
        b = as_square(self.b)
        m, n = h.shape
        if b.shape[0] != m:
            raise DimensionMismatch(f"B is {b.shape[0]}x{b.shape[0]} but H has {m} rows")
        if m < n or np.linalg.matrix_rank(h) < n:
            raise RankDeficient(f"H ({m}x{n}) is not full column rank")
        _check_block_structure(b, self.blocks)
        if np.linalg.matrix_rank(b) < m:
            raise RankDeficient("B is singular")
        if not (math.isfinite(self.p) and self.p > 0):
            raise PreconditionViolated(f"P={self.p} must be finite and positive")
        if not (math.isfinite(self.c) and self.c >= 0):
            raise PreconditionViolated(f"C={self.c} must be finite and non-negative")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "blocks", tuple(int(k) for k in self.blocks))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "c", float(self.c))

    @property
    def m(self) -> int:
        return self.h.shape[0]

    @property
    def n(self) -> int:
        return self.h.shape[1]

    @property
    def bh(self) -> np.ndarray:
        return self.b @ self.h

    def g_hat(self) -> np.ndarray:
        """P (BH)(BH)^T + B B^T."""
        bh = self.bh
        return symmetrize(self.p * bh @ bh.T + self.b @ self.b.T)

    def with_params(self, p: Optional[float] = None, c: Optional[float] = None) -> "IfCranInstance":
        """Copy with P and/or C replaced."""
        return IfCranInstance(
            h=self.h,
            b=self.b,
            blocks=self.blocks,
            p=self.p if p is None else p,
            c=self.c if c is None else c,
        )

    def to_model(self, config: Optional[Dict[str, Any]] = None) -> InstanceModel:
        return InstanceModel(
            h=MatrixModel.from_array(self.h),
            b=MatrixModel.from_array(self.b),
            blocks=list(self.blocks),
            p=self.p,
            c=self.c,
            config=config or {},
        )

    @classmethod
    def from_model(cls, model: InstanceModel) -> "IfCranInstance":
        return cls(h=model.h.to_array(), b=model.b.to_array(), blocks=tuple(model.blocks), p=model.p, c=model.c)


def identity_instance(n: int, p: float, c: float) -> IfCranInstance:
    """B = H = I_n with a single block."""
    return IfCranInstance(h=np.eye(n), b=np.eye(n), blocks=(n,), p=p, c=c)


def load_instance(path: Union[str, Path]) -> IfCranInstance:
    """
    Read an instance JSON file.

    Raises:
        ParseError: If the file is not a valid instance object
        InvalidMatrix: If a matrix breaks an instance invariant
    """
    obj = loads_json(Path(path).read_text())
    try:
        model = InstanceModel.model_validate(obj)
    except ValueError as e:
        raise ParseError(f"invalid instance file {path}: {e}") from e
    return IfCranInstance.from_model(model)


def dump_instance(
    inst: IfCranInstance, path: Union[str, Path], config: Optional[Dict[str, Any]] = None
) -> None:
    Path(path).write_text(dumps_json(inst.to_model(config).model_dump()))


def _random_block(rng: np.random.Generator, k: int) -> np.ndarray:
    for _ in range(GENERATION_ATTEMPTS):
        block = rng.standard_normal((k, k))
        if np.linalg.cond(block) < MAX_BLOCK_CONDITION:
            return block
    raise GenerationFailed(f"no well-conditioned {k}x{k} block in {GENERATION_ATTEMPTS} attempts")


def generate_instance(
    n: int,
    blocks: Sequence[int],
    p: float,
    c: float,
    seed: int,
    mode: str = "plain",
) -> IfCranInstance:
    """
    Seeded random instance.

    Args:
        n: Number of streams (columns of H)
        blocks: Block sizes of B; their sum is m >= n
        p: Power constant
        c: Fronthaul capacity
        seed: Root seed of the PCG64 generator
        mode: "plain" for identity blocks, "random" for Gaussian blocks

    Returns:
        IfCranInstance with standard normal H

    Raises:
        PreconditionViolated: If sum(blocks) < n or mode is unknown
        GenerationFailed: If no full column rank H is drawn in 100 attempts
    """
    if mode not in INSTANCE_MODES:
        raise PreconditionViolated(f"mode {mode!r} not in {INSTANCE_MODES}")
    m = sum(blocks)
    if n < 1 or m < n or any(k < 1 for k in blocks):
        raise PreconditionViolated(f"need 1 <= n <= sum(blocks), got n={n}, blocks={list(blocks)}")
    rng = make_rng(seed)
    for _ in range(GENERATION_ATTEMPTS):
        h = rng.standard_normal((m, n))
        if np.linalg.matrix_rank(h) == n:
            break
    else:
        raise GenerationFailed(f"no full column rank {m}x{n} channel in {GENERATION_ATTEMPTS} attempts")
    if mode == "plain":
        b = np.eye(m)
    else:
        b = block_diag(*[_random_block(rng, k) for k in blocks])
    return IfCranInstance(h=h, b=b, blocks=tuple(blocks), p=p, c=c)

"""
Suboptimal symmetric-rate maximization for IF C-RAN.

The fronthaul constraint is a bound on the last successive minimum of
F̄(d). It decreases with d, so the smallest admissible d is found by
bisection, each step estimating the minimum by a reduced basis. The
closed-form initializers bracket the boundary before the first step;
the integer matrix is then read off a reduction of F(d*).
"""

import copy
import math
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel
from scipy.linalg import solve

from succmin.config import SuccminConfig
from succmin.core.errors import CapacityTooSmall, NegativeInput, PreconditionViolated
from succmin.core.linalg import cholesky, column_norms, spd_inverse, symmetrize
from succmin.ifcran.instance import IfCranInstance
from succmin.lattice.reduction import reduce_basis
from succmin.utils.logging import RunLogger, get_logger

DOUBLING_CAP = 2.0**60


def threshold_of(c: float, mode: str = "exp2c") -> float:
    """
    Norm threshold for fronthaul capacity ``c``.

    Args:
        c: Capacity (>= 0)
        mode: "exp2c" for exp(2C), "expc" for exp(C), "pow2c" for 2^C

    Raises:
        NegativeInput: If c is negative
    """
    if c < 0:
        raise NegativeInput(f"capacity C={c} is negative")
    if mode == "exp2c":
        return math.exp(2.0 * c)
    if mode == "expc":
        return math.exp(c)
    if mode == "pow2c":
        return 2.0**c
    raise ValueError(f"unknown threshold mode {mode!r}")


def _threshold(inst: IfCranInstance, mode: str) -> float:
    tau = threshold_of(inst.c, mode)
    if tau <= 1.0:
        raise CapacityTooSmall(
            f"threshold tau={tau:.6g} (C={inst.c}, mode={mode}) must exceed 1", threshold=tau
        )
    return tau


def _check_d(d: float) -> None:
    if not (math.isfinite(d) and d > 0):
        raise PreconditionViolated(f"d={d} must be finite and positive")


def build_f(inst: IfCranInstance, d: float) -> np.ndarray:
    """
    chol((P^-1 I + (BH)^T (B B^T + d I)^-1 BH)^-1), the n x n objective factor.

    Raises:
        PreconditionViolated: If d is not positive
        NotPositiveDefinite: On a numerically degenerate instance
    """
    _check_d(d)
    bh = inst.bh
    shifted = symmetrize(inst.b @ inst.b.T + d * np.eye(inst.m))
    inner = np.eye(inst.n) / inst.p + bh.T @ solve(shifted, bh, assume_a="pos")
    return cholesky(spd_inverse(symmetrize(inner)))


def build_fbar(inst: IfCranInstance, d: float) -> np.ndarray:
    """chol(d^-1 Ĝ + I), the m x m constraint factor."""
    _check_d(d)
    return cholesky(symmetrize(inst.g_hat() / d + np.eye(inst.m)))


def d_min_init(inst: IfCranInstance, threshold_mode: str = "exp2c") -> float:
    """
    |det chol Ĝ|^(2/m) / (tau^2 - 1).

    The determinant bound on the last minimum of F̄(d) keeps it at or
    above tau for every d <= d_min.

    Raises:
        CapacityTooSmall: If tau <= 1
    """
    tau = _threshold(inst, threshold_mode)
    log_det = 2.0 * float(np.sum(np.log(np.diag(cholesky(inst.g_hat())))))
    return math.exp(log_det / inst.m) / (tau * tau - 1.0)


def _estimate(
    inst: IfCranInstance, d: float, start: np.ndarray, kind: str, delta: float
) -> Tuple[float, np.ndarray]:
    """
    Upper estimate of the last minimum of F̄(d) with its witness transform.

    Takes the better of the start transform as is and the reduction
    restarted from it.
    """
    fbar = build_fbar(inst, d)
    plain = float(np.max(column_norms(fbar @ start)))
    reduced = reduce_basis(fbar, kind, delta, start=start)
    value = float(np.max(reduced.column_norms()))
    if plain <= value:
        return plain, np.array(start, dtype=np.int64)
    return value, np.array(reduced.z)


def _double_until_feasible(
    inst: IfCranInstance, d0: float, start: np.ndarray, tau: float, kind: str, delta: float, tol: float
) -> Tuple[float, np.ndarray]:
    d = d0
    while d <= DOUBLING_CAP * d0:
        value, z = _estimate(inst, d, start, kind, delta)
        if value <= tau * (1.0 + tol):
            return d, z
        d *= 2.0
    raise CapacityTooSmall(
        f"no d up to {DOUBLING_CAP:.3g} x {d0:.6g} meets threshold tau={tau:.6g}", threshold=tau
    )


def d_max_init(
    inst: IfCranInstance,
    threshold_mode: str = "exp2c",
    kind: str = "plll",
    delta: float = 0.99,
    tol: float = 1e-6,
) -> Tuple[float, np.ndarray]:
    """
    Closed-form upper end of the bisection interval.

    Chol Ĝ is reduced once to get Z; scaling by d^-1/2 keeps Z reduced, so
    ||F̄(d) z_i||^2 = z_i^T Ĝ z_i / d + ||z_i||^2 and
    d_max = max_i z_i^T Ĝ z_i / (tau^2 - ||z_i||^2). If some ||z_i|| >= tau
    the formula has no finite solution and d doubles from d_min until the
    reduced-basis estimate meets tau instead.

    Returns:
        Tuple ``(d_max, Z)`` with d_max >= d_min

    Raises:
        CapacityTooSmall: If tau <= 1 or the doubling fallback hits its cap
    """
    tau = _threshold(inst, threshold_mode)
    d_min = d_min_init(inst, threshold_mode)
    reduced = reduce_basis(cholesky(inst.g_hat()), kind, delta)
    z = np.array(reduced.z)
    quad = reduced.column_norms() ** 2
    z_sq = np.sum(z.astype(np.float64) ** 2, axis=0)
    if np.any(z_sq >= tau * tau):
        return _double_until_feasible(inst, d_min, z, tau, kind, delta, tol)
    d_max = float(np.max(quad / (tau * tau - z_sq)))
    return max(d_max, d_min), z


@dataclass(frozen=True)
class BisectionResult:
    d: float
    certificate: np.ndarray
    estimate: float
    iterations: int
    d_min: float
    d_max: float
    threshold: float


def find_d(
    inst: IfCranInstance,
    config: Optional[SuccminConfig] = None,
    logger: Optional[RunLogger] = None,
) -> BisectionResult:
    """
    Smallest tested d whose reduced-basis estimate of the last minimum of
    F̄(d) stays within tau (1 + bisect_tol).

    The returned certificate Z satisfies max_i ||F̄(d) z_i|| <= tau (1 + bisect_tol).
    With the "legacy" initializer the interval starts at (0, d] with d
    found by doubling from 1.

    Raises:
        CapacityTooSmall: If tau <= 1 or no feasible d is found
    """
    config = config or SuccminConfig()
    logger = logger or get_logger()
    tau = _threshold(inst, config.threshold_mode)
    kind, delta, tol = config.reduction, config.delta, config.bisect_tol
    limit = tau * (1.0 + tol)

    if config.initializer == "legacy":
        lo = 0.0
        hi, start = _double_until_feasible(inst, 1.0, np.eye(inst.m, dtype=np.int64), tau, kind, delta, tol)
        d_min, d_max = lo, hi
    else:
        d_min = d_min_init(inst, config.threshold_mode)
        d_max, start = d_max_init(inst, config.threshold_mode, kind, delta, tol)
        value, z = _estimate(inst, d_min, start, kind, delta)
        if value <= limit:
            logger.log_bisection(d_min, d_min, 0, tau)
            return BisectionResult(d_min, z, value, 0, d_min, d_max, tau)
        lo, hi = d_min, d_max

    hi_value, hi_z = _estimate(inst, hi, start, kind, delta)
    iterations = 0
    while hi - lo > tol * d_max and iterations < config.max_bisect_iter:
        mid = 0.5 * (lo + hi)
        value, z = _estimate(inst, mid, start, kind, delta)
        if value <= limit:
            hi, hi_value, hi_z = mid, value, z
        else:
            lo = mid
        iterations += 1

    logger.log_bisection(lo, hi, iterations, tau)
    return BisectionResult(hi, hi_z, hi_value, iterations, d_min, d_max, tau)


def symmetric_rate(per_stream_norms, p: float, log_base: str = "2") -> float:
    """min_i 1/2 log(P / ||F x_i||^2), clamped at zero."""
    log = math.log2 if log_base == "2" else math.log
    worst = max(float(v) for v in per_stream_norms)
    return max(0.0, 0.5 * log(p / (worst * worst)))


class RateResultModel(BaseModel):
    """On-disk form of a RateResult, with the run configuration echoed."""

    d_star: float
    x_hat: List[List[int]]
    per_stream_norms: List[float]
    sym_rate: float
    iterations: int
    lambda_n_fbar_at_d: float
    threshold: float
    certificate: List[List[int]]
    d_min: float
    d_max: float
    config: Dict[str, Any]


@dataclass(frozen=True)
class RateResult:
    d_star: float
    x_hat: np.ndarray
    per_stream_norms: Tuple[float, ...]
    sym_rate: float
    iterations: int
    lambda_n_fbar_at_d: float
    threshold: float
    certificate: np.ndarray
    d_min: float
    d_max: float

    def certificate_holds(self, inst: IfCranInstance, tol: float = 1e-6) -> bool:
        """max_i ||F̄(d*) z_i|| <= tau (1 + tol), no oracle needed."""
        norms = column_norms(build_fbar(inst, self.d_star) @ self.certificate)
        return float(np.max(norms)) <= self.threshold * (1.0 + tol)

    def to_model(self, config: Dict[str, Any]) -> RateResultModel:
        return RateResultModel(
            d_star=self.d_star,
            x_hat=self.x_hat.tolist(),
            per_stream_norms=list(self.per_stream_norms),
            sym_rate=self.sym_rate,
            iterations=self.iterations,
            lambda_n_fbar_at_d=self.lambda_n_fbar_at_d,
            threshold=self.threshold,
            certificate=self.certificate.tolist(),
            d_min=self.d_min,
            d_max=self.d_max,
            config=config,
        )


def solve_rate(
    inst: IfCranInstance,
    config: Optional[SuccminConfig] = None,
    logger: Optional[RunLogger] = None,
) -> RateResult:
    """
    Find d*, reduce F(d*) and evaluate the symmetric rate of the reduced basis.

    Args:
        inst: Validated instance
        config: Solver settings (reduction, initializer, tolerances, log base)
        logger: Optional run logger

    Returns:
        RateResult whose X̂ is unimodular and whose certificate bounds
        the constraint at d*

    Raises:
        CapacityTooSmall: If the threshold cannot be met
    """
    config = config or SuccminConfig()
    bisection = find_d(inst, config, logger)
    f = build_f(inst, bisection.d)
    x_hat = np.array(reduce_basis(f, config.reduction, config.delta, logger=logger).z)
    norms = tuple(float(v) for v in column_norms(f @ x_hat))
    return RateResult(
        d_star=bisection.d,
        x_hat=x_hat,
        per_stream_norms=norms,
        sym_rate=symmetric_rate(norms, inst.p, config.log_base),
        iterations=bisection.iterations,
        lambda_n_fbar_at_d=bisection.estimate,
        threshold=bisection.threshold,
        certificate=bisection.certificate,
        d_min=bisection.d_min,
        d_max=bisection.d_max,
    )


@dataclass(frozen=True)
class ReductionComparison:
    plll_rate: float
    lll_rate: float
    plll_seconds: float
    lll_seconds: float

    def parity(self, tol: float = 1e-9) -> bool:
        return abs(self.plll_rate - self.lll_rate) <= tol


def compare_reductions(
    inst: IfCranInstance,
    config: Optional[SuccminConfig] = None,
    logger: Optional[RunLogger] = None,
) -> ReductionComparison:
    """Solve once with PLLL and once with LLL, recording rates and wall-clock."""
    config = config or SuccminConfig()
    rates: Dict[str, float] = {}
    seconds: Dict[str, float] = {}
    for kind in ("plll", "lll"):
        run_config = copy.copy(config)
        run_config.reduction = kind
        started = time.perf_counter()
        rates[kind] = solve_rate(inst, run_config, logger).sym_rate
        seconds[kind] = time.perf_counter() - started
    return ReductionComparison(rates["plll"], rates["lll"], seconds["plll"], seconds["lll"])

"""
Property suite over seeded random instances.

Each trial draws its instances from an independent PCG64 stream keyed by
``(seed, trial)``, so results do not depend on scheduling and trials may
run in worker processes. Only pass/violation counts are aggregated.
"""

import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from succmin.core.errors import RadiusOverflow
from succmin.core.linalg import FACT_TOL, cholesky, det, gram, rel_error, spd_inverse, woodbury_decompose
from succmin.lattice import bounds, monotonicity
from succmin.lattice.enumeration import solve_smp
from succmin.lattice.integer import is_unimodular
from succmin.lattice.reduction import DEFAULT_DELTA, is_size_reduced, lll_reduce, lovasz_holds, plll_reduce
from succmin.lattice.sampling import (
    make_rng,
    random_basis,
    random_full_column_rank,
    random_ordered_pair,
    random_psd_singular,
    random_spd,
)
from succmin.utils.logging import RunLogger, get_logger

BOUND_TOL = 1e-9
ORACLE_MATCH_TOL = 1e-12
BRUTE_FORCE_MAX_POINTS = 500_000


def brute_force_minima(r: np.ndarray, max_points: int = BRUTE_FORCE_MAX_POINTS) -> Optional[List[float]]:
    """
    Successive minima by scanning a box of integer vectors.

    Independent of the enumeration oracle: the radius is the largest
    column norm of ``r`` itself and the box half-widths come from the row
    norms of ``r^-1`` (|x_i| <= radius * ||e_i^T r^-1||). Returns None when
    the box would exceed ``max_points``.
    """
    n = r.shape[0]
    radius = float(np.max(np.linalg.norm(r, axis=0))) * (1.0 + 1e-9)
    widths = [int(math.floor(radius * w + 1e-9)) for w in np.linalg.norm(np.linalg.inv(r), axis=1)]
    if math.prod(2 * w + 1 for w in widths) > max_points:
        return None
    grids = np.meshgrid(*[np.arange(-w, w + 1, dtype=np.int64) for w in widths], indexing="ij")
    xs = np.stack([g.ravel() for g in grids], axis=1)
    norms = np.linalg.norm(xs @ r.T, axis=1)
    keep = (norms > 0) & (norms <= radius)
    order = sorted(zip(norms[keep].tolist(), map(tuple, xs[keep].tolist())))
    chosen: List[Tuple[int, ...]] = []
    values: List[float] = []
    for norm, x in order:
        if np.linalg.matrix_rank(np.array(chosen + [x], dtype=float)) > len(chosen):
            chosen.append(x)
            values.append(norm)
            if len(values) == n:
                break
    return values


@dataclass
class PropertyTally:
    checks: int = 0
    violations: int = 0
    skipped: int = 0

    def record(self, ok: bool) -> None:
        self.checks += 1
        if not ok:
            self.violations += 1

    def merge(self, other: "PropertyTally") -> None:
        self.checks += other.checks
        self.violations += other.violations
        self.skipped += other.skipped


class VerifyReportModel(BaseModel):
    """On-disk form of a VerifyReport."""

    trials: int
    dims: List[int]
    seed: int
    ok: bool
    properties: Dict[str, Dict[str, int]]
    config: Dict[str, object]


@dataclass
class VerifyReport:
    trials: int
    dims: Tuple[int, ...]
    seed: int
    tallies: Dict[str, PropertyTally] = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return sum(t.violations for t in self.tallies.values())

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def tally(self, name: str) -> PropertyTally:
        return self.tallies.setdefault(name, PropertyTally())

    def to_model(self, config: Dict[str, object]) -> VerifyReportModel:
        return VerifyReportModel(
            trials=self.trials,
            dims=list(self.dims),
            seed=self.seed,
            ok=self.ok,
            properties={
                name: {"checks": t.checks, "violations": t.violations, "skipped": t.skipped}
                for name, t in sorted(self.tallies.items())
            },
            config=config,
        )


def _le(a: float, b: float, tol: float = BOUND_TOL) -> bool:
    return a <= b + tol * max(abs(a), abs(b))


def _rel_close(a: Sequence[float], b: Sequence[float], tol: float) -> bool:
    return all(abs(x - y) <= tol * max(abs(x), abs(y)) for x, y in zip(a, b))


# Per-trial properties: each takes (rng, n, tallies) and records outcomes.


def _oracle_cross_check(rng, n, tallies):
    n = min(n, 4)
    r = random_basis(rng, n)
    expected = brute_force_minima(r)
    if expected is None:
        tallies["oracle-cross-check"].skipped += 1
        return
    got = solve_smp(r).values
    tallies["oracle-cross-check"].record(_rel_close(got, expected, ORACLE_MATCH_TOL))


def _single_basis(rng, n, tallies):
    n = min(n, 6)
    r = random_basis(rng, n)
    result = solve_smp(r)
    vals = result.values
    w = result.witness_matrix()
    tallies["minima-chain"].record(
        all(a <= b for a, b in zip(vals, vals[1:]))
        and _rel_close(np.linalg.norm(r @ w, axis=0), vals, FACT_TOL)
        and np.linalg.matrix_rank(w.astype(float)) == n
    )
    tallies["diagonal-sandwich"].record(
        all(
            _le(lo, vals[i - 1]) and _le(vals[i - 1], hi)
            for i in range(1, n + 1)
            for lo, hi in [bounds.prop1_bounds(r, i)]
        )
    )
    tallies["determinant-bound"].record(_le(bounds.remark3_lower(r), vals[-1]))
    tallies["product-bound"].record(bounds.product_bound_holds(vals, r))
    delta = DEFAULT_DELTA
    first = float(np.linalg.norm(lll_reduce(r, delta).r[:, 0]))
    factor = (1.0 / (delta - 0.25)) ** ((n - 1) / 2.0)
    tallies["lll-quality"].record(_le(first, factor * vals[0]))


def _additive_bounds(rng, n, tallies):
    n = min(n, 5)
    g1, g2 = random_spd(rng, n), random_spd(rng, n)
    m1 = solve_smp(cholesky(g1)).values
    m2 = solve_smp(cholesky(g2)).values
    m3 = solve_smp(cholesky(g1 + g2)).values
    ok_t1, ok_c3 = True, True
    for i in range(1, n + 1):
        t1 = bounds.thm1_lower(g1, g2, i, m1[0], m2[0], m1[i - 1], m2[i - 1])
        c3 = bounds.cor3_lower(g1, g2, i)
        ok_t1 &= _le(t1, m3[i - 1])
        ok_c3 &= _le(c3, t1) and _le(c3, m3[i - 1])
    tallies["additive-bound"].record(ok_t1)
    tallies["weakened-additive-bound"].record(ok_c3)


def _inverse_bounds(rng, n, tallies):
    n = min(n, 4)
    g1, g2 = random_spd(rng, n), random_spd(rng, n)
    s, t = woodbury_decompose(g1, g2)
    tallies["woodbury-reconstruction"].record(rel_error(s + t, spd_inverse(g1)) <= FACT_TOL)
    for which, target in (("first", g1), ("second", g2)):
        lam = solve_smp(cholesky(spd_inverse(target))).values
        report = bounds.inverse_pair_lower_bounds(g1, g2, which)
        tallies["inverse-additive-bound"].record(all(_le(lo, v) for lo, v in zip(report.lower, lam)))


def _monotonicity_checks(rng, n, tallies):
    n = min(n, 4)
    g1, g2 = random_ordered_pair(rng, n)
    tallies["monotonicity"].record(monotonicity.check_monotonicity(g1, g2).ok)
    tallies["inverse-gap-spd"].record(monotonicity.inverse_gap_is_spd(g1, g2))
    m = int(rng.integers(1, n + 1))
    g = random_psd_singular(rng, m) if m > 1 else np.zeros((1, 1))
    b = random_full_column_rank(rng, n, m)
    tallies["congruence-monotonicity"].record(monotonicity.check_cor2(g, b, g1, g2).ok)
    tallies["psd-shift-monotonicity"].record(
        all(monotonicity.check_remark1(random_spd(rng, n), random_psd_singular(rng, n, rank=1)))
    )


def _reduction_invariants(rng, n, tallies):
    r = random_basis(rng, n)
    g = gram(r)
    for reduced in (lll_reduce(r, DEFAULT_DELTA), plll_reduce(r, DEFAULT_DELTA)):
        z = reduced.z
        ok = is_unimodular(z)
        ok &= rel_error(gram(reduced.r), z.T @ g @ z) <= FACT_TOL
        ok &= is_size_reduced(reduced.r) and lovasz_holds(reduced.r, DEFAULT_DELTA)
        ok &= abs(abs(det(reduced.r)) - abs(det(r))) <= FACT_TOL * abs(det(r))
        tallies["reduction-invariants"].record(bool(ok))


# Each per-trial function with the property names it records.
TRIAL_PROPERTIES: Tuple[Tuple[Callable, Tuple[str, ...]], ...] = (
    (_oracle_cross_check, ("oracle-cross-check",)),
    (
        _single_basis,
        ("minima-chain", "diagonal-sandwich", "determinant-bound", "product-bound", "lll-quality"),
    ),
    (_additive_bounds, ("additive-bound", "weakened-additive-bound")),
    (_inverse_bounds, ("woodbury-reconstruction", "inverse-additive-bound")),
    (
        _monotonicity_checks,
        ("monotonicity", "inverse-gap-spd", "congruence-monotonicity", "psd-shift-monotonicity"),
    ),
    (_reduction_invariants, ("reduction-invariants",)),
)


def run_trial(seed: int, trial: int, n: int) -> Dict[str, PropertyTally]:
    """Run every per-trial property once on dimension ``n``."""
    tallies: Dict[str, PropertyTally] = defaultdict(PropertyTally)
    for index, (prop, names) in enumerate(TRIAL_PROPERTIES):
        try:
            prop(make_rng(seed, trial, index), n, tallies)
        except RadiusOverflow:
            for name in names:
                tallies[name].skipped += 1
    return dict(tallies)


def run_fixtures(tallies: Dict[str, PropertyTally]) -> None:
    """Worked examples: counterexample exactness and the tightness families."""
    cx = monotonicity.counterexample_report()
    t = tallies.setdefault("generalization-counterexample", PropertyTally())
    t.record(
        _rel_close(
            (cx["lambda2_r1"], cx["lambda2_r2"], cx["lambda2_r3"]),
            (math.sqrt(3.0), math.sqrt(8.0), 3.0),
            FACT_TOL,
        )
        and {"direct", "inverse-first"} <= set(cx["failed"])
    )

    t = tallies.setdefault("additive-bound-tight", PropertyTally())
    for alphas, beta in (([1.0, 2.0, 5.0], 0.5), ([0.3, 0.3, 4.0, 7.5], 2.0)):
        g1, g2, expected = monotonicity.additive_tight_family(alphas, beta)
        oracle = solve_smp(cholesky(g1 + g2)).values
        m1 = solve_smp(cholesky(g1)).values
        m2 = solve_smp(cholesky(g2)).values
        thm = [bounds.thm1_lower(g1, g2, i, m1[0], m2[0], m1[i - 1], m2[i - 1]) for i in range(1, len(alphas) + 1)]
        t.record(_rel_close(thm, oracle, FACT_TOL) and _rel_close(oracle, expected, FACT_TOL))

    t = tallies.setdefault("inverse-bound-tight", PropertyTally())
    for alphas, beta in (([1.0, 2.0, 5.0], 6.0), ([0.5, 1.5, 1.5, 3.0], 3.5)):
        g1, g2, closed = monotonicity.inverse_tight_family(alphas, beta)
        for which, key in (("first", "r1"), ("second", "r2")):
            oracle = solve_smp(cholesky(spd_inverse(g1 if which == "first" else g2))).values
            lower = bounds.inverse_pair_lower_bounds(g1, g2, which).lower
            t.record(_rel_close(lower, oracle, FACT_TOL) and _rel_close(oracle, closed[key], FACT_TOL))

    t = tallies.setdefault("scaled-identity-equality", PropertyTally())
    for alpha, n in ((0.7, 3), (2.5, 5)):
        r = alpha * np.eye(n)
        vals = solve_smp(r).values
        t.record(
            all(
                _rel_close((lo, vals[i - 1], hi), (alpha,) * 3, FACT_TOL)
                for i in range(1, n + 1)
                for lo, hi in [bounds.prop1_bounds(r, i)]
            )
        )


def run_suite(
    trials: int,
    dims: Sequence[int],
    seed: int,
    workers: int = 1,
    logger: Optional[RunLogger] = None,
) -> VerifyReport:
    """
    Run the fixtures and ``trials`` random trials, cycling through ``dims``.

    Args:
        trials: Number of random trials (>= 1)
        dims: Dimensions to cycle through
        seed: Root seed
        workers: Worker processes (1 runs in-process)
        logger: Optional run logger

    Returns:
        VerifyReport with per-property counts
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not dims:
        raise ValueError("dims must not be empty")
    logger = logger or get_logger()
    report = VerifyReport(trials=trials, dims=tuple(dims), seed=seed)
    run_fixtures(report.tallies)

    jobs = [(seed, t, dims[t % len(dims)]) for t in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_trial, *zip(*jobs)))
    else:
        results = [run_trial(*job) for job in jobs]
    for result in results:
        for name, tally in result.items():
            report.tally(name).merge(tally)

    for name, tally in sorted(report.tallies.items()):
        logger.log_verification(name, tally.checks, tally.violations)
    return report

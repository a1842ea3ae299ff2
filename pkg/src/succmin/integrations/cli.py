"""Command-line front end: reduction, minima, bounds, verification and the IF C-RAN solver.

Exit codes: 0 success, 1 property violation, 2 usage or parse error,
3 numeric failure or infeasible instance.
"""

import argparse
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from succmin import __version__
from succmin.config import INITIALIZERS, LOG_BASES, REDUCTIONS, THRESHOLD_MODES, SuccminConfig
from succmin.core.errors import (
    CapacityTooSmall,
    ConfigError,
    DimensionMismatch,
    InvalidMatrix,
    ParseError,
    PreconditionViolated,
    SuccminError,
)
from succmin.core.linalg import cholesky, is_spd, triangularize
from succmin.core.matrix import as_upper_factor, dumps_json, load_matrix
from succmin.ifcran.instance import INSTANCE_MODES, IfCranInstance, dump_instance, generate_instance, load_instance
from succmin.ifcran.solver import solve_rate
from succmin.lattice.bounds import bounds_report, inverse_pair_lower_bounds, pair_lower_bounds
from succmin.lattice.enumeration import solve_smp
from succmin.lattice.properties import run_suite
from succmin.lattice.reduction import reduce_basis
from succmin.utils.logging import RunLogger

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

CSV_VERSION = "v1"
CSV_COLUMNS = ("param", "d_star", "rate", "iterations", "wallclock")
GRID_PARAMS = ("c", "p")
COMMANDS = ("reduce", "smp", "bounds", "verify", "ifcran", "gen")


class UsageError(ParseError):
    """Flags are individually valid but do not fit together."""


def parse_dims(text: str) -> List[int]:
    """'2..4' -> [2, 3, 4]; '3' -> [3]."""
    try:
        if ".." in text:
            lo, hi = (int(v) for v in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError as e:
        raise UsageError(f"--dims expects a..b, got {text!r}") from e
    if not 1 <= lo <= hi:
        raise UsageError(f"--dims range {text!r} is empty or non-positive")
    return list(range(lo, hi + 1))


def parse_grid(text: str) -> Tuple[str, List[float]]:
    """'c=0.5:2:4' -> ('c', [0.5, 1.0, 1.5, 2.0])."""
    try:
        param, spec = text.split("=", 1)
        lo, hi, steps = spec.split(":")
        lo_v, hi_v, n_steps = float(lo), float(hi), int(steps)
    except ValueError as e:
        raise UsageError(f"--grid expects param=lo:hi:steps, got {text!r}") from e
    if param not in GRID_PARAMS:
        raise UsageError(f"--grid parameter must be one of {GRID_PARAMS}, got {param!r}")
    if n_steps < 1:
        raise UsageError("--grid needs at least one step")
    if param == "c" and min(lo_v, hi_v) < 0:
        raise UsageError("--grid capacity range must be non-negative")
    if param == "p" and min(lo_v, hi_v) <= 0:
        raise UsageError("--grid power range must be positive")
    return param, [float(v) for v in np.linspace(lo_v, hi_v, n_steps)]


def parse_blocks(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError as e:
        raise UsageError(f"--blocks expects comma-separated sizes, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="succmin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--cmd", required=True, choices=COMMANDS)
    parser.add_argument("--in", dest="input", help="input matrix or instance JSON")
    parser.add_argument("--in2", dest="input2", help="second Gram matrix for pair bounds")
    parser.add_argument("--out", help="output path (stdout when omitted)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--log-base", choices=LOG_BASES)
    parser.add_argument("--threshold-mode", choices=THRESHOLD_MODES)
    parser.add_argument("--reduction", choices=REDUCTIONS)
    parser.add_argument("--initializer", choices=INITIALIZERS)
    parser.add_argument("--bisect-tol", type=float)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--dims", default="2..4")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--grid", help="sweep param=lo:hi:steps with param c or p")
    parser.add_argument("--timings", action="store_true", help="record wall-clock in CSV rows")
    parser.add_argument("--n", type=int, default=2, help="streams for generated instances")
    parser.add_argument("--blocks", default="2", help="comma-separated block sizes of B")
    parser.add_argument("--p", type=float, default=1.0)
    parser.add_argument("--c", type=float, default=1.0)
    parser.add_argument("--mode", choices=INSTANCE_MODES, default="plain")
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run_echo(args: argparse.Namespace, config: SuccminConfig) -> Dict[str, Any]:
    """Parsed flags and effective settings, echoed into every output file."""
    echo: Dict[str, Any] = {
        "command": args.cmd,
        "input": args.input,
        "input2": args.input2,
        "seed": args.seed,
        "trials": args.trials,
        "dims": args.dims,
        "workers": args.workers,
        "grid": args.grid,
        "timings": args.timings,
        "n": args.n,
        "blocks": args.blocks,
        "p": args.p,
        "c": args.c,
        "mode": args.mode,
    }
    echo.update(config.to_echo())
    return echo


def _emit_json(payload: Dict[str, Any], args: argparse.Namespace, config: SuccminConfig) -> None:
    payload.setdefault("config", run_echo(args, config))
    _emit(dumps_json(payload), args.out)


def _require_input(args: argparse.Namespace) -> str:
    if not args.input:
        raise UsageError(f"--cmd {args.cmd} needs --in")
    return args.input


def _load_basis(path: str) -> np.ndarray:
    """An upper-triangular factor as is, an SPD Gram via Cholesky, any other square basis via QR."""
    m = load_matrix(path)
    try:
        return as_upper_factor(m)
    except InvalidMatrix:
        pass
    if is_spd(m):
        return cholesky(m)
    return triangularize(m)


def cmd_reduce(args, config: SuccminConfig, logger: RunLogger) -> int:
    reduced = reduce_basis(_load_basis(_require_input(args)), config.reduction, config.delta, logger=logger)
    _emit_json(reduced.to_model(run_echo(args, config)).model_dump(), args, config)
    return EXIT_OK


def cmd_smp(args, config: SuccminConfig, logger: RunLogger) -> int:
    result = solve_smp(
        _load_basis(_require_input(args)),
        max_exact_dim=config.max_exact_dim,
        node_budget=config.node_budget,
        logger=logger,
    )
    _emit_json(result.to_model().model_dump(), args, config)
    return EXIT_OK


def cmd_bounds(args, config: SuccminConfig, logger: RunLogger) -> int:
    oracle = {"max_exact_dim": config.max_exact_dim, "node_budget": config.node_budget}
    if args.input2:
        g1, g2 = load_matrix(_require_input(args)), load_matrix(args.input2)
        payload = {
            "sum": pair_lower_bounds(g1, g2, **oracle).to_model().model_dump(),
            "inverse_first": inverse_pair_lower_bounds(g1, g2, "first", **oracle).to_model().model_dump(),
            "inverse_second": inverse_pair_lower_bounds(g1, g2, "second", **oracle).to_model().model_dump(),
        }
    else:
        payload = bounds_report(_load_basis(_require_input(args)), delta=config.delta).to_model().model_dump()
    _emit_json(payload, args, config)
    return EXIT_OK


def cmd_verify(args, config: SuccminConfig, logger: RunLogger) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    dims = parse_dims(args.dims)
    if dims[-1] > config.max_exact_dim:
        raise UsageError(f"--dims exceeds max_exact_dim={config.max_exact_dim}")
    report = run_suite(args.trials, dims, args.seed, workers=args.workers, logger=logger)
    _emit_json(report.to_model(run_echo(args, config)).model_dump(), args, config)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _generate(args) -> IfCranInstance:
    try:
        return generate_instance(args.n, parse_blocks(args.blocks), args.p, args.c, args.seed, args.mode)
    except (PreconditionViolated, DimensionMismatch) as e:
        raise UsageError(f"--n/--blocks/--p/--c: {e}") from e


def _instance(args) -> IfCranInstance:
    if args.input:
        return load_instance(args.input)
    return _generate(args)


def _sweep(inst: IfCranInstance, param: str, values: Sequence[float], args, config, logger) -> str:
    buf = io.StringIO()
    buf.write(f"# succmin-sweep {CSV_VERSION} columns={','.join(CSV_COLUMNS)}\n")
    buf.write(f"# config={json.dumps(run_echo(args, config), sort_keys=True, separators=(',', ':'))}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for value in values:
        point = inst.with_params(**{param: value})
        started = time.perf_counter()
        try:
            result = solve_rate(point, config, logger)
            row = [repr(value), repr(result.d_star), repr(result.sym_rate), str(result.iterations)]
        except CapacityTooSmall:
            row = [repr(value), "NA", "NA", "NA"]
        elapsed = time.perf_counter() - started
        row.append(f"{elapsed:.6f}" if args.timings else "NA")
        writer.writerow(row)
    return buf.getvalue()


def cmd_ifcran(args, config: SuccminConfig, logger: RunLogger) -> int:
    inst = _instance(args)
    if args.grid:
        param, values = parse_grid(args.grid)
        _emit(_sweep(inst, param, values, args, config, logger), args.out)
        return EXIT_OK
    result = solve_rate(inst, config, logger)
    _emit_json(result.to_model(run_echo(args, config)).model_dump(), args, config)
    return EXIT_OK


def cmd_gen(args, config: SuccminConfig, logger: RunLogger) -> int:
    inst = _generate(args)
    echo = run_echo(args, config)
    if args.out:
        dump_instance(inst, args.out, echo)
    else:
        _emit(dumps_json(inst.to_model(echo).model_dump()), None)
    return EXIT_OK


HANDLERS: Dict[str, Callable[..., int]] = {
    "reduce": cmd_reduce,
    "smp": cmd_smp,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "ifcran": cmd_ifcran,
    "gen": cmd_gen,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = SuccminConfig(
            delta=args.delta,
            log_base=args.log_base,
            threshold_mode=args.threshold_mode,
            reduction=args.reduction,
            initializer=args.initializer,
            bisect_tol=args.bisect_tol,
        )
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logger = RunLogger(log_dir=config.log_dir, log_level=getattr(logging, config.log_level))
    try:
        code = HANDLERS[args.cmd](args, config, logger)
    except (ParseError, ConfigError, OSError) as e:
        logger.log_command(args.cmd, False, str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityTooSmall as e:
        logger.log_command(args.cmd, False, str(e))
        print(f"infeasible: threshold tau={e.threshold:.6g}: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except SuccminError as e:
        logger.log_command(args.cmd, False, str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERIC

    logger.log_command(args.cmd, code == EXIT_OK)
    return code


if __name__ == "__main__":
    sys.exit(main())

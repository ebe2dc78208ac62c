"""Command-line front end: factor, sweep, phases, depth.

Outputs are deterministic for a fixed config: CSV files use a fixed
header and LF endings, JSON is dumped with sorted keys, and figures are
rendered next to the delimited files unless --no-plot is given. Exit
codes: 0 on success, 1 when the algorithm finds nothing (including a
prime input), 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .classical import feasible_a, trial_division
from .driver import VARIANTS, factor
from .experiments import (collect_phases, depth_report, mean_success,
                          phases_csv, run_sweep, sweep_csv, sweep_details)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

TIMING_LABEL = ("simulator wall clock on this host; "
                "not comparable to timings on physical quantum hardware")

# config-file keys mirror the long flags
_CONFIG_KEYS = {"variant", "reps", "seed", "shots", "out", "max-iter", "workers"}
_INT_KEYS = {"reps", "seed", "shots", "max-iter", "workers"}


def read_config(path: Path) -> dict:
    """key=value lines; blank lines and #-comments ignored."""
    values: dict = {}
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {line!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"unknown config key: {key!r}")
        values[key] = int(val) if key in _INT_KEYS else val
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shorsim",
        description="Integer factorization on a seeded statevector simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, variants=True):
        p.add_argument("--config", type=Path, default=None,
                       help="key=value file supplying flag defaults")
        p.add_argument("--seed", type=int, default=None, help="master seed")
        p.add_argument("--out", type=Path, default=None,
                       help="output directory (default: out)")
        p.add_argument("--no-plot", action="store_true",
                       help="skip figure rendering")
        if variants:
            p.add_argument("--variant", choices=("original", "reduced", "both"),
                           default=None)

    p = sub.add_parser("factor", help="factor one number")
    p.add_argument("N", type=int)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--first-a", type=int, default=None,
                   help="pin the base of the first iteration")
    common(p)

    p = sub.add_parser("sweep", help="success probability over feasible bases")
    p.add_argument("N", type=int, nargs="+")
    p.add_argument("--reps", type=int, default=None,
                   help="repetitions per (N, a) cell (default: 10)")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes for sweep cells")
    common(p)

    p = sub.add_parser("phases", help="histogram of measured phase integers")
    p.add_argument("N", type=int)
    p.add_argument("a", type=int)
    p.add_argument("--shots", type=int, default=None, help="default: 1024")
    common(p)

    p = sub.add_parser("depth", help="transpiled depth report")
    p.add_argument("N", type=int, nargs="+")
    common(p)
    return parser


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Config file fills flags left unset on the command line."""
    if getattr(args, "config", None) is None:
        return
    try:
        values = read_config(args.config)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    for key, val in values.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, Path(val) if key == "out" else val)


def _variants(args: argparse.Namespace) -> list[str]:
    v = args.variant or "reduced"
    return list(VARIANTS) if v == "both" else [v]


def _outdir(args: argparse.Namespace) -> Path:
    out = args.out or Path("out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dump_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cmd_factor(args, parser) -> int:
    if args.N < 3:
        parser.error("N must be at least 3")
    variants = _variants(args)
    if len(variants) != 1:
        parser.error("factor takes a single variant")
    variant = variants[0]
    seed = args.seed if args.seed is not None else 0
    max_iter = args.max_iter if args.max_iter is not None else 10

    t0 = time.perf_counter()
    td = trial_division(args.N)
    td_time = time.perf_counter() - t0
    t0 = time.perf_counter()
    result = factor(args.N, variant, max_iterations=max_iter, seed=seed,
                    first_a=args.first_a)
    sim_time = time.perf_counter() - t0

    payload = {
        "N": result.N,
        "variant": result.variant,
        "screen": result.screen.status,
        "status": result.outcome.status if result.outcome else "no-factor-found",
        "factors": sorted(result.factors),
        "iterations": [
            {"a": it.a, "succeeded": it.succeeded,
             "y": it.sample.y if it.sample else None,
             "order": it.order,
             "retry_reason": (it.outcome.retry_reason.value
                              if it.outcome.retry_reason else None)}
            for it in result.iterations
        ],
        "trial_division_factor": td,
        "timing": {"trial_division_s": td_time, "simulated_run_s": sim_time,
                   "label": TIMING_LABEL},
    }
    out = _outdir(args)
    _dump_json(out / f"factor_{args.N}_{variant}.json", payload)

    if result.screen.status == "prime":
        print(f"{args.N} is prime; nothing to do")
        return EXIT_FAILURE
    if result.succeeded:
        d = sorted(result.factors)
        print(f"{args.N} = " + " * ".join(str(x) for x in d)
              if len(d) == 2 else f"{args.N}: nontrivial divisor {d[0]}")
        print(f"screen: {result.screen.status}; "
              f"iterations used: {len(result.iterations)}")
    else:
        print(f"no factor of {args.N} found in {max_iter} iterations")
        for it in result.iterations:
            print(f"  a={it.a}: retry ({it.outcome.retry_reason.value})")
    print(f"trial division: {td_time * 1e3:.3f} ms; "
          f"simulated run: {sim_time * 1e3:.3f} ms ({TIMING_LABEL})")
    return EXIT_OK if result.succeeded else EXIT_FAILURE


def cmd_sweep(args, parser) -> int:
    for N in args.N:
        if N < 3:
            parser.error("every N must be at least 3")
        if not feasible_a(N):
            parser.error(f"N={N} has no feasible bases")
    variants = _variants(args)
    reps = args.reps if args.reps is not None else 10
    seed = args.seed if args.seed is not None else 0
    cells = run_sweep(args.N, variants, reps, seed, workers=args.workers)
    out = _outdir(args)
    (out / "sweep.csv").write_text(sweep_csv(cells))
    _dump_json(out / "sweep_details.json", sweep_details(cells, reps, seed))
    if not args.no_plot:
        from .plotting import render_sweep
        render_sweep(cells, out / "sweep.png")
    for N in sorted(set(args.N)):
        for v in variants:
            print(f"N={N} {v}: mean success {mean_success(cells, N, v):.3f}")
    print(f"wrote {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_phases(args, parser) -> int:
    from math import gcd
    if not 1 < args.a < args.N:
        parser.error("a must satisfy 1 < a < N")
    if gcd(args.a, args.N) != 1:
        parser.error(f"gcd({args.a}, {args.N}) != 1")
    shots = args.shots if args.shots is not None else 1024
    seed = args.seed if args.seed is not None else 0
    out = _outdir(args)
    for variant in _variants(args):
        hist = collect_phases(args.N, args.a, variant, shots, seed)
        stem = f"phases_{args.N}_{args.a}_{variant}"
        (out / f"{stem}.csv").write_text(phases_csv(hist))
        if not args.no_plot:
            from .plotting import render_phases
            render_phases(hist, out / f"{stem}.png")
        top = hist.sorted_rows()[0]
        print(f"{variant}: {len(hist.counts)} distinct y over {shots} shots; "
              f"top y={top[0]} ({top[1]} counts)")
    return EXIT_OK


def cmd_depth(args, parser) -> int:
    for N in args.N:
        if N < 3 or not feasible_a(N):
            parser.error(f"N={N} has no feasible bases")
    variants = _variants(args)
    reports = [depth_report(N, v) for N in sorted(set(args.N)) for v in variants]
    out = _outdir(args)
    _dump_json(out / "depth.json", [r.to_dict() for r in reports])
    if not args.no_plot:
        from .plotting import render_depth
        render_depth(reports, out / "depth.png")
    for r in reports:
        print(f"n={r.n} {r.variant}: max depth {r.max_depth}, "
              f"total {r.total_depth}, model {r.model_value}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, parser)
    handlers = {"factor": cmd_factor, "sweep": cmd_sweep,
                "phases": cmd_phases, "depth": cmd_depth}
    return handlers[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())

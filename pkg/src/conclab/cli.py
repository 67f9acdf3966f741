"""Command line interface.

    conclab tube|free-group|folner|hamming|fibre|report
            [--config FILE] [--seed N] [--svg] [--out DIR] ...

Each subcommand merges defaults, the optional JSON config, and flags
(flags win), runs its experiment deterministically, and writes
``<out>/<experiment>.csv``.  With ``--svg`` (always on for ``report``)
matplotlib figures are rendered next to the CSV.  Exit codes: 0 success,
2 usage or configuration error, 3 internal numerical non-convergence.
"""

import argparse
import json
import sys
from pathlib import Path

from .betainc import NonConvergenceError
from .experiments import (
    ConfigError,
    EXPERIMENTS,
    default_config,
    load_config,
    render_csv,
    run_experiment,
)
from .groups import FolnerUnavailableError

USAGE_ERROR = 2
NUMERICAL_ERROR = 3


def _add_common(parser):
    parser.add_argument("--config", type=Path, help="JSON configuration file")
    parser.add_argument("--seed", type=int, help="base seed for all sample streams")
    parser.add_argument("--out", type=str, help="output directory")
    parser.add_argument("--svg", action="store_true", default=None, help="render SVG figures")
    parser.add_argument("--workers", type=int, help="parallel workers for grid points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conclab",
        description="concentration-of-measure and amenability experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tube", help="exact vs Monte Carlo tube measures and bounds")
    _add_common(p)
    p.add_argument("--samples", type=int, help="Monte Carlo samples per grid point")

    p = sub.add_parser("free-group", help="prefix-partition cover verification")
    _add_common(p)
    p.add_argument("--samples", type=int, help="sampled vectors per branch")
    p.add_argument("--ball-radius", dest="ball_radius", type=int, help="word ball radius")
    p.add_argument("--convention", choices=["paper", "inverse"], help="action convention")
    p.add_argument("--index-range", dest="index_range", type=int, help="test classes W_-1..W_-k")

    p = sub.add_parser("folner", help="Folner chain boundary ratios")
    _add_common(p)
    p.add_argument("--length", type=int, help="chain length")
    p.add_argument("--group", type=str, help='group spec JSON, e.g. {"kind":"lattice","dim":2}')

    p = sub.add_parser("hamming", help="permutation metric counterexample table")
    _add_common(p)
    p.add_argument("--max-n", dest="max_n", type=int, help="largest even n")

    p = sub.add_parser("fibre", help="neighborhood measure vs product bound")
    _add_common(p)
    p.add_argument("--samples", type=int, help="Monte Carlo samples per grid point")

    p = sub.add_parser("report", help="run every experiment with defaults, with figures")
    _add_common(p)
    p.add_argument("--samples", type=int, help="Monte Carlo samples where applicable")
    return parser


def _overrides_from_args(args) -> dict:
    skip = {"command", "config"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def _run_one(experiment: str, cfg: dict, force_figures: bool = False) -> Path:
    from .plots import render_figures  # deferred: matplotlib import is slow

    table = run_experiment(experiment, cfg)
    outdir = Path(cfg["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"{table.name}.csv"
    csv_path.write_text(render_csv(table, cfg), encoding="utf-8")
    written = [csv_path]
    if cfg.get("svg") or force_figures:
        written.extend(render_figures(table, outdir))
    for path in written:
        print(path)
    return csv_path


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_cfg = {}
        if getattr(args, "config", None):
            file_cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        overrides = _overrides_from_args(args)
        if "group" in overrides and isinstance(overrides["group"], str):
            overrides["group"] = json.loads(overrides["group"])
        if args.command == "report":
            bare = {
                k: v
                for k, v in overrides.items()
                if k in ("seed", "out", "svg", "workers", "samples")
            }
            for experiment in EXPERIMENTS:
                allowed = {k: v for k, v in bare.items() if k in default_config(experiment)}
                cfg = load_config(
                    experiment,
                    file_cfg if file_cfg.get("experiment") == experiment else None,
                    allowed,
                )
                _run_one(experiment, cfg, force_figures=True)
            return 0
        cfg = load_config(args.command, file_cfg, overrides)
        _run_one(args.command, cfg)
        return 0
    except (ConfigError, FolnerUnavailableError, json.JSONDecodeError, OSError) as exc:
        print(f"conclab: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except NonConvergenceError as exc:
        print(f"conclab: numerical non-convergence: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())

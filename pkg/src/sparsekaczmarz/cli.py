"""Command-line experiment harness.

Subcommands: ``solve`` (single run), ``sweep-lambda``, ``sweep-beta``,
``compare``, ``real``. Each reads an optional JSON config file and applies
flag overrides on top. Exit codes: 0 success, 2 configuration error, 3 data
error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import (
    ConfigError,
    ParseError,
    UnsupportedFieldError,
    ZeroRowError,
)
from .harness import (
    ExperimentConfig,
    compare_methods,
    load_config,
    real_matrix_bench,
    solve_single,
    sweep_beta,
    sweep_lambda,
)

EXIT_CONFIG_ERROR = 2
EXIT_DATA_ERROR = 3


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--seed", type=int, dest="seed", help="master seed override")
    sub.add_argument("--trials", type=int, help="trials per cell override")
    sub.add_argument("--out", dest="out", help="output directory override")
    sub.add_argument("--method", choices=("rk", "srk", "sskm"), help="method override")
    sub.add_argument("--step", choices=("exact", "inexact"), help="step mode override")
    sub.add_argument("--lambda", type=float, dest="lam", help="regularization weight override")
    sub.add_argument("--beta", help="subset size: an integer or one of m, m/2, m/4")
    sub.add_argument("--noise", type=float, help="relative noise level override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsekaczmarz",
        description="Row-action solvers for sparse solutions of linear systems",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name, descr in (
        ("solve", "single seeded run with a full iteration trace"),
        ("sweep-lambda", "best regularization weight per (m, k) cell"),
        ("sweep-beta", "final error across subset sizes and step modes"),
        ("compare", "method comparison grids and convergence curves"),
        ("real", "benchmark methods on Matrix Market files"),
    ):
        sub = commands.add_parser(name, help=descr)
        _add_common(sub)
        if name == "real":
            sub.add_argument("paths", nargs="+", help="Matrix Market files")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    updates = {}
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.out is not None:
        updates["out_dir"] = args.out
    if args.method is not None:
        updates["methods"] = (args.method,)
    if args.step is not None:
        updates["step_mode"] = args.step
    if args.lam is not None:
        updates["lam"] = args.lam
    if args.beta is not None:
        updates["beta"] = args.beta
    if args.noise is not None:
        updates["noise_level"] = args.noise
    if updates:
        config = dataclasses.replace(config, **updates)
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "solve":
            out = solve_single(config, method=args.method)
            result = out["result"]
            status = "converged" if result.converged else "max-iters"
            print(
                f"{out['experiment_id']}: {status} after {result.iterations} iterations, "
                f"final MSE {result.final_mse:.3e}; trace at {out['path']}"
            )
        elif args.command == "sweep-lambda":
            out = sweep_lambda(config)
            print(f"lambda sweep written to {out['path']}")
        elif args.command == "sweep-beta":
            out = sweep_beta(config)
            print(f"beta sweep written to {out['path']}")
        elif args.command == "compare":
            out = compare_methods(config)
            for label, path in out["paths"].items():
                print(f"{label}: {path}")
        elif args.command == "real":
            out = real_matrix_bench(args.paths, config)
            print(f"real-matrix benchmark written to {out['path']}")
            for path, exc in out["errors"].items():
                print(f"skipped {path}: {exc}", file=sys.stderr)
            if out["errors"] and not out["rows"]:
                return EXIT_DATA_ERROR
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (ParseError, UnsupportedFieldError, ZeroRowError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line experiment runner.

Subcommands: ``run`` executes a JSON experiment configuration and writes
results.csv, per-run grid CSVs and summary.json; ``list-problems`` prints the
available benchmark problems; ``validate`` checks a configuration without
running it.  Exit codes: 0 success, 1 configuration error, 2 numerical
failure in at least one run.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .experiment import ConfigError, load_config, run_experiment
from .problems import PROBLEM_BUILDERS


def _parse_seed_list(text: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"--seeds must be a comma-separated integer list: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bpielm",
        description="Solve PDE benchmarks with Bayesian and pseudoinverse "
                    "physics-informed extreme learning machines.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment configuration")
    run_p.add_argument("--config", required=True, help="JSON config file")
    run_p.add_argument("--output-dir", default=None,
                       help="override the config's output directory")
    run_p.add_argument("--seeds", default=None,
                       help="comma-separated seed list override")

    sub.add_parser("list-problems", help="list available benchmark problems")

    val_p = sub.add_parser("validate", help="validate a configuration file")
    val_p.add_argument("--config", required=True, help="JSON config file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "list-problems":
        for name in sorted(PROBLEM_BUILDERS):
            doc = (PROBLEM_BUILDERS[name].__doc__ or "").strip().splitlines()
            print(f"{name}: {doc[0] if doc else ''}")
        return 0

    try:
        if args.command == "validate":
            config = load_config(args.config)
            print(f"config ok: problem={config.problem} method={config.method} "
                  f"seeds={len(config.seeds)}")
            return 0
        seeds = _parse_seed_list(args.seeds) if args.seeds else None
        config = load_config(args.config, output_dir=args.output_dir, seeds=seeds)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        result = run_experiment(config)
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 1

    print(f"wrote {result.output_dir / 'results.csv'} "
          f"({len(result.records)} runs, {result.n_failed} failed)")
    if result.n_failed:
        for record in result.records:
            if record.status != "ok":
                print(f"run failed: method={record.method} seed={record.seed} "
                      f"{record.error}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

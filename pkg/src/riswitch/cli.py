"""Command-line entry point.

    riswitch run <config> [--out PATH] [--seed N] [--threads N] [--timing]
    riswitch validate <config>
    riswitch summarize <results> --group-by cols --metric col

Exit codes: 0 success, 2 validation error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import sys

from .errors import ConfigError
from .harness import format_summary, load_config, run_experiment, summarize, validate_config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riswitch")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a Monte-Carlo sweep")
    p_run.add_argument("config")
    p_run.add_argument("--out", help="results CSV path (overrides config output)")
    p_run.add_argument("--seed", type=int, help="override the master seed")
    p_run.add_argument("--threads", type=int, default=1)
    p_run.add_argument("--timing", action="store_true",
                       help="record wall_ms (breaks byte-reproducibility of the CSV)")

    p_val = sub.add_parser("validate", help="check a config without running")
    p_val.add_argument("config")

    p_sum = sub.add_parser("summarize", help="aggregate a results CSV")
    p_sum.add_argument("results")
    p_sum.add_argument("--group-by", required=True,
                       help="comma-separated column names")
    p_sum.add_argument("--metric", required=True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            raw = load_config(args.config)
            if args.seed is not None:
                raw["seed"] = args.seed
            cfg = validate_config(raw)
            records = run_experiment(cfg, out_path=args.out,
                                     threads=args.threads, timing=args.timing)
            out = args.out or cfg.output
            print(f"wrote {len(records)} rows to {out}")
        elif args.command == "validate":
            validate_config(load_config(args.config))
            print("config ok")
        elif args.command == "summarize":
            group_by = [c.strip() for c in args.group_by.split(",") if c.strip()]
            rows = summarize(args.results, group_by, args.metric)
            print(format_summary(rows, group_by, args.metric))
    except ConfigError as e:
        for msg in e.errors:
            print(f"error: {msg}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Run the shipped default scenario (configs/default.yaml)."""
import argparse
import pathlib
import sys

from riswitch.harness import load_config, run_experiment, validate_config

ROOT = pathlib.Path(__file__).resolve().parents[1]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results.csv")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--timing", action="store_true")
    args = ap.parse_args()

    raw = load_config(str(ROOT / "configs" / "default.yaml"))
    if args.seed is not None:
        raw["seed"] = args.seed
    cfg = validate_config(raw)
    records = run_experiment(cfg, out_path=args.out, timing=args.timing)
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Regenerate the 40-row sample CSV committed for the plotting package
(plots/tests/data/sample_results.csv). Deterministic given the seed."""
import pathlib
import sys

from riswitch.harness import run_experiment, validate_config

OUT = pathlib.Path(__file__).resolve().parents[1] / "plots" / "tests" / "data" / "sample_results.csv"

CONFIG = {
    "seed": 424242,
    "trials": 5,
    "objective": "sum_rate",
    "output": str(OUT),
    "M": 4,
    "K": 2,
    "cell": [2, 1],
    "kappa": 4.0,
    "c0_db": -30.0,
    "alpha1": 2.2,
    "alpha2": 2.8,
    "wavelength": 0.1,
    "tx_ris_distances": [30.0, 40.0],
    "ris_rx_distances": [20.0, 25.0],
    "power_dbm": 20.0,
    "noise_dbm": -100.0,
    "sweep": {"M": [4, 8]},
    "architectures": [
        {"kind": "sris", "methods": ["exhaustive", "greedy_flip"]},
        {"kind": "iris", "methods": ["exhaustive", "block_coordinate"]},
    ],
}


def main() -> int:
    OUT.parent.mkdir(parents=True, exist_ok=True)
    records = run_experiment(validate_config(CONFIG), out_path=str(OUT))
    print(f"wrote {len(records)} rows to {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

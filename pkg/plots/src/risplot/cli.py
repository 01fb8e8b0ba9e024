"""Figure CLI over harness result CSVs.

    plot sweep --in results.csv --x M --metric obj_true --series arch --out fig.png
    plot cdf   --in results.csv --metric sinrs --series arch --out fig.png
"""
from __future__ import annotations

import argparse
import sys

from .figures import PlotSpec, plot_sinr_cdf, plot_sweep


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plot")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_x):
        p.add_argument("--in", dest="input", required=True, help="results CSV")
        if with_x:
            p.add_argument("--x", required=True, help="x-axis column")
        p.add_argument("--metric", default=None)
        p.add_argument("--series", default="arch")
        p.add_argument("--out", required=True, help="output image path")
        p.add_argument("--logx", action="store_true")
        p.add_argument("--logy", action="store_true")

    common(sub.add_parser("sweep", help="mean vs. sweep axis with error bars"), True)
    common(sub.add_parser("cdf", help="empirical CDF of pooled values"), False)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            spec = PlotSpec(input_csv=args.input, x=args.x,
                            metric=args.metric or "obj_true",
                            series=args.series, out=args.out,
                            logx=args.logx, logy=args.logy)
            series = plot_sweep(spec)
        else:
            spec = PlotSpec(input_csv=args.input,
                            metric=args.metric or "sinrs",
                            series=args.series, out=args.out, logx=args.logx)
            series = plot_sinr_cdf(spec)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {args.out} ({len(series)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Figure rendering over harness result CSVs.

Consumes the results file only and recomputes every statistic it shows
from the raw rows, so anything on a figure can be checked against the
CSV by hand. Refusal rows (empty metric fields) are dropped.
"""
from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


@dataclass
class PlotSpec:
    input_csv: str
    metric: str
    series: str
    out: str
    x: str | None = None
    logx: bool = False
    logy: bool = False


def _load(spec: PlotSpec, needed: list[str]) -> pd.DataFrame:
    df = pd.read_csv(spec.input_csv)
    for col in needed:
        if col not in df.columns:
            raise ValueError(f"missing column: {col!r}")
    return df


def ecdf(values) -> tuple[np.ndarray, np.ndarray]:
    """Empirical CDF support points: n steps of height 1/n at the sorted values."""
    x = np.sort(np.asarray(values, dtype=float))
    if x.size == 0:
        raise ValueError("empty selection: no values to build a CDF from")
    y = np.arange(1, x.size + 1) / x.size
    return x, y


def _pooled_values(column: pd.Series) -> list[float]:
    """Flatten a metric column; semicolon-joined fields (e.g. per-user SINRs)
    contribute every entry."""
    out: list[float] = []
    for cell in column.dropna():
        for part in str(cell).split(";"):
            if part:
                out.append(float(part))
    return out


def plot_sweep(spec: PlotSpec) -> dict:
    """Mean metric vs. the x column, one error-bar line per series value.

    Returns {series label: (x, mean, std)} with the std recomputed from
    the raw rows (population std; a single-row point gets a zero bar).
    """
    if spec.x is None:
        raise ValueError("sweep plot needs an --x column")
    df = _load(spec, [spec.x, spec.metric, spec.series])
    df = df[df[spec.metric].notna()]
    if df.empty:
        raise ValueError("empty selection: no usable rows")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    series: dict = {}
    for label, grp in df.groupby(spec.series, sort=True):
        agg = (grp.groupby(spec.x)[spec.metric]
               .agg(mean="mean", std=lambda v: float(np.std(v)))
               .reset_index().sort_values(spec.x))
        ax.errorbar(agg[spec.x], agg["mean"], yerr=agg["std"],
                    marker="o", capsize=3, label=str(label))
        series[str(label)] = (agg[spec.x].to_numpy(), agg["mean"].to_numpy(),
                              agg["std"].to_numpy())
    if spec.logx:
        ax.set_xscale("log")
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel(spec.x)
    ax.set_ylabel(spec.metric)
    ax.grid(True, alpha=0.3)
    ax.legend(title=spec.series)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=150)
    plt.close(fig)
    return series


def plot_sinr_cdf(spec: PlotSpec) -> dict:
    """Empirical CDF of the pooled metric values per series.

    Per-user columns (semicolon-joined, like sinrs) are pooled across
    rows and users. Returns {series label: (x, y)} as drawn: y starts at
    0 below the smallest sample and ends at 1.
    """
    df = _load(spec, [spec.metric, spec.series])
    df = df[df[spec.metric].notna()]
    if df.empty:
        raise ValueError("empty selection: no usable rows")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    series: dict = {}
    for label, grp in df.groupby(spec.series, sort=True):
        x, y = ecdf(_pooled_values(grp[spec.metric]))
        x_drawn = np.concatenate(([x[0]], x))
        y_drawn = np.concatenate(([0.0], y))
        ax.step(x_drawn, y_drawn, where="post", label=str(label))
        series[str(label)] = (x_drawn, y_drawn)
    if spec.logx:
        ax.set_xscale("log")
    ax.set_xlabel(spec.metric)
    ax.set_ylabel("empirical CDF")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend(title=spec.series)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=150)
    plt.close(fig)
    return series

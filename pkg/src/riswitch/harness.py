"""Monte-Carlo experiment harness: config, sweeps, CSV results, summaries.

Configs are YAML (JSON files parse too, YAML being a superset). Schema:

    seed: 20240801            # master seed (required)
    trials: 10                # trials per sweep point (required)
    objective: sum_rate       # sum_rate | min_rate | min_sinr
    output: results.csv       # default output path; CLI --out overrides

    M: 8                      # RIS elements
    K: 2                      # transmitter-receiver pairs
    cell: [2, 2]              # I-RIS cell shape; required if an iris arch is listed
    kappa: 4.0                # Rician factor (>= 0; .inf = pure line of sight)
    c0_db: -30.0              # reference path gain at 1 m, dB
    alpha1: 2.2               # Tx->RIS path-loss exponent
    alpha2: 2.8               # RIS->Rx path-loss exponent
    wavelength: 0.1           # carrier wavelength, meters
    tx_ris_distances: 30.0    # scalar, or list with >= K entries (first K used)
    ris_rx_distances: [20.0, 25.0]
    power_dbm: 20.0           # scalar or per-user list, dBm
    noise_dbm: -100.0         # receiver noise power, dBm

    csi_noise:                # optional; disabled by default
      enabled: true
      p_db: 20.0              # estimation SNR, dB

    sweep:                    # optional Cartesian product; axis order is
      M: [4, 8]               # M, K, cell, kappa, csi_p_db, power_dbm
      kappa: [0.0, 4.0]

    architectures:            # run in listed order at every point
      - kind: sris
        methods: [exhaustive, greedy_flip]
      - kind: iris            # uses the point's cell shape
        methods: [block_coordinate]
      - kind: phase_shifter
        bits: 1
        methods: [simulated_annealing]

    search:                   # optional; applies to every search
      max_evaluations: null
      max_iterations: null
      exhaustive_cap: 4194304
      annealing: {t0: 1.0, cooling: 0.95, moves_per_temperature: 10, floor: 1.0e-4}

All dB values are converted to linear at this boundary; everything
downstream is linear. Every sweep point is validated before any trial
runs, and violations are reported together with their field paths.

One channel realization is drawn per (point, trial) and shared by every
architecture and method at that trial, so cross-architecture comparisons
are paired; the realization digest is recorded in the truth_hash column
for auditing. Output is byte-identical for a given (config, seed): the
wall_ms column is left empty unless timing is explicitly enabled, since
measured times would break reproducibility.
"""
from __future__ import annotations

import csv
import hashlib
import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import yaml

from .channel import (STREAM_OPTIMIZER, CsiNoiseParams, FadingParams,
                      NetworkGeometry, sample_network_realization)
from .errors import ConfigError, SearchSpaceError
from .metrics import OBJECTIVES, LinkBudget, sinr_all
from .optimize import (EXHAUSTIVE_CAP_DEFAULT, METHODS, AnnealingParams,
                       Architecture, SearchBudget, SearchSpec, run_search)
from .ris import CELL_ENUM_CAP_BITS, CellShape, pattern_to_string

CSV_COLUMNS = [
    "point_id", "M", "K", "c", "d", "kappa", "csi_p_db", "sigma2", "powers",
    "trial", "seed", "arch", "method", "objective", "obj_est", "obj_true",
    "sinrs", "pattern", "evaluations", "wall_ms", "truth_hash", "refused",
]

SWEEP_AXES = ("M", "K", "cell", "kappa", "csi_p_db", "power_dbm")


def _db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class ArchConfig:
    kind: str
    methods: tuple[str, ...]
    bits: int | None = None


@dataclass
class ExperimentConfig:
    seed: int
    trials: int
    objective: str
    output: str
    base: dict
    sweep: dict
    architectures: list[ArchConfig]
    budget: SearchBudget
    annealing: AnnealingParams
    exhaustive_cap: int
    points: list = field(default_factory=list)  # resolved by validate_config


@dataclass
class Point:
    """One fully resolved sweep point (all values linear)."""

    point_id: int
    M: int
    K: int
    cell: CellShape | None
    kappa: float
    csi_p_db: float | None
    geom: NetworkGeometry
    fading: FadingParams
    noise: CsiNoiseParams
    link: LinkBudget


@dataclass
class ResultRecord:
    point: Point
    trial: int
    seed: int
    arch: str
    method: str
    objective: str
    obj_est: float | None
    obj_true: float | None
    sinrs: tuple | None
    pattern: str | None
    evaluations: int | None
    wall_ms: float | None
    truth_hash: str
    refused: bool

    def to_row(self) -> list[str]:
        p = self.point
        return [
            str(p.point_id),
            str(p.M),
            str(p.K),
            str(p.cell.c) if p.cell else "",
            str(p.cell.d) if p.cell else "",
            _fmt(p.kappa),
            _fmt(p.csi_p_db) if p.csi_p_db is not None else "",
            _fmt(p.link.noise_power),
            ";".join(_fmt(v) for v in p.link.powers),
            str(self.trial),
            str(self.seed),
            self.arch,
            self.method,
            self.objective,
            _fmt(self.obj_est) if self.obj_est is not None else "",
            _fmt(self.obj_true) if self.obj_true is not None else "",
            ";".join(_fmt(v) for v in self.sinrs) if self.sinrs is not None else "",
            self.pattern if self.pattern is not None else "",
            str(self.evaluations) if self.evaluations is not None else "",
            _fmt(self.wall_ms) if self.wall_ms is not None else "",
            self.truth_hash,
            "1" if self.refused else "0",
        ]


# ---------------------------------------------------------------------------
# config loading and validation
# ---------------------------------------------------------------------------

def load_config(path: str) -> dict:
    """Parse a YAML (or JSON) config file into a raw dict."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a mapping")
    return raw


def _want(raw, key, kinds, errs, required=True, default=None):
    if key not in raw:
        if required:
            errs.append(f"{key}: required key missing")
        return default
    v = raw[key]
    if not isinstance(v, kinds) or isinstance(v, bool) and bool not in (
            kinds if isinstance(kinds, tuple) else (kinds,)):
        errs.append(f"{key}: expected {kinds}, got {type(v).__name__}")
        return default
    return v


def _scalar_or_list(raw, key, k, errs) -> list[float] | None:
    """Accept a scalar (broadcast to K users) or a list with >= K entries."""
    v = raw.get(key)
    if v is None:
        errs.append(f"{key}: required key missing")
        return None
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return [float(v)] * k
    if isinstance(v, list) and all(isinstance(x, (int, float)) for x in v):
        if len(v) < k:
            errs.append(f"{key}: has {len(v)} entries but K={k} users are configured")
            return None
        return [float(x) for x in v[:k]]
    errs.append(f"{key}: expected a number or list of numbers")
    return None


def _parse_architectures(raw, errs) -> list[ArchConfig]:
    archs = raw.get("architectures")
    if not isinstance(archs, list) or not archs:
        errs.append("architectures: must be a non-empty list")
        return []
    out = []
    for i, a in enumerate(archs):
        path = f"architectures[{i}]"
        if not isinstance(a, dict):
            errs.append(f"{path}: must be a mapping")
            continue
        kind = a.get("kind")
        if kind not in ("sris", "iris", "phase_shifter"):
            errs.append(f"{path}.kind: must be sris, iris or phase_shifter")
            continue
        methods = a.get("methods")
        if not isinstance(methods, list) or not methods:
            errs.append(f"{path}.methods: must be a non-empty list")
            continue
        for m in methods:
            if m not in METHODS:
                errs.append(f"{path}.methods: unknown method {m!r}")
            elif m == "block_coordinate" and kind != "iris":
                errs.append(f"{path}.methods: block_coordinate requires kind iris")
        bits = a.get("bits")
        if kind == "phase_shifter":
            if not isinstance(bits, int) or isinstance(bits, bool) or bits < 1:
                errs.append(f"{path}.bits: phase_shifter needs an integer bits >= 1")
        out.append(ArchConfig(kind=kind, methods=tuple(methods), bits=bits))
    return out


def _parse_cell(value, path, errs) -> CellShape | None:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in value)):
        errs.append(f"{path}: cell must be a [c, d] pair of positive integers")
        return None
    return CellShape(value[0], value[1])


def _resolve_point(point_id: int, vals: dict, raw: dict, archs: list[ArchConfig],
                   errs: list) -> Point | None:
    where = f"sweep point {point_id} ({', '.join(f'{k}={v}' for k, v in vals.items())})" \
        if vals else "base config"
    perrs: list[str] = []
    m = vals.get("M", raw.get("M"))
    k = vals.get("K", raw.get("K"))
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        perrs.append("M: must be a positive integer")
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        perrs.append("K: must be a positive integer")
    if perrs:
        errs.extend(f"{where}: {e}" for e in perrs)
        return None

    cell_raw = vals.get("cell", raw.get("cell"))
    cell = None
    need_cell = any(a.kind == "iris" for a in archs)
    if cell_raw is not None:
        cell = _parse_cell(cell_raw, "cell", perrs)
    elif need_cell:
        perrs.append("cell: required because an iris architecture is configured")
    if cell is not None and need_cell:
        if m % cell.area != 0:
            perrs.append(f"M: {m} not divisible by cell area cd={cell.area}")
        if cell.area ** 2 > CELL_ENUM_CAP_BITS:
            perrs.append(
                f"cell: per-cell enumeration needs {cell.area ** 2} bits, cap is {CELL_ENUM_CAP_BITS}")

    kappa = vals.get("kappa", raw.get("kappa"))
    if not isinstance(kappa, (int, float)) or isinstance(kappa, bool) or (
            isinstance(kappa, float) and math.isnan(kappa)) or kappa < 0:
        perrs.append("kappa: must be a number >= 0")
        kappa = 0.0

    for key in ("c0_db", "alpha1", "alpha2", "wavelength", "noise_dbm"):
        if not isinstance(raw.get(key), (int, float)) or isinstance(raw.get(key), bool):
            perrs.append(f"{key}: must be a number")
    if isinstance(raw.get("alpha1"), (int, float)) and raw["alpha1"] < 0:
        perrs.append("alpha1: must be >= 0")
    if isinstance(raw.get("alpha2"), (int, float)) and raw["alpha2"] < 0:
        perrs.append("alpha2: must be >= 0")
    if isinstance(raw.get("wavelength"), (int, float)) and not raw["wavelength"] > 0:
        perrs.append("wavelength: must be > 0")

    d1 = _scalar_or_list(raw, "tx_ris_distances", k, perrs)
    d2 = _scalar_or_list(raw, "ris_rx_distances", k, perrs)
    for name, ds in (("tx_ris_distances", d1), ("ris_rx_distances", d2)):
        if ds is not None:
            for i, d in enumerate(ds):
                if not d > 0 or math.isinf(d):
                    perrs.append(f"{name}[{i}]: must be strictly positive and finite")

    power_raw = {"power_dbm": vals.get("power_dbm", raw.get("power_dbm"))}
    powers_dbm = _scalar_or_list(power_raw, "power_dbm", k, perrs)

    csi = raw.get("csi_noise") or {}
    enabled = bool(csi.get("enabled", False))
    p_db = vals.get("csi_p_db", csi.get("p_db"))
    if "csi_p_db" in vals and not enabled:
        perrs.append("sweep.csi_p_db: csi_noise.enabled must be true to sweep it")
    if enabled and (not isinstance(p_db, (int, float)) or isinstance(p_db, bool)):
        perrs.append("csi_noise.p_db: must be a number when enabled")

    if perrs:
        errs.extend(f"{where}: {e}" for e in perrs)
        return None

    try:
        geom = NetworkGeometry(K=k, M=m, tx_ris_distances=tuple(d1),
                               ris_rx_distances=tuple(d2))
        fading = FadingParams(kappa=float(kappa), c0=_db_to_linear(raw["c0_db"]),
                              alpha1=float(raw["alpha1"]), alpha2=float(raw["alpha2"]),
                              wavelength=float(raw["wavelength"]))
        noise = CsiNoiseParams(enabled=enabled,
                               p=_db_to_linear(float(p_db)) if enabled else math.inf)
        link = LinkBudget(powers=tuple(_dbm_to_watts(p) for p in powers_dbm),
                          noise_power=_dbm_to_watts(float(raw["noise_dbm"])))
    except ConfigError as e:
        errs.extend(f"{where}: {msg}" for msg in e.errors)
        return None
    return Point(point_id=point_id, M=m, K=k, cell=cell, kappa=float(kappa),
                 csi_p_db=float(p_db) if enabled else None,
                 geom=geom, fading=fading, noise=noise, link=link)


def validate_config(raw: dict) -> ExperimentConfig:
    """Resolve and validate every sweep point; raise ConfigError with the
    full list of violations if anything is wrong."""
    errs: list[str] = []
    seed = _want(raw, "seed", int, errs)
    if seed is not None and seed < 0:
        errs.append("seed: must be >= 0")
    trials = _want(raw, "trials", int, errs)
    if trials is not None and trials < 1:
        errs.append("trials: must be >= 1")
    objective = raw.get("objective", "sum_rate")
    if objective not in OBJECTIVES:
        errs.append(f"objective: must be one of {', '.join(OBJECTIVES)}")
    output = raw.get("output", "results.csv")
    if not isinstance(output, str):
        errs.append("output: must be a string path")

    archs = _parse_architectures(raw, errs)

    search = raw.get("search") or {}
    budget = SearchBudget()
    annealing = AnnealingParams()
    cap = search.get("exhaustive_cap", EXHAUSTIVE_CAP_DEFAULT)
    try:
        budget = SearchBudget(max_evaluations=search.get("max_evaluations"),
                              max_iterations=search.get("max_iterations"))
    except ConfigError as e:
        errs.extend(f"search.{m}" for m in e.errors)
    ann_raw = search.get("annealing") or {}
    try:
        annealing = AnnealingParams(
            t0=ann_raw.get("t0", 1.0), cooling=ann_raw.get("cooling", 0.95),
            moves_per_temperature=ann_raw.get("moves_per_temperature", 10),
            floor=ann_raw.get("floor", 1e-4))
    except ConfigError as e:
        errs.extend(f"search.annealing: {m}" for m in e.errors)
    if not isinstance(cap, int) or isinstance(cap, bool) or cap < 1:
        errs.append("search.exhaustive_cap: must be a positive integer")
        cap = EXHAUSTIVE_CAP_DEFAULT

    sweep = raw.get("sweep") or {}
    for key in sweep:
        if key not in SWEEP_AXES:
            errs.append(f"sweep.{key}: unknown axis (available: {', '.join(SWEEP_AXES)})")
    axes = [(k, sweep[k]) for k in SWEEP_AXES if k in sweep]
    for k, v in axes:
        if not isinstance(v, list) or not v:
            errs.append(f"sweep.{k}: must be a non-empty list")
    axes = [(k, v) for k, v in axes if isinstance(v, list) and v]

    points: list[Point] = []
    if not errs or archs:  # resolve points even with some top-level errors, to report all
        combos = itertools.product(*(v for _, v in axes)) if axes else [()]
        for pid, combo in enumerate(combos):
            vals = {k: c for (k, _), c in zip(axes, combo)}
            pt = _resolve_point(pid, vals, raw, archs, errs)
            if pt is not None:
                points.append(pt)

    if errs:
        raise ConfigError(errs)
    return ExperimentConfig(seed=seed, trials=trials, objective=objective,
                            output=output, base=raw, sweep=dict(sweep),
                            architectures=archs, budget=budget,
                            annealing=annealing, exhaustive_cap=cap, points=points)


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------

def _derived_seed(master: int, *path: int) -> int:
    return int(np.random.SeedSequence(master, spawn_key=tuple(path))
               .generate_state(1, np.uint64)[0])


def _arch_for_point(ac: ArchConfig, point: Point) -> Architecture:
    if ac.kind == "iris":
        return Architecture(kind="iris", cell=point.cell)
    if ac.kind == "phase_shifter":
        return Architecture(kind="phase_shifter", bits=ac.bits)
    return Architecture(kind="sris")


def _run_trial(cfg: ExperimentConfig, point: Point, trial: int,
               timing: bool) -> list[ResultRecord]:
    real = sample_network_realization(point.geom, point.fading, point.noise,
                                      cfg.seed, prefix=(point.point_id, trial))
    thash = hashlib.blake2b(real.truth_bytes(), digest_size=8).hexdigest()
    rows = []
    for ai, ac in enumerate(cfg.architectures):
        arch = _arch_for_point(ac, point)
        for mi, method in enumerate(ac.methods):
            spec = SearchSpec(
                architecture=arch, objective=cfg.objective, method=method,
                budget=cfg.budget, annealing=cfg.annealing,
                exhaustive_cap=cfg.exhaustive_cap,
                seed=_derived_seed(cfg.seed, point.point_id, trial,
                                   STREAM_OPTIMIZER, ai, mi))
            start = time.perf_counter()
            try:
                res = run_search(spec, real, point.link)
            except SearchSpaceError:
                rows.append(ResultRecord(
                    point=point, trial=trial, seed=cfg.seed, arch=ac.kind,
                    method=method, objective=cfg.objective, obj_est=None,
                    obj_true=None, sinrs=None, pattern=None, evaluations=None,
                    wall_ms=None, truth_hash=thash, refused=True))
                continue
            wall = (time.perf_counter() - start) * 1e3 if timing else None
            from .ris import (build_iris_matrix, build_phase_shifter_matrix,
                              build_sris_matrix)
            if arch.kind == "sris":
                t = build_sris_matrix(res.best_pattern, point.M)
            elif arch.kind == "iris":
                t = build_iris_matrix(res.best_pattern, point.M)
            else:
                t = build_phase_shifter_matrix(res.best_pattern, point.M)
            sinrs = tuple(float(s) for s in sinr_all(t, real, point.link))
            rows.append(ResultRecord(
                point=point, trial=trial, seed=cfg.seed, arch=ac.kind,
                method=method, objective=cfg.objective,
                obj_est=res.best_objective_on_estimates,
                obj_true=res.achieved_objective_on_truth,
                sinrs=sinrs, pattern=pattern_to_string(res.best_pattern),
                evaluations=res.evaluations, wall_ms=wall, truth_hash=thash,
                refused=False))
    return rows


def run_experiment(cfg: ExperimentConfig, out_path: str | None = None,
                   threads: int = 1, timing: bool = False) -> list[ResultRecord]:
    """Run the full sweep, write the CSV, print per-point summaries.

    One realization per (point, trial), shared across all architectures
    and methods. With threads > 1, (point, trial) tasks run in a thread
    pool; rows are still written in deterministic sweep order.
    """
    out = out_path or cfg.output
    tasks = [(point, trial) for point in cfg.points for trial in range(cfg.trials)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(
                lambda pt: _run_trial(cfg, pt[0], pt[1], timing), tasks))
    else:
        chunks = [_run_trial(cfg, point, trial, timing) for point, trial in tasks]
    records = [row for chunk in chunks for row in chunk]
    write_results(out, records)
    _print_point_summary(cfg, records)
    return records


def write_results(path: str, records: list[ResultRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(r.to_row())


def _print_point_summary(cfg: ExperimentConfig, records: list[ResultRecord]) -> None:
    groups: dict = {}
    for r in records:
        if r.refused or r.obj_true is None:
            continue
        groups.setdefault((r.point.point_id, r.arch, r.method), []).append(r.obj_true)
    for point in cfg.points:
        desc = f"M={point.M} K={point.K}"
        if point.cell:
            desc += f" cell=({point.cell.c},{point.cell.d})"
        desc += f" kappa={point.kappa:g}"
        if point.csi_p_db is not None:
            desc += f" csi_p={point.csi_p_db:g}dB"
        print(f"point {point.point_id}: {desc}")
        for ac in cfg.architectures:
            for method in ac.methods:
                vals = groups.get((point.point_id, ac.kind, method))
                if not vals:
                    print(f"  {ac.kind}/{method}: all rows refused")
                    continue
                arr = np.asarray(vals)
                print(f"  {ac.kind}/{method}: {cfg.objective} on truth "
                      f"{arr.mean():.6g} +/- {arr.std():.6g} (n={arr.size})")


# ---------------------------------------------------------------------------
# summaries over a results file
# ---------------------------------------------------------------------------

def summarize(path: str, group_by: list[str], metric: str) -> list[dict]:
    """Per-group count/mean/std/min/max of a numeric CSV column.

    Rows whose metric field is empty (refusals) are skipped. std is the
    population standard deviation, so a single-row group reports 0.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in [*group_by, metric]:
            if col not in header:
                raise ConfigError(f"unknown column {col!r} (file has: {', '.join(header)})")
        groups: dict[tuple, list[float]] = {}
        for row in reader:
            raw = row[metric]
            if raw == "":
                continue
            key = tuple(row[c] for c in group_by)
            groups.setdefault(key, []).append(float(raw))
    out = []
    for key in sorted(groups):
        arr = np.asarray(groups[key])
        out.append({
            **{c: v for c, v in zip(group_by, key)},
            "n": int(arr.size),
            "mean": float(arr.mean()),
            "std": float(arr.std()),
            "min": float(arr.min()),
            "max": float(arr.max()),
        })
    return out


def format_summary(rows: list[dict], group_by: list[str], metric: str) -> str:
    header = [*group_by, "n", f"mean({metric})", "std", "min", "max"]
    table = [header]
    for r in rows:
        table.append([str(r[c]) for c in group_by]
                     + [str(r["n"])] + [f"{r[k]:.6g}" for k in ("mean", "std", "min", "max")])
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in table]
    return "\n".join(lines)

"""Combinatorial search over RIS switch configurations.

The search space of every architecture maps onto a fixed-width bit
string: plain switches use one bit per element, interconnected cells use
one bit per (cell, departure, arrival) switch in cell-major row-major
order, and the b-bit phase shifter uses b bits per element (level =
little-endian bit slice). Enumeration index i is the integer whose
binary expansion (least significant bit first) is that string, which
pins down the "lowest enumeration index" tie-break everywhere.

Methods:

* `exhaustive_search` - the oracle; enumerates every configuration (with
  a loud refusal above the cap) and returns the global argmax.
* `greedy_flip` - steepest-ascent single-switch flips from the all-on
  pattern until no flip improves.
* `block_coordinate_cell_search` - cyclically re-optimizes one cell at a
  time by local exhaustive enumeration (interconnected cells only).
* `simulated_annealing` - random single-switch proposals with
  exp(delta/T) acceptance and geometric cooling; returns best-so-far.

Searches maximize the objective on *estimated* channels; the result also
carries the truth-evaluated objective of the chosen pattern so the cost
of imperfect CSI is visible. All candidate evaluations go through the
shared batched kernel in `metrics`, so values are bit-identical across
methods and heuristic-vs-oracle comparisons are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import ris
from .channel import ChannelRealization
from .errors import ConfigError, SearchSpaceError
from .metrics import OBJECTIVES, LinkBudget, objective_for_matrices
from .ris import CellShape, IRisPattern, PhaseShifterPattern, SRisPattern

METHODS = ("exhaustive", "greedy_flip", "block_coordinate", "simulated_annealing")

EXHAUSTIVE_CAP_DEFAULT = 1 << 22

# candidate-matrix chunks are bounded to ~16 MB of complex128
_CHUNK_ELEMS = 1 << 20


@dataclass(frozen=True)
class Architecture:
    """Which RIS design is being searched: sris, iris(cell) or phase_shifter(bits)."""

    kind: str
    cell: CellShape | None = None
    bits: int | None = None

    def __post_init__(self):
        if self.kind not in ("sris", "iris", "phase_shifter"):
            raise ConfigError(f"unknown architecture kind: {self.kind!r}")
        if self.kind == "iris" and self.cell is None:
            raise ConfigError("iris architecture needs a cell shape")
        if self.kind == "phase_shifter" and (self.bits is None or self.bits < 1):
            raise ConfigError("phase_shifter architecture needs bits >= 1")


@dataclass(frozen=True)
class AnnealingParams:
    t0: float = 1.0
    cooling: float = 0.95
    moves_per_temperature: int = 10
    floor: float = 1e-4

    def __post_init__(self):
        errs = []
        if not (self.t0 > 0):
            errs.append("annealing t0 must be > 0")
        if not (0 < self.cooling < 1):
            errs.append("annealing cooling factor must lie in (0, 1)")
        if self.moves_per_temperature < 1:
            errs.append("annealing moves_per_temperature must be >= 1")
        if not (self.floor > 0):
            errs.append("annealing floor temperature must be > 0")
        if errs:
            raise ConfigError(errs)


@dataclass(frozen=True)
class SearchBudget:
    """Caps on a single search.

    max_evaluations bounds objective-kernel calls (>= 1 when set; the
    count includes the initial pattern's evaluation). max_iterations is
    method-specific: accepted flips for greedy, full passes for
    block-coordinate, temperature stages for annealing; 0 means
    "evaluate the initial pattern and stop".
    """

    max_evaluations: int | None = None
    max_iterations: int | None = None

    def __post_init__(self):
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ConfigError("max_evaluations must be >= 1 when set")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise ConfigError("max_iterations must be >= 0 when set")


@dataclass(frozen=True)
class SearchSpec:
    architecture: Architecture
    objective: str = "sum_rate"
    method: str = "exhaustive"
    budget: SearchBudget = SearchBudget()
    seed: int = 0
    annealing: AnnealingParams = AnnealingParams()
    exhaustive_cap: int = EXHAUSTIVE_CAP_DEFAULT
    initial: object | None = None  # pattern to start heuristics from; default all-on

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ConfigError(f"unknown objective: {self.objective!r}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method: {self.method!r}")


@dataclass
class SearchResult:
    best_pattern: object
    best_objective_on_estimates: float
    achieved_objective_on_truth: float
    evaluations: int
    trace: list | None = None


# ---------------------------------------------------------------------------
# search-space plumbing
# ---------------------------------------------------------------------------

class _Space:
    """Bit-string codec, move set and matrix builder for one (arch, M)."""

    def __init__(self, arch: Architecture, m: int):
        self.arch = arch
        self.m = m
        if arch.kind == "sris":
            self.total_bits = m
            self.n_moves = m
        elif arch.kind == "iris":
            a = arch.cell.area
            if m % a != 0:
                raise ConfigError(f"M={m} is not divisible by cell area {a}")
            self.cells = m // a
            self.a = a
            self.total_bits = self.cells * a * a
            self.n_moves = self.total_bits
        else:
            self.total_bits = arch.bits * m
            self.n_moves = m
            self.nlevels = 1 << arch.bits
        self.size = 1 << self.total_bits

    # -- codes ---------------------------------------------------------
    def initial_code(self) -> np.ndarray:
        if self.arch.kind == "sris":
            return np.ones(self.m, dtype=np.uint8)
        if self.arch.kind == "iris":
            eye = np.eye(self.a, dtype=np.uint8)
            return np.repeat(eye[None], self.cells, axis=0)
        return np.zeros(self.m, dtype=np.int64)

    def codes_from_indices(self, idx: np.ndarray) -> np.ndarray:
        idx = idx.astype(np.uint64)
        if self.arch.kind == "phase_shifter":
            shifts = (np.arange(self.m, dtype=np.uint64) * np.uint64(self.arch.bits))
            return ((idx[:, None] >> shifts) & np.uint64(self.nlevels - 1)).astype(np.int64)
        shifts = np.arange(self.total_bits, dtype=np.uint64)
        bits = ((idx[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
        if self.arch.kind == "sris":
            return bits
        return bits.reshape(-1, self.cells, self.a, self.a)

    def neighbors(self, code: np.ndarray, count: int) -> np.ndarray:
        """The first `count` single-move neighbors, in move-index order."""
        flat = code.reshape(-1)
        neigh = np.repeat(flat[None, :], count, axis=0)
        i = np.arange(count)
        if self.arch.kind == "phase_shifter":
            neigh[i, i] = (neigh[i, i] + 1) % self.nlevels
        else:
            neigh[i, i] ^= 1
        return neigh.reshape((count,) + code.shape)

    def propose(self, code: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        cand = code.copy()
        flat = cand.reshape(-1)
        if self.arch.kind == "phase_shifter":
            i = int(rng.integers(self.m))
            delta = int(rng.integers(1, self.nlevels)) if self.nlevels > 2 else 1
            flat[i] = (flat[i] + delta) % self.nlevels
        else:
            i = int(rng.integers(self.n_moves))
            flat[i] ^= 1
        return cand

    # -- matrices and patterns ------------------------------------------
    def matrices(self, codes: np.ndarray) -> np.ndarray:
        if self.arch.kind == "sris":
            return ris._sris_matrices(codes)
        if self.arch.kind == "iris":
            return ris._iris_matrices(codes)
        return ris._phase_matrices(codes, self.arch.bits)

    def to_pattern(self, code: np.ndarray):
        if self.arch.kind == "sris":
            return SRisPattern(code.copy())
        if self.arch.kind == "iris":
            return IRisPattern(self.arch.cell, [code[u].copy() for u in range(self.cells)])
        return PhaseShifterPattern(self.arch.bits, code.copy())

    def from_pattern(self, pattern) -> np.ndarray:
        if self.arch.kind == "sris":
            if not isinstance(pattern, SRisPattern) or pattern.M != self.m:
                raise ConfigError("initial pattern does not match the sris search space")
            return pattern.switches.copy()
        if self.arch.kind == "iris":
            if (not isinstance(pattern, IRisPattern) or pattern.M != self.m
                    or pattern.shape.area != self.a):
                raise ConfigError("initial pattern does not match the iris search space")
            return np.stack(pattern.cells)
        if not isinstance(pattern, PhaseShifterPattern) or pattern.M != self.m \
                or pattern.bits != self.arch.bits:
            raise ConfigError("initial pattern does not match the phase_shifter search space")
        return pattern.levels.copy()


def search_space_size(arch: Architecture, m: int) -> int:
    return _Space(arch, m).size


@lru_cache(maxsize=8)
def _cached_chunk(arch: Architecture, m: int, start: int, stop: int) -> np.ndarray:
    """Candidate matrices for one enumeration chunk; reused across trials."""
    space = _Space(arch, m)
    idx = np.arange(start, stop, dtype=np.uint64)
    return space.matrices(space.codes_from_indices(idx))


class _Evaluator:
    """Counts objective-kernel calls made on the optimizer-visible channels."""

    def __init__(self, spec: SearchSpec, real: ChannelRealization, budget: LinkBudget):
        if len(budget.powers) != real.K:
            raise ConfigError(f"budget has {len(budget.powers)} powers, realization has K={real.K}")
        self.kind = spec.objective
        self.h = real.h_est
        self.g = real.g_est
        self.powers = np.asarray(budget.powers, dtype=np.float64)
        self.sigma2 = budget.noise_power
        self.count = 0

    def __call__(self, t_batch: np.ndarray) -> np.ndarray:
        self.count += t_batch.shape[0]
        return objective_for_matrices(self.kind, t_batch, self.h, self.g,
                                      self.powers, self.sigma2)

    def remaining(self, cap: int | None) -> float:
        return math.inf if cap is None else cap - self.count


def _finish(spec: SearchSpec, space: _Space, code: np.ndarray, best_val: float,
            ev: _Evaluator, trace, real: ChannelRealization,
            budget: LinkBudget) -> SearchResult:
    t = space.matrices(code[None])
    truth = objective_for_matrices(spec.objective, t, real.h, real.g,
                                   np.asarray(budget.powers, dtype=np.float64),
                                   budget.noise_power)[0]
    return SearchResult(
        best_pattern=space.to_pattern(code),
        best_objective_on_estimates=float(best_val),
        achieved_objective_on_truth=float(truth),
        evaluations=ev.count,
        trace=trace,
    )


def _initial_code(spec: SearchSpec, space: _Space) -> np.ndarray:
    if spec.initial is None:
        return space.initial_code()
    return space.from_pattern(spec.initial)


# ---------------------------------------------------------------------------
# search methods
# ---------------------------------------------------------------------------

def exhaustive_search(spec: SearchSpec, real: ChannelRealization,
                      budget: LinkBudget) -> SearchResult:
    """Global argmax by full enumeration; ties go to the lowest index."""
    space = _Space(spec.architecture, real.M)
    cap = spec.exhaustive_cap
    if spec.budget.max_evaluations is not None:
        cap = min(cap, spec.budget.max_evaluations)
    if space.size > cap:
        raise SearchSpaceError(space.size, cap,
                               what=f"{spec.architecture.kind} configurations")
    ev = _Evaluator(spec, real, budget)
    chunk = max(1, min(space.size, _CHUNK_ELEMS // (real.M * real.M)))
    best_val = -math.inf
    best_idx = 0
    for start in range(0, space.size, chunk):
        stop = min(space.size, start + chunk)
        t = _cached_chunk(spec.architecture, real.M, start, stop)
        vals = ev(t)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_idx = start + i
    code = space.codes_from_indices(np.array([best_idx], dtype=np.uint64))[0]
    return _finish(spec, space, code, best_val, ev, None, real, budget)


def greedy_flip(spec: SearchSpec, real: ChannelRealization,
                budget: LinkBudget) -> SearchResult:
    """Steepest ascent over single-switch moves until locally optimal.

    Each step evaluates every single-move neighbor (truncated to the
    remaining evaluation budget, in move order) and applies the strictly
    best one; ties go to the lowest move index.
    """
    space = _Space(spec.architecture, real.M)
    ev = _Evaluator(spec, real, budget)
    max_iters = spec.budget.max_iterations
    code = _initial_code(spec, space)
    val = float(ev(space.matrices(code[None]))[0])
    trace = [val]
    iters = 0
    while max_iters is None or iters < max_iters:
        n = int(min(space.n_moves, ev.remaining(spec.budget.max_evaluations)))
        if n <= 0:
            break
        neigh = space.neighbors(code, n)
        vals = ev(space.matrices(neigh))
        i = int(np.argmax(vals))
        if vals[i] > val:
            code = neigh[i]
            val = float(vals[i])
            trace.append(val)
            iters += 1
        else:
            break
    return _finish(spec, space, code, val, ev, trace, real, budget)


@lru_cache(maxsize=4)
def _all_cell_codes(area: int) -> np.ndarray:
    """Every binary area x area cell pattern, in enumeration order."""
    nbits = area * area
    idx = np.arange(1 << nbits, dtype=np.uint64)
    bits = ((idx[:, None] >> np.arange(nbits, dtype=np.uint64)) & np.uint64(1))
    return bits.astype(np.uint8).reshape(-1, area, area)


def block_coordinate_cell_search(spec: SearchSpec, real: ChannelRealization,
                                 budget: LinkBudget) -> SearchResult:
    """Cyclic per-cell exhaustive updates for the interconnected design.

    Visits cells in index order; each visit enumerates all 2^(a^2) local
    patterns with the other cells held fixed and adopts the argmax
    (lowest enumeration index on ties). Stops after a full pass without
    strict improvement, at the pass cap, or when the evaluation budget
    cannot cover another full cell.
    """
    if spec.architecture.kind != "iris":
        raise ConfigError("block_coordinate requires the iris architecture")
    space = _Space(spec.architecture, real.M)
    nbits = space.a * space.a
    if nbits > ris.CELL_ENUM_CAP_BITS:
        raise SearchSpaceError(1 << nbits, 1 << ris.CELL_ENUM_CAP_BITS, what="cell patterns")
    cell_codes = _all_cell_codes(space.a)
    cell_size = cell_codes.shape[0]
    ev = _Evaluator(spec, real, budget)
    max_iters = spec.budget.max_iterations
    code = _initial_code(spec, space)
    val = float(ev(space.matrices(code[None]))[0])
    trace = [val]
    passes = 0
    exhausted = False
    while not exhausted and (max_iters is None or passes < max_iters):
        improved = False
        for u in range(space.cells):
            if ev.remaining(spec.budget.max_evaluations) < cell_size:
                exhausted = True
                break
            cands = np.repeat(code[None], cell_size, axis=0)
            cands[:, u] = cell_codes
            vals = ev(space.matrices(cands))
            i = int(np.argmax(vals))
            if vals[i] > val:
                improved = True
            code = cands[i]
            val = float(vals[i])
            trace.append(val)
        passes += 1
        if not improved:
            break
    return _finish(spec, space, code, val, ev, trace, real, budget)


def simulated_annealing(spec: SearchSpec, real: ChannelRealization,
                        budget: LinkBudget) -> SearchResult:
    """Single-move proposals accepted with prob min(1, exp(delta/T)).

    Geometric cooling from t0 by the cooling factor each stage, stopping
    below the floor temperature, at the stage cap, or when the
    evaluation budget runs out. Returns the best pattern seen, not the
    final state. Fully deterministic given spec.seed. A proposal whose
    acceptance probability underflows to zero consumes no uniform draw,
    so the t0 -> 0 limit is exactly a randomized hill climb that never
    accepts a worsening move.
    """
    space = _Space(spec.architecture, real.M)
    params = spec.annealing
    ev = _Evaluator(spec, real, budget)
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    code = _initial_code(spec, space)
    cur = float(ev(space.matrices(code[None]))[0])
    best = cur
    best_code = code.copy()
    trace = [best]
    t = params.t0
    stages = 0
    max_iters = spec.budget.max_iterations
    while t >= params.floor and (max_iters is None or stages < max_iters):
        if ev.remaining(spec.budget.max_evaluations) < 1:
            break
        for _ in range(params.moves_per_temperature):
            if ev.remaining(spec.budget.max_evaluations) < 1:
                break
            cand = space.propose(code, rng)
            v = float(ev(space.matrices(cand[None]))[0])
            delta = v - cur
            if delta >= 0:
                accept = True
            else:
                p = math.exp(delta / t)
                accept = p > 0.0 and rng.random() < p
            if accept:
                code = cand
                cur = v
            if v > best:
                best = v
                best_code = cand.copy()
            trace.append(best)
        t *= params.cooling
        stages += 1
    return _finish(spec, space, best_code, best, ev, trace, real, budget)


_DISPATCH = {
    "exhaustive": exhaustive_search,
    "greedy_flip": greedy_flip,
    "block_coordinate": block_coordinate_cell_search,
    "simulated_annealing": simulated_annealing,
}


def run_search(spec: SearchSpec, real: ChannelRealization,
               budget: LinkBudget) -> SearchResult:
    """Dispatch on spec.method."""
    return _DISPATCH[spec.method](spec, real, budget)

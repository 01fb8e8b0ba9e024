"""Switch patterns and effective transfer matrices for three RIS designs.

Architectures:

* ``sris``: every element carries one binary switch between its arrival
  and departure side, so the M x M transfer matrix is diag of the bits.
* ``iris``: elements are grouped into cells of ``c*d`` consecutive
  indices. Inside a cell, a binary switch matrix routes each arrival
  element to any subset of departure elements; an arrival feeding n
  departures passes through a uniform power splitter, scaling its column
  by 1/sqrt(n). Entries that are the sole nonzero of both their row and
  column form the "isolated" part of the cell matrix; the remaining
  "mixed" part is scaled to unit Frobenius norm so the cell stays
  passive. The transfer matrix is block-diagonal in the cells.
* ``phase_shifter``: a b-bit quantized phase per element, unit modulus,
  transfer matrix diag(exp(i 2 pi level / 2^b)).

The batched ``*_matrices`` builders are the single construction path;
the public single-pattern operations call them with a batch of one, so a
pattern always maps to bit-identical floats no matter where it is built.
This is what makes cross-architecture dominance comparisons exact: a
diagonal-only cell pattern produces, bit for bit, the same matrix as the
plain switch architecture with the same bits.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ConfigError, SearchSpaceError

CELL_ENUM_CAP_BITS = 16  # refuse per-cell enumeration beyond 2**16 patterns


@dataclass(frozen=True)
class CellShape:
    """Cell dimensions (c rows, d columns); only the area c*d enters the math."""

    c: int
    d: int

    def __post_init__(self):
        if self.c < 1 or self.d < 1:
            raise ConfigError("cell dimensions must be positive integers")

    @property
    def area(self) -> int:
        return self.c * self.d


@dataclass
class SRisPattern:
    """Length-M vector of binary reflect/block switches."""

    switches: np.ndarray

    def __post_init__(self):
        self.switches = _as_bits(self.switches, "switches")

    @property
    def M(self) -> int:
        return self.switches.shape[0]


@dataclass
class IRisPattern:
    """Per-cell binary switch matrices; entry (l, m) routes arrival m to departure l."""

    shape: CellShape
    cells: list

    def __post_init__(self):
        a = self.shape.area
        if len(self.cells) < 1:
            raise ConfigError("iris pattern needs at least one cell")
        fixed = []
        for i, cell in enumerate(self.cells):
            cell = _as_bits(cell, f"cells[{i}]")
            if cell.shape != (a, a):
                raise ConfigError(f"cells[{i}] must be {a}x{a} for cell shape ({self.shape.c},{self.shape.d})")
            fixed.append(cell)
        self.cells = fixed

    @property
    def M(self) -> int:
        return len(self.cells) * self.shape.area


@dataclass
class PhaseShifterPattern:
    """b-bit quantized phase levels, one integer in [0, 2^b) per element."""

    bits: int
    levels: np.ndarray

    def __post_init__(self):
        if self.bits < 1:
            raise ConfigError("phase shifter bits must be >= 1")
        levels = np.asarray(self.levels, dtype=np.int64)
        if levels.ndim != 1:
            raise ConfigError("levels must be a 1-D integer list")
        n = 1 << self.bits
        if np.any((levels < 0) | (levels >= n)):
            raise ConfigError(f"levels must lie in [0, {n})")
        self.levels = levels

    @property
    def M(self) -> int:
        return self.levels.shape[0]


@dataclass
class RisMatrix:
    """Effective M x M complex transfer matrix plus its architecture tag."""

    t: np.ndarray
    architecture: str

    @property
    def M(self) -> int:
        return self.t.shape[0]


def _as_bits(x, name: str) -> np.ndarray:
    arr = np.asarray(x)
    if not np.all((arr == 0) | (arr == 1)):
        raise ConfigError(f"{name} entries must be binary")
    return arr.astype(np.uint8)


# ---------------------------------------------------------------------------
# batched construction kernels (the only place matrices are computed)
# ---------------------------------------------------------------------------

def _sris_matrices(bits: np.ndarray) -> np.ndarray:
    """(C, M) binary -> (C, M, M) complex diagonal transfer matrices."""
    c, m = bits.shape
    t = np.zeros((c, m, m), dtype=np.complex128)
    idx = np.arange(m)
    t[:, idx, idx] = bits.astype(np.float64)
    return t


def _raw_cells(s: np.ndarray) -> np.ndarray:
    """Apply the per-column power-splitter factor 1/sqrt(#ones in column)."""
    colc = s.sum(axis=-2)  # ones per arrival column
    denom = np.where(colc > 0, np.sqrt(colc), 1.0)
    return s / denom[..., None, :]


def _isolated_mask(nonzero: np.ndarray) -> np.ndarray:
    """True where an entry is the sole nonzero of both its row and its column."""
    rownz = nonzero.sum(axis=-1)
    colnz = nonzero.sum(axis=-2)
    return nonzero & (rownz[..., :, None] == 1) & (colnz[..., None, :] == 1)


def _fro2(a: np.ndarray) -> np.ndarray:
    """Squared Frobenius norm over the trailing two axes."""
    if np.iscomplexobj(a):
        p = a.real ** 2 + a.imag ** 2
    else:
        p = a ** 2
    return p.sum(axis=(-2, -1))


def _normalize_mixed(tilde: np.ndarray) -> np.ndarray:
    n2 = _fro2(tilde)
    scale = np.where(n2 > 0, np.sqrt(n2), 1.0)
    return tilde / scale[..., None, None]


def _cell_blocks(bits: np.ndarray) -> np.ndarray:
    """(..., a, a) binary cell patterns -> effective real-valued cell blocks."""
    s = bits.astype(np.float64)
    raw = _raw_cells(s)
    mask = _isolated_mask(bits > 0)
    isolated = np.where(mask, raw, 0.0)
    mixed = np.where(mask, 0.0, raw)
    return isolated + _normalize_mixed(mixed)


def _iris_matrices(bits: np.ndarray) -> np.ndarray:
    """(C, U, a, a) binary cell patterns -> (C, M, M) block-diagonal matrices."""
    c, u, a, _ = bits.shape
    eff = _cell_blocks(bits)
    m = u * a
    t = np.zeros((c, m, m), dtype=np.complex128)
    for i in range(u):
        t[:, i * a:(i + 1) * a, i * a:(i + 1) * a] = eff[:, i]
    return t


def _phase_matrices(levels: np.ndarray, bits: int) -> np.ndarray:
    """(C, M) integer levels -> (C, M, M) unit-modulus diagonal matrices."""
    c, m = levels.shape
    n = 1 << bits
    phases = np.exp(2j * np.pi * levels.astype(np.float64) / n)
    t = np.zeros((c, m, m), dtype=np.complex128)
    idx = np.arange(m)
    t[:, idx, idx] = phases
    return t


# ---------------------------------------------------------------------------
# public single-pattern operations
# ---------------------------------------------------------------------------

def build_sris_matrix(p: SRisPattern, m: int | None = None) -> RisMatrix:
    """diag(s_1, ..., s_M) for a switch pattern."""
    if m is not None and p.M != m:
        raise ConfigError(f"pattern has {p.M} switches, expected M={m}")
    return RisMatrix(_sris_matrices(p.switches[None, :])[0], "sris")


def cell_members(m: int, shape: CellShape, big_m: int) -> set[int]:
    """1-based indices of the consecutive cell containing element m."""
    if big_m % shape.area != 0:
        raise ConfigError(f"M={big_m} is not divisible by cell area {shape.area}")
    if not 1 <= m <= big_m:
        raise ConfigError(f"element index m={m} out of range 1..{big_m}")
    u = (m - 1) // shape.area
    return set(range(u * shape.area + 1, (u + 1) * shape.area + 1))


def build_raw_cell_matrix(cell) -> np.ndarray:
    """Power-splitter-scaled cell matrix: column m is s[:, m]/sqrt(#ones)."""
    bits = _as_bits(cell, "cell")
    if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
        raise ConfigError("cell must be a square binary matrix")
    return _raw_cells(bits.astype(np.float64)[None])[0].astype(np.complex128)


def split_hat_tilde(raw: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a raw cell matrix into its isolated and mixed parts.

    An entry is isolated when it is the only nonzero of both its row and
    its column; everything else (including shared rows or columns) is
    mixed. The two parts have disjoint supports and sum to the input.
    """
    raw = np.asarray(raw, dtype=np.complex128)
    mask = _isolated_mask(raw != 0)
    hat = np.where(mask, raw, 0.0 + 0.0j)
    tilde = np.where(mask, 0.0 + 0.0j, raw)
    return hat, tilde


def normalize_tilde(tilde: np.ndarray) -> np.ndarray:
    """Scale to unit Frobenius norm; the zero matrix stays zero."""
    tilde = np.asarray(tilde, dtype=np.complex128)
    return _normalize_mixed(tilde[None])[0]


def build_iris_matrix(p: IRisPattern, m: int) -> RisMatrix:
    """Block-diagonal transfer matrix from per-cell switch patterns."""
    a = p.shape.area
    if m % a != 0:
        raise ConfigError(f"M={m} is not divisible by cell area {a}")
    if p.M != m:
        raise ConfigError(f"pattern covers {p.M} elements, expected M={m}")
    bits = np.stack(p.cells)[None]  # (1, U, a, a)
    return RisMatrix(_iris_matrices(bits)[0], "iris")


def build_phase_shifter_matrix(p: PhaseShifterPattern, m: int) -> RisMatrix:
    """diag(exp(i 2 pi level_m / 2^b)); every entry has unit modulus."""
    if p.M != m:
        raise ConfigError(f"pattern has {p.M} levels, expected M={m}")
    return RisMatrix(_phase_matrices(p.levels[None, :], p.bits)[0], "phase_shifter")


def enumerate_cell_patterns(shape: CellShape,
                            max_bits: int = CELL_ENUM_CAP_BITS) -> Iterator[np.ndarray]:
    """All 2^(a^2) binary a x a cell matrices, a = c*d.

    Ordering is lexicographic by bit index: pattern i sets entry
    (q // a, q % a) to bit q of i (row-major, least significant bit
    first), so the first pattern is all-zero and the last all-one.
    """
    a = shape.area
    nbits = a * a
    if nbits > max_bits:
        raise SearchSpaceError(1 << nbits, 1 << max_bits, what="cell patterns")
    for i in range(1 << nbits):
        yield _index_to_cell(i, a)


def _index_to_cell(i: int, a: int) -> np.ndarray:
    bits = (i >> np.arange(a * a, dtype=np.uint64)) & 1
    return bits.astype(np.uint8).reshape(a, a)


def _cell_to_index(cell: np.ndarray) -> int:
    flat = cell.reshape(-1).astype(np.uint64)
    return int((flat << np.arange(flat.size, dtype=np.uint64)).sum())


# ---------------------------------------------------------------------------
# pattern serialization (CSV-friendly, reversible)
# ---------------------------------------------------------------------------

def pattern_to_string(p) -> str:
    """Compact text form: bits for sris, |-joined row-major cell bits for
    iris, comma-joined level integers for the phase shifter."""
    if isinstance(p, SRisPattern):
        return "".join(str(int(b)) for b in p.switches)
    if isinstance(p, IRisPattern):
        return "|".join("".join(str(int(b)) for b in cell.reshape(-1)) for cell in p.cells)
    if isinstance(p, PhaseShifterPattern):
        return ",".join(str(int(v)) for v in p.levels)
    raise TypeError(f"not a pattern: {type(p).__name__}")


def pattern_from_string(kind: str, s: str, m: int,
                        cell: CellShape | None = None,
                        bits: int | None = None):
    """Inverse of `pattern_to_string` for the given architecture."""
    if kind == "sris":
        sw = np.array([int(ch) for ch in s], dtype=np.uint8)
        p = SRisPattern(sw)
    elif kind == "iris":
        if cell is None:
            raise ConfigError("iris pattern needs a cell shape")
        a = cell.area
        cells = [np.array([int(ch) for ch in blk], dtype=np.uint8).reshape(a, a)
                 for blk in s.split("|")]
        p = IRisPattern(cell, cells)
    elif kind == "phase_shifter":
        if bits is None:
            raise ConfigError("phase shifter pattern needs a bit depth")
        p = PhaseShifterPattern(bits, np.array([int(v) for v in s.split(",")], dtype=np.int64))
    else:
        raise ConfigError(f"unknown architecture kind: {kind}")
    if p.M != m:
        raise ConfigError(f"pattern string covers {p.M} elements, expected M={m}")
    return p

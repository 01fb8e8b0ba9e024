import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riswitch.errors import ConfigError, SearchSpaceError
from riswitch.ris import (CellShape, IRisPattern, PhaseShifterPattern,
                          SRisPattern, build_iris_matrix,
                          build_phase_shifter_matrix, build_raw_cell_matrix,
                          build_sris_matrix, cell_members,
                          enumerate_cell_patterns, normalize_tilde,
                          pattern_from_string, pattern_to_string,
                          split_hat_tilde)

# the hand-worked 2x2 cell: column 1 feeds both departures, column 2 only itself
CELL_FIXTURE = np.array([[1, 0], [1, 1]])
RAW_FIXTURE = np.array([[2 ** -0.5, 0.0], [2 ** -0.5, 1.0]])
NORMALIZED_FIXTURE = np.array([[0.5, 0.0], [0.5, 2 ** -0.5]])

SHAPES = [CellShape(1, 1), CellShape(1, 2), CellShape(2, 1), CellShape(3, 1),
          CellShape(1, 4), CellShape(2, 2)]


def cell_from_index(i: int, area: int) -> np.ndarray:
    # independent re-derivation of the documented bit order (row-major, LSB first)
    return np.array([(i >> q) & 1 for q in range(area * area)],
                    dtype=np.uint8).reshape(area, area)


def random_cells(rng, shape, n):
    a = shape.area
    return rng.integers(0, 2, size=(n, a, a)).astype(np.uint8)


# ---------------------------------------------------------------------------
# plain switch architecture
# ---------------------------------------------------------------------------

def test_sris_all_on_is_identity():
    t = build_sris_matrix(SRisPattern(np.ones(3, dtype=int)))
    assert np.array_equal(t.t, np.eye(3, dtype=complex))


def test_sris_all_off_is_zero():
    t = build_sris_matrix(SRisPattern(np.zeros(3, dtype=int)))
    assert np.array_equal(t.t, np.zeros((3, 3), dtype=complex))


def test_sris_mixed_bits():
    t = build_sris_matrix(SRisPattern(np.array([1, 0, 1])))
    assert np.array_equal(t.t, np.diag([1.0, 0.0, 1.0]).astype(complex))


def test_sris_length_mismatch_is_config_error():
    with pytest.raises(ConfigError):
        build_sris_matrix(SRisPattern(np.array([1, 0])), m=3)


def test_sris_pattern_rejects_non_binary():
    with pytest.raises(ConfigError):
        SRisPattern(np.array([0, 2, 1]))


# ---------------------------------------------------------------------------
# cell membership
# ---------------------------------------------------------------------------

def test_cell_members_interior():
    assert cell_members(5, CellShape(2, 2), 32) == {5, 6, 7, 8}


def test_cell_members_boundary():
    assert cell_members(4, CellShape(2, 2), 32) == {1, 2, 3, 4}


def test_cell_members_single_cell():
    for m in range(1, 9):
        assert cell_members(m, CellShape(2, 4), 8) == set(range(1, 9))


def test_cell_members_out_of_range():
    with pytest.raises(ConfigError):
        cell_members(33, CellShape(2, 2), 32)
    with pytest.raises(ConfigError):
        cell_members(0, CellShape(2, 2), 32)


# ---------------------------------------------------------------------------
# raw cell matrix / split / normalization fixtures
# ---------------------------------------------------------------------------

def test_raw_cell_fixture():
    raw = build_raw_cell_matrix(CELL_FIXTURE)
    assert np.allclose(raw, RAW_FIXTURE, atol=1e-12, rtol=0)


def test_raw_identity_cell_is_identity():
    raw = build_raw_cell_matrix(np.eye(3, dtype=int))
    assert np.array_equal(raw, np.eye(3, dtype=complex))


def test_raw_all_zero_cell():
    raw = build_raw_cell_matrix(np.zeros((2, 2), dtype=int))
    assert np.array_equal(raw, np.zeros((2, 2), dtype=complex))
    assert np.all(np.abs(raw ** 2).sum(axis=0) == 0.0)


def test_split_identity_is_all_isolated():
    raw = build_raw_cell_matrix(np.eye(2, dtype=int))
    hat, tilde = split_hat_tilde(raw)
    assert np.array_equal(hat, raw)
    assert np.array_equal(tilde, np.zeros_like(raw))


def test_split_fixture_is_all_mixed():
    # (1,1) shares its column, (2,1) and (2,2) share a row
    hat, tilde = split_hat_tilde(build_raw_cell_matrix(CELL_FIXTURE))
    assert np.array_equal(hat, np.zeros((2, 2), dtype=complex))
    assert np.allclose(tilde, RAW_FIXTURE, atol=1e-12, rtol=0)


def test_split_partial_diagonal():
    raw = np.diag([1.0, 0.0]).astype(complex)
    hat, tilde = split_hat_tilde(raw)
    assert np.array_equal(hat, raw)
    assert np.array_equal(tilde, np.zeros_like(raw))


def test_normalize_fixture():
    out = normalize_tilde(RAW_FIXTURE.astype(complex))
    assert np.allclose(out, NORMALIZED_FIXTURE, atol=1e-12, rtol=0)


def test_normalize_zero_matrix_stays_zero():
    z = np.zeros((3, 3), dtype=complex)
    assert np.array_equal(normalize_tilde(z), z)


def test_normalize_single_entry():
    out = normalize_tilde(np.array([[0.5]], dtype=complex))
    assert out[0, 0] == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# interconnected matrix assembly
# ---------------------------------------------------------------------------

def test_iris_identity_cells_give_identity():
    shape = CellShape(2, 2)
    p = IRisPattern(shape, [np.eye(4, dtype=int)] * 2)
    t = build_iris_matrix(p, 8)
    assert np.array_equal(t.t, np.eye(8, dtype=complex))


def test_iris_single_cell_fixture_block():
    p = IRisPattern(CellShape(2, 1), [CELL_FIXTURE])
    t = build_iris_matrix(p, 2)
    assert np.allclose(t.t, NORMALIZED_FIXTURE, atol=1e-12, rtol=0)


def test_iris_divisibility_error():
    with pytest.raises(ConfigError):
        build_iris_matrix(IRisPattern(CellShape(2, 2), [np.eye(4, dtype=int)]), 10)


@settings(max_examples=200)
@given(data=st.data())
def test_diagonal_patterns_embed_sris_exactly(data):
    shape = data.draw(st.sampled_from(SHAPES))
    a = shape.area
    cells = data.draw(st.integers(1, max(1, 16 // a)))
    m = cells * a
    bits = np.array(data.draw(st.lists(st.integers(0, 1), min_size=m, max_size=m)),
                    dtype=np.uint8)
    p_iris = IRisPattern(shape, [np.diag(bits[u * a:(u + 1) * a]) for u in range(cells)])
    t_iris = build_iris_matrix(p_iris, m)
    t_sris = build_sris_matrix(SRisPattern(bits), m)
    assert np.array_equal(t_iris.t, t_sris.t)


@settings(max_examples=100)
@given(data=st.data())
def test_iris_matrix_zero_outside_blocks(data):
    shape = data.draw(st.sampled_from(SHAPES))
    a = shape.area
    cells = data.draw(st.integers(1, max(1, 16 // a)))
    idxs = [data.draw(st.integers(0, 2 ** (a * a) - 1)) for _ in range(cells)]
    p = IRisPattern(shape, [cell_from_index(i, a) for i in idxs])
    t = build_iris_matrix(p, cells * a).t
    mask = np.zeros_like(t, dtype=bool)
    for u in range(cells):
        mask[u * a:(u + 1) * a, u * a:(u + 1) * a] = True
    assert np.all(t[~mask] == 0)


@settings(max_examples=300)
@given(data=st.data())
def test_cell_passivity_and_decomposition(data):
    shape = data.draw(st.sampled_from(SHAPES))
    a = shape.area
    idx = data.draw(st.integers(0, 2 ** (a * a) - 1))
    cell = cell_from_index(idx, a)
    raw = build_raw_cell_matrix(cell)
    # column power is exactly one when the column has a switch on, else zero
    power = (np.abs(raw) ** 2).sum(axis=0)
    on = cell.sum(axis=0) > 0
    assert np.all(np.abs(power[on] - 1.0) <= 1e-12)
    assert np.all(power[~on] == 0.0)
    hat, tilde = split_hat_tilde(raw)
    assert np.array_equal(hat + tilde, raw)
    assert not np.any((hat != 0) & (tilde != 0))
    if np.any(tilde != 0):
        norm = np.sqrt((np.abs(normalize_tilde(tilde)) ** 2).sum())
        assert abs(norm - 1.0) <= 1e-12


# ---------------------------------------------------------------------------
# phase shifter
# ---------------------------------------------------------------------------

def test_phase_shifter_one_bit_phases():
    p = PhaseShifterPattern(1, np.array([0, 1]))
    t = build_phase_shifter_matrix(p, 2)
    assert t.t[0, 0] == pytest.approx(1.0, abs=1e-12)
    assert t.t[1, 1] == pytest.approx(-1.0, abs=1e-12)


def test_phase_shifter_all_zero_levels_is_identity():
    t = build_phase_shifter_matrix(PhaseShifterPattern(2, np.zeros(3, dtype=int)), 3)
    assert np.array_equal(t.t, np.eye(3, dtype=complex))


def test_phase_shifter_quarter_turn():
    t = build_phase_shifter_matrix(PhaseShifterPattern(2, np.array([1])), 1)
    assert t.t[0, 0] == pytest.approx(1j, abs=1e-12)


def test_phase_shifter_level_out_of_range():
    with pytest.raises(ConfigError):
        PhaseShifterPattern(2, np.array([4]))


@settings(max_examples=100)
@given(bits=st.integers(1, 4), data=st.data())
def test_phase_shifter_unit_modulus(bits, data):
    m = data.draw(st.integers(1, 8))
    levels = np.array(data.draw(
        st.lists(st.integers(0, 2 ** bits - 1), min_size=m, max_size=m)))
    t = build_phase_shifter_matrix(PhaseShifterPattern(bits, levels), m).t
    d = np.diag(t)
    assert np.all(np.abs(np.abs(d) - 1.0) <= 1e-12)
    assert np.all(t[~np.eye(m, dtype=bool)] == 0)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def test_enumerate_single_element_cell():
    pats = list(enumerate_cell_patterns(CellShape(1, 1)))
    assert len(pats) == 2
    assert np.array_equal(pats[0], [[0]])
    assert np.array_equal(pats[1], [[1]])


def test_enumerate_two_element_cell():
    pats = list(enumerate_cell_patterns(CellShape(2, 1)))
    assert len(pats) == 16
    assert not pats[0].any()
    assert pats[-1].all()


def test_enumerate_count_and_distinct():
    pats = list(enumerate_cell_patterns(CellShape(3, 1)))
    assert len(pats) == 512
    assert len({p.tobytes() for p in pats}) == 512


def test_enumerate_matches_documented_bit_order():
    pats = list(enumerate_cell_patterns(CellShape(2, 1)))
    for i, p in enumerate(pats):
        assert np.array_equal(p, cell_from_index(i, 2))


def test_enumeration_cap_refusal_reports_count():
    with pytest.raises(SearchSpaceError) as exc:
        next(enumerate_cell_patterns(CellShape(5, 1)))
    assert exc.value.required == 2 ** 25


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_sris_pattern_round_trip():
    p = SRisPattern(np.array([1, 0, 1, 1, 0]))
    s = pattern_to_string(p)
    assert s == "10110"
    q = pattern_from_string("sris", s, 5)
    assert np.array_equal(q.switches, p.switches)


def test_iris_pattern_round_trip():
    shape = CellShape(2, 1)
    p = IRisPattern(shape, [CELL_FIXTURE, np.eye(2, dtype=int)])
    s = pattern_to_string(p)
    assert s == "1011|1001"
    q = pattern_from_string("iris", s, 4, cell=shape)
    for a, b in zip(q.cells, p.cells):
        assert np.array_equal(a, b)


def test_phase_pattern_round_trip():
    p = PhaseShifterPattern(2, np.array([0, 3, 1]))
    s = pattern_to_string(p)
    assert s == "0,3,1"
    q = pattern_from_string("phase_shifter", s, 3, bits=2)
    assert np.array_equal(q.levels, p.levels)

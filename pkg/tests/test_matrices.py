import io
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import ETA0, ETA_FIFTH, ETA_ONE_RAD, ETA_QUARTER, ETA_SIXTH
from mixedwalk.cyclo import NumericAngle
from mixedwalk.graph import complete, cycle, hamming, path, random_connected
from mixedwalk.matrices import (EXACT, NUMERIC, FieldMatrix, IndexMismatch, NonRegularExactNormalization,
                                boundary_matrix, coin_matrix, degree_matrix, dump_csv, hermitian_adjacency,
                                normalized_hermitian, random_walk_hermitian, shift_matrix, time_evolution,
                                verify_entry_formula)

GOLDEN_C3 = [
    [0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 0],
]


def test_golden_c3(c3):
    u = time_evolution(c3, ETA0)
    num, den = u.integer_part()
    assert den == 1
    assert num.tolist() == GOLDEN_C3
    assert u.power(3).is_identity()
    assert not u.is_identity()


def test_p2(p2):
    u = time_evolution(p2, ETA_QUARTER)
    assert u.integer_part()[0].tolist() == [[0, 1], [1, 0]]
    assert u.power(2).is_identity()


def _sample_graphs():
    rng = random.Random(5)
    return [cycle(3, [1, 0, 2]), complete(4, [1, 2, 0, 0, 1, 2]), hamming(2, 3)] + \
        [random_connected(rng.randint(2, 6), rng) for _ in range(6)]


@pytest.mark.parametrize("eta", [ETA0, ETA_QUARTER, ETA_SIXTH, ETA_FIFTH])
def test_unitary_structure(eta):
    for g in _sample_graphs():
        c = coin_matrix(g)
        s = shift_matrix(g, eta)
        u = time_evolution(g, eta)
        assert (c @ c).is_identity()
        assert c.equals(c.conj_transpose())
        assert (s @ s.conj_transpose()).is_identity()
        assert (u @ u.conj_transpose()).is_identity()
        h = hermitian_adjacency(g, eta)
        assert h.equals(h.conj_transpose())


def test_numeric_matches_exact():
    for g in _sample_graphs():
        for eta in (ETA_QUARTER, ETA_FIFTH):
            ue = time_evolution(g, eta, EXACT).to_complex()
            un = time_evolution(g, eta, NUMERIC).data
            assert np.max(np.abs(ue - un)) <= 1e-12
            assert time_evolution(g, eta, NUMERIC).is_unitary(1e-10)


def test_undirected_ignores_eta():
    g = complete(4)
    a = time_evolution(g, ETA0)
    assert a.equals(time_evolution(g, ETA_FIFTH))
    assert time_evolution(g, ETA_ONE_RAD).equals(a)


def test_float_angle_mixed_needs_numeric():
    g = cycle(3, [1, 0, 0])
    with pytest.raises(NumericAngle):
        time_evolution(g, ETA_ONE_RAD, EXACT)
    assert time_evolution(g, ETA_ONE_RAD, NUMERIC).is_unitary()


def test_hermitian_entries():
    g = cycle(3, [1, 0, 0])
    h = hermitian_adjacency(g, ETA_QUARTER).to_complex()
    assert h[0, 1] == pytest.approx(1j)
    assert h[1, 0] == pytest.approx(-1j)
    assert h[1, 2] == pytest.approx(1)


def test_normalizations():
    g = complete(4, [1, 0, 2, 0, 1, 0])
    hn = normalized_hermitian(g, ETA_SIXTH)
    assert hn.equals(hermitian_adjacency(g, ETA_SIXTH).scale(1 / Fraction(3)))
    # D^-1 H is similar to D^-1/2 H D^-1/2, so the spectra agree
    p3 = path(3, [1, 0])
    ev1 = np.sort(np.linalg.eigvals(random_walk_hermitian(p3, ETA_QUARTER).to_complex()).real)
    ev2 = np.sort(np.linalg.eigvalsh(normalized_hermitian(p3, ETA_QUARTER, NUMERIC).data))
    assert np.allclose(ev1, ev2)
    with pytest.raises(NonRegularExactNormalization):
        normalized_hermitian(p3, ETA_QUARTER, EXACT)


def test_boundary_matrix():
    g = complete(4)
    k = boundary_matrix(g, NUMERIC)
    assert k.shape == (4, 12)
    assert np.allclose(k.data @ k.data.conj().T, np.eye(4))
    c = 2 * k.data.conj().T @ k.data - np.eye(12)
    assert np.allclose(c, coin_matrix(g).to_complex())
    d = degree_matrix(g)
    assert d.integer_part()[0].tolist() == (3 * np.eye(4, dtype=int)).tolist()


def test_entry_formula():
    for g in (cycle(3), cycle(3, [1, 0, 0]), complete(4, [2, 1, 0, 0, 1, 1])):
        assert verify_entry_formula(g, ETA_SIXTH)
        assert verify_entry_formula(g, ETA_ONE_RAD if g.is_undirected else ETA_SIXTH, mode=NUMERIC)


def test_entry_formula_negative_control():
    g = cycle(3, [1, 0, 0])
    u = time_evolution(g, ETA_SIXTH)
    entries = [[u[i, j] for j in range(6)] for i in range(6)]
    entries[0][0] = entries[0][0] + 1
    bad = FieldMatrix.from_entries(entries, u.rows, u.cols)
    assert not verify_entry_formula(g, ETA_SIXTH, u=bad)


def test_index_spaces_checked():
    g = cycle(3)
    with pytest.raises(IndexMismatch):
        hermitian_adjacency(g, ETA0) @ coin_matrix(g)


def test_dump_csv():
    g = cycle(3, [1, 0, 0])
    text = dump_csv(hermitian_adjacency(g, ETA_SIXTH))
    assert text.splitlines()[0] == "0,ζ6^1,1"
    buf = io.StringIO()
    dump_csv(hermitian_adjacency(g, ETA_SIXTH, NUMERIC), buf)
    row = buf.getvalue().splitlines()[0].split(",")
    assert len(row) == 6 and float(row[2]) == pytest.approx(0.5)

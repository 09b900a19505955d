from fractions import Fraction

import pytest

from opencomb.closed import (ClosedTable, closed_string_fill, closed_sum, closed_total_amplitude,
                             extract_closed)
from opencomb.enumeration import enumerate_closed_trivalent
from opencomb.ratfunc import RationalFunction

ROWS = [(0, 3), (0, 4), (1, 1), (1, 2), (1, 3)]


@pytest.fixture(scope="module")
def table():
    t = ClosedTable()
    for g, n in ROWS:
        t.update(extract_closed(g, n))
    return t


def test_base_values(table):
    assert table[(0, (0, 0, 0))] == 1
    assert table[(1, (1,))] == Fraction(1, 24)
    assert table[(0, (1, 0, 0, 0))] == 1


def test_known_genus_one_values(table):
    assert table[(1, (1, 1))] == Fraction(1, 24)
    assert table[(1, (2, 0))] == Fraction(1, 24)
    assert table[(1, (1, 1, 1))] == Fraction(1, 12)


def string_residuals(t):
    out = []
    for (g, a), v in t.entries.items():
        if 0 not in a or 2 * g - 2 + len(a) - 1 <= 0:
            continue
        rest = list(a)
        rest.remove(0)
        rhs = Fraction(0)
        for j, x in enumerate(rest):
            if x:
                b = rest[:j] + [x - 1] + rest[j + 1:]
                rhs += t.get(g, b, Fraction(0))
        out.append(((g, a), v, rhs))
    return out


def test_string_equation(table):
    res = string_residuals(table)
    assert len(res) >= 4
    for key, lhs, rhs in res:
        assert lhs == rhs, key


def test_string_fill_agrees_with_graph_sum(table):
    seed = ClosedTable({k: v for k, v in table.entries.items() if k[0] == 0 and len(k[1]) == 3})
    filled = closed_string_fill(seed, 0, 4)
    assert filled[(0, (1, 0, 0, 0))] == table[(0, (1, 0, 0, 0))]
    seed1 = ClosedTable({(1, (1,)): Fraction(1, 24)})
    filled1 = closed_string_fill(seed1, 1, 3)
    assert filled1[(1, (2, 0))] == table[(1, (2, 0))]
    assert filled1[(1, (3, 0, 0))] == table[(1, (3, 0, 0))]


def test_exponent_audit():
    for g, n in ROWS:
        for gr, _ in enumerate_closed_trivalent(g, n):
            assert 3 * len(gr.vertices) == gr.n_half


def test_amplitude_reduces_to_laurent():
    lam = RationalFunction.lam(1, 1)
    assert closed_total_amplitude(1, 1) == Fraction(1, 24) / lam ** 3
    assert closed_total_amplitude(0, 3).laurent_terms() == {(-1, -1, -1): 1}


def test_unstable_rejected():
    with pytest.raises(ValueError):
        closed_sum(0, 2)


def test_routes_agree():
    for g, n in ROWS:
        assert extract_closed(g, n, "symbolic").entries == extract_closed(g, n, "linear").entries


def test_json_round_trip(table):
    assert ClosedTable.from_json(table.to_json()).entries == table.entries
    assert "⟨τ1⟩₁ᶜ = 1/24" in table.to_text()

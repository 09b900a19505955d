import math
from fractions import Fraction

import pytest

from _oracles import brute_automorphisms
from opencomb.enumeration import (GraphCatalog, brute_force_open, catalog_signatures,
                                  enumerate_closed_trivalent, enumerate_open_trivalent,
                                  enumerate_shapes, labeling_orbits, odd_subset)
from opencomb.errors import ResourceLimitError
from opencomb.ribbon import automorphisms, canonical_code, stats


def codes(cat):
    return [canonical_code(e.graph) for e in cat]


# -- examples --------------------------------------------------------------------

def test_ghost_signature_has_two_cyclic_orders():
    cat = enumerate_open_trivalent(0, 3, 0)
    assert len(cat) == 2
    assert [e.aut for e in cat] == [1, 1]
    assert all(e.graph.is_ghost for e in cat)


def test_disk_with_one_point():
    cat = enumerate_open_trivalent(0, 1, 1)
    assert len(cat) == 1
    g = cat.entries[0].graph
    assert g.n_half == 2 and len(g.faces) == 1 and len(g.marked_vertices) == 1


def test_five_points_one_face():
    cat = enumerate_open_trivalent(0, 5, 1)
    assert len(cat) == 24
    assert len(odd_subset(cat)) == 24


def test_closed_examples():
    assert len(enumerate_closed_trivalent(0, 1)) == 0
    cat = enumerate_closed_trivalent(0, 3)
    assert len(cat) >= 1
    for e in cat:
        s = stats(e.graph)
        assert s.genus == 0 and s.faces == 3 and s.boundaries == 0
        assert 3 * len(e.graph.vertices) == e.graph.n_half
    assert all(stats(e.graph).genus == 1 for e in enumerate_closed_trivalent(1, 1))


def test_unstable_and_invalid_signatures():
    with pytest.raises(ValueError):
        enumerate_open_trivalent(0, 1, 0)
    with pytest.raises(ValueError):
        enumerate_open_trivalent(-1, 3, 1)
    with pytest.raises(ValueError):
        enumerate_closed_trivalent(0, 0)


def test_no_faces_only_ghost():
    assert enumerate_shapes(0, 4, 0) == []
    assert enumerate_shapes(1, 1, 0) == []


# -- odd subset -------------------------------------------------------------------

def test_one_boundary_no_points_is_dropped():
    cat = enumerate_open_trivalent(1, 0, 1)
    assert len(cat) >= 1
    assert len(odd_subset(cat)) == 0


def test_single_point_per_boundary_kept():
    cat = enumerate_open_trivalent(1, 2, 1)
    for e in cat:
        pts = e.graph.points_on_boundary()
        if all(p == 1 for p in pts):
            assert e in odd_subset(cat).entries


def test_odd_subset_rejects_closed():
    with pytest.raises(ValueError):
        odd_subset(enumerate_closed_trivalent(0, 3))


@pytest.mark.parametrize("sig", list(catalog_signatures(6)), ids=str)
def test_parity_of_odd_subsets(sig):
    g, k, l = sig
    odd = odd_subset(enumerate_open_trivalent(g, k, l))
    if (g + k) % 2 == 0:
        assert len(odd) == 0
    for e in odd:
        assert all(p % 2 == 1 for p in e.graph.points_on_boundary())


# -- completeness against the brute-force generator ---------------------------

BRUTE_SIGS = [(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 3, 0), (1, 0, 1), (1, 1, 1),
              (0, 1, 2), (0, 0, 2), (0, 4, 1), (1, 2, 1), (0, 2, 2)]


@pytest.mark.parametrize("sig", BRUTE_SIGS, ids=str)
def test_agrees_with_brute_force(sig):
    fast = enumerate_open_trivalent(*sig)
    slow = brute_force_open(*sig)
    assert codes(fast) == codes(slow)
    assert [e.aut for e in fast] == [e.aut for e in slow]


@pytest.mark.parametrize("sig", [(0, 3), (1, 1), (0, 4), (1, 2)], ids=str)
def test_closed_agrees_with_brute_force(sig):
    g, n = sig
    fast = enumerate_closed_trivalent(g, n)
    slow = brute_force_open(g, 0, n, closed=True)
    assert codes(fast) == codes(slow)
    assert [e.aut for e in fast] == [e.aut for e in slow]


@pytest.mark.parametrize("sig", [(0, 3, 1), (1, 1, 1), (0, 1, 2), (1, 0, 1)], ids=str)
def test_catalog_invariants(sig):
    cat = enumerate_open_trivalent(*sig)
    cs = codes(cat)
    assert cs == sorted(cs) and len(set(cs)) == len(cs)
    for e in cat:
        assert e.aut >= 1
        if e.graph.n_half <= 8:
            assert e.aut == len(brute_automorphisms(e.graph))


# -- orbit-stabilizer ---------------------------------------------------------------

@pytest.mark.parametrize("sig", [(0, 3, 1), (0, 5, 1), (1, 1, 1), (0, 1, 2), (0, 2, 2), (1, 0, 2)], ids=str)
def test_orbit_stabilizer(sig):
    """Each shape spreads its k! l! labelings over orbits of size |Aut|/|Stab|."""
    g, k, l = sig
    total = Fraction(0)
    for shape, aut in enumerate_shapes(g, k, l):
        perms = automorphisms(shape)
        assert len(perms) == aut
        seen = 0
        for _lab, stab in labeling_orbits(shape, tuple(range(1, l + 1)) or None,
                                          tuple(range(1, k + 1)) or None, perms):
            assert aut % len(stab) == 0
            seen += aut // len(stab)
        assert seen == math.factorial(k) * math.factorial(l)
        total += Fraction(1, aut)
    # mass formula: labeled classes weighted by 1/|Aut| equal k! l! times the shape mass
    cat = enumerate_open_trivalent(g, k, l)
    assert sum(Fraction(1, e.aut) for e in cat) == total * math.factorial(k) * math.factorial(l)


# -- serialisation and caps -----------------------------------------------------------

@pytest.mark.parametrize("sig", [(0, 3, 0), (0, 3, 1), (1, 1, 1)], ids=str)
def test_jsonl_round_trip(sig):
    cat = enumerate_open_trivalent(*sig)
    text = cat.to_jsonl()
    back = GraphCatalog.from_jsonl(text)
    assert back.signature == cat.signature
    assert back.to_jsonl() == text
    assert codes(back) == codes(cat)


def test_closed_jsonl_round_trip():
    cat = enumerate_closed_trivalent(1, 1)
    assert GraphCatalog.from_jsonl(cat.to_jsonl()).to_jsonl() == cat.to_jsonl()


def test_resource_cap():
    with pytest.raises(ResourceLimitError) as exc:
        enumerate_open_trivalent(0, 5, 1, max_entries=10)
    assert exc.value.bound == 10
    with pytest.raises(ResourceLimitError):
        enumerate_open_trivalent(1, 3, 2, max_nodes=50)


def test_deterministic_output():
    a = enumerate_open_trivalent(1, 1, 2).to_jsonl()
    b = enumerate_open_trivalent(1, 1, 2).to_jsonl()
    assert a == b

import itertools
import json

import pytest
from hypothesis import given, strategies as st

from _oracles import brute_automorphisms, brute_isomorphic, compose
from opencomb.enumeration import enumerate_closed_trivalent, enumerate_open_trivalent, enumerate_shapes
from opencomb.errors import InvalidGraphError
from opencomb.ribbon import (HalfEdgeStructure, OpenTrivalentGraph, automorphism_count, automorphisms,
                             canonical_code, canonical_form, canonical_graph, faces, ghost, polygon, stats)

SMALL_SIGS = [(0, 1, 1), (0, 3, 0), (0, 3, 1), (0, 1, 2), (1, 0, 1), (1, 1, 1), (0, 2, 1), (0, 0, 2)]


def small_graphs():
    out = []
    for sig in SMALL_SIGS:
        out.extend(e.graph for e in enumerate_open_trivalent(*sig))
    for g, n in [(0, 3), (1, 1)]:
        out.extend(e.graph for e in enumerate_closed_trivalent(g, n))
    return out


GRAPHS = small_graphs()


# -- faces -------------------------------------------------------------------

def test_theta_graph_has_three_faces():
    h = HalfEdgeStructure((1, 2, 0, 4, 5, 3), (3, 5, 4, 0, 2, 1))
    fs = faces(h)
    assert len(fs) == 3
    assert sorted(x for f in fs for x in f) == list(range(6))


def test_one_vertex_loop_faces():
    # sigma2 is the identity here, so the planar loop bounds two cells
    h = HalfEdgeStructure((1, 0), (1, 0))
    assert faces(h) == [(0,), (1,)]


def test_disk_face_of_length_one():
    g = polygon([1])
    assert g.faces == [(1,)]
    assert g.boundary_cycles == [(0,)]


@pytest.mark.parametrize("gr", GRAPHS, ids=lambda g: f"n{g.n_half}")
def test_faces_partition_half_edges(gr):
    fs = faces(gr.halfedges)
    assert sorted(h for f in fs for h in f) == list(range(gr.n_half))
    s2 = gr.sigma2
    for f in fs:
        for i, h in enumerate(f):
            assert s2[h] == f[(i + 1) % len(f)]


# -- stats -------------------------------------------------------------------

def test_disk_stats():
    s = stats(polygon([1]))
    assert (s.genus, s.boundaries, s.internal_vertices, s.faces, s.boundary_points, s.edges) == (0, 1, 0, 1, 1, 1)


def test_ghost_stats():
    s = stats(ghost())
    assert (s.genus, s.boundaries, s.faces, s.boundary_points) == (0, 1, 0, 3)
    assert ghost().is_ghost and ghost().n_faces == 0


def test_two_boundaries_planar_gives_genus_one():
    gr = enumerate_open_trivalent(1, 1, 1).entries[0].graph
    s = stats(gr)
    assert s.boundaries == 2 and s.surface_genus == 0 and s.genus == 1


@pytest.mark.parametrize("gr", GRAPHS, ids=lambda g: f"n{g.n_half}")
def test_euler_characteristic(gr):
    s = stats(gr)
    v = len(gr.vertices)
    assert 2 * s.edges == gr.n_half
    if gr.is_closed:
        assert v - s.edges + s.faces == 2 - 2 * s.genus
    else:
        assert v - s.edges + s.faces + (1 if gr.is_ghost else 0) == 2 - 2 * s.surface_genus - s.boundaries
        assert s.surface_genus >= 0 and s.boundaries >= 1


# -- validation ----------------------------------------------------------------

def test_sigma1_must_be_fixed_point_free_involution():
    with pytest.raises(InvalidGraphError):
        HalfEdgeStructure((1, 0), (0, 1))
    with pytest.raises(InvalidGraphError):
        HalfEdgeStructure((0, 1, 2), (1, 2, 0))


def test_both_halves_boundary_rejected():
    with pytest.raises(InvalidGraphError):
        OpenTrivalentGraph.from_perms((1, 0), (1, 0), boundary_halves=(0, 1))


def test_bad_vertex_type_rejected():
    # a boundary vertex of degree 3 with two boundary halves
    with pytest.raises(InvalidGraphError):
        OpenTrivalentGraph.from_perms((1, 2, 0, 4, 5, 3), (3, 5, 4, 0, 2, 1), boundary_halves=(0, 1))


def test_disconnected_rejected():
    with pytest.raises(InvalidGraphError):
        OpenTrivalentGraph.from_perms((1, 0, 3, 2), (1, 0, 3, 2), boundary_halves=(0, 2))


def test_ghost_requires_triangle():
    with pytest.raises(InvalidGraphError):
        polygon([1, 2], face_label=None)
    with pytest.raises(InvalidGraphError):
        ghost((1, 2))


def test_duplicate_labels_rejected():
    g = polygon([1, 2, 3])
    with pytest.raises(InvalidGraphError):
        OpenTrivalentGraph(g.halfedges, g.boundary_halves, {0: 1}, {0: 1, 1: 1, 2: 2})
    with pytest.raises(InvalidGraphError):
        OpenTrivalentGraph(g.halfedges, g.boundary_halves, {0: 1}, {0: 1, 1: 2, 9: 3})


# -- JSON ----------------------------------------------------------------------

@pytest.mark.parametrize("gr", GRAPHS, ids=lambda g: f"n{g.n_half}")
def test_json_round_trip(gr):
    d = json.loads(gr.to_json())
    assert set(d) >= {"n_half", "sigma0", "sigma1", "boundary_halves", "face_labels", "point_labels"}
    back = OpenTrivalentGraph.from_dict(d)
    assert back.to_json() == gr.to_json()
    assert canonical_code(back) == canonical_code(gr)


# -- canonical form and automorphisms --------------------------------------------

@st.composite
def relabeled(draw):
    gr = draw(st.sampled_from(GRAPHS))
    perm = draw(st.permutations(range(gr.n_half)))
    return gr, list(perm)


@given(relabeled())
def test_canonical_form_relabel_invariant(case):
    gr, perm = case
    other = gr.relabel_halves(perm)
    assert canonical_code(other) == canonical_code(gr)
    assert automorphism_count(other) == automorphism_count(gr)
    assert stats(other) == stats(gr)
    assert stats(canonical_graph(gr)) == stats(gr)


def test_ghost_cyclic_orders_differ():
    a, b = ghost((1, 2, 3)), ghost((1, 3, 2))
    assert canonical_code(a) != canonical_code(b)
    assert not brute_isomorphic(a, b)
    assert canonical_code(ghost((2, 3, 1))) == canonical_code(a)


def test_mirror_of_chiral_graph_differs():
    a = polygon([1, 2, 3])
    m = a.mirror()
    assert canonical_code(a) != canonical_code(m)
    assert not brute_isomorphic(a, m)


@pytest.mark.parametrize("gr", [g for g in GRAPHS if g.n_half <= 8], ids=lambda g: f"n{g.n_half}")
def test_automorphisms_match_brute_force(gr):
    auts = automorphisms(gr)
    assert auts == brute_automorphisms(gr)
    ident = tuple(range(gr.n_half))
    assert ident in auts
    group = set(auts)
    for p, q in itertools.product(auts, repeat=2):
        assert compose(p, q) in group


def test_labeled_ghost_is_rigid():
    assert automorphisms(ghost()) == [tuple(range(6))]


def test_closed_theta_with_labeled_faces():
    h = HalfEdgeStructure((1, 2, 0, 4, 5, 3), (3, 5, 4, 0, 2, 1))
    g = OpenTrivalentGraph(h, frozenset(), {0: 1, 1: 2, 2: 3})
    n = automorphism_count(g)
    assert 2 % n == 0
    assert n == len(brute_automorphisms(g))


def test_label_swap_changes_code_iff_not_isomorphic():
    """Exhaustive over point labelings of small shapes with n_half <= 10."""
    for sig in [(0, 3, 1), (0, 3, 0), (1, 1, 1), (0, 1, 2)]:
        for shape, _ in enumerate_shapes(*sig):
            if shape.n_half > 10:
                continue
            labeled = []
            marked = shape.marked_vertices
            nf = len(shape.faces) if not shape.is_ghost else 0
            for pl in itertools.permutations(range(1, len(marked) + 1)):
                for fl in itertools.permutations(range(1, nf + 1)):
                    labeled.append(shape.with_labels(face_labels=dict(enumerate(fl)),
                                                     point_labels=dict(zip(marked, pl))))
            for a, b in itertools.combinations(labeled, 2):
                if a.n_half <= 8:
                    assert (canonical_code(a) == canonical_code(b)) == brute_isomorphic(a, b)


def test_canonical_form_returns_bijection():
    for gr in GRAPHS:
        code, relabel = canonical_form(gr)
        assert sorted(relabel) == list(range(gr.n_half))
        assert canonical_code(gr.relabel_halves(relabel)) == code

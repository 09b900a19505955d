"""Kasteleyn orientations on smooth trivalent open graphs.

Assignments live on the non-boundary half-edges (kinds X and I) and are
stored as integer bit masks over that index set.  Boundary half-edges carry
the value 0 implicitly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidGraphError, VerificationError
from .ribbon import KIND_B, KIND_I, KIND_X, VERTEX_MARKED, OpenTrivalentGraph, canonical_form, stats


# ---------------------------------------------------------------------------
# GF(2) linear algebra on int bit masks
# ---------------------------------------------------------------------------

def _echelon(rows: Iterable[tuple[int, int]]):
    """Reduced echelon form of (mask, rhs) rows; returns pivots or None if inconsistent."""
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in rows:
        for bit, (pm, pr) in pivots.items():
            if mask >> bit & 1:
                mask ^= pm
                rhs ^= pr
        if not mask:
            if rhs:
                return None
            continue
        bit = mask.bit_length() - 1
        for b, (pm, pr) in list(pivots.items()):
            if pm >> bit & 1:
                pivots[b] = (pm ^ mask, pr ^ rhs)
        pivots[bit] = (mask, rhs)
    return pivots


def _span_basis(vectors: Iterable[int]) -> list[int]:
    basis: dict[int, int] = {}
    for v in vectors:
        for bit in sorted(basis, reverse=True):
            if v >> bit & 1:
                v ^= basis[bit]
        if v:
            basis[v.bit_length() - 1] = v
    return [basis[b] for b in sorted(basis)]


def _reduce(v: int, basis: dict[int, int]) -> int:
    for bit in sorted(basis, reverse=True):
        if v >> bit & 1:
            v ^= basis[bit]
    return v


# ---------------------------------------------------------------------------
# orientations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KasteleynOrientation:
    graph: OpenTrivalentGraph
    bits: int

    @property
    def index(self) -> dict[int, int]:
        return half_index(self.graph)

    def __call__(self, h: int) -> int:
        if self.graph.kinds[h] == KIND_B:
            return 0
        return self.bits >> half_index(self.graph)[h] & 1

    def values(self) -> dict[int, int]:
        return {h: self(h) for h in range(self.graph.n_half)}


def half_index(g: OpenTrivalentGraph) -> dict[int, int]:
    kinds = g.kinds
    return {h: i for i, h in enumerate(h for h in range(g.n_half) if kinds[h] != KIND_B)}


def _check_graph(g: OpenTrivalentGraph) -> None:
    if g.is_closed:
        raise InvalidGraphError("Kasteleyn orientations need an open graph")
    if not g.halfedges.is_connected():
        raise InvalidGraphError("graph is not connected")


def kasteleyn_system(g: OpenTrivalentGraph) -> list[tuple[int, int]]:
    """Constraint rows (mask, rhs) over the non-boundary half-edges."""
    idx = half_index(g)
    kinds, s1 = g.kinds, g.sigma1
    rows = []
    for h, i in idx.items():
        if kinds[h] == KIND_X:
            rows.append((1 << i, 1))
        elif kinds[h] == KIND_I and h < s1[h]:
            rows.append(((1 << i) | (1 << idx[s1[h]]), 1))
    for face in g.faces:
        mask = 0
        for h in face:
            mask |= 1 << idx[h]
        rows.append((mask, 1))
    return rows


def flip_vector(g: OpenTrivalentGraph, v: int) -> int:
    """Toggle set of the vertex flip at internal vertex ``v``."""
    idx = half_index(g)
    vo, s1 = g.vertex_of, g.sigma1
    out = 0
    for h, i in idx.items():
        if (vo[h] == v) != (vo[s1[h]] == v):
            out |= 1 << i
    return out


def flip_vectors(g: OpenTrivalentGraph) -> list[int]:
    return [flip_vector(g, v) for v in g.internal_vertices]


@dataclass(frozen=True)
class SolutionSpace:
    """Affine GF(2) solution set ``particular + span(null_basis)``."""

    graph: OpenTrivalentGraph
    particular: int | None
    null_basis: tuple[int, ...]

    @property
    def size(self) -> int:
        return 0 if self.particular is None else 2 ** len(self.null_basis)

    def __iter__(self):
        if self.particular is None:
            return
        n = len(self.null_basis)
        for sel in range(2 ** n):
            v = self.particular
            for j in range(n):
                if sel >> j & 1:
                    v ^= self.null_basis[j]
            yield KasteleynOrientation(self.graph, v)


def solution_space(g: OpenTrivalentGraph) -> SolutionSpace:
    _check_graph(g)
    n = len(half_index(g))
    piv = _echelon(kasteleyn_system(g))
    if piv is None:
        return SolutionSpace(g, None, ())
    particular = 0
    for bit, (_, rhs) in piv.items():
        if rhs:
            particular |= 1 << bit
    null = []
    for f in range(n):
        if f in piv:
            continue
        v = 1 << f
        for bit, (mask, _) in piv.items():
            if mask >> f & 1:
                v |= 1 << bit
        null.append(v)
    return SolutionSpace(g, particular, tuple(null))


def solve_kasteleyn(g: OpenTrivalentGraph) -> list[KasteleynOrientation]:
    """Every Kasteleyn orientation of ``g``."""
    return list(solution_space(g))


def is_kasteleyn(K: KasteleynOrientation) -> bool:
    return all(bin(K.bits & mask).count("1") % 2 == rhs for mask, rhs in kasteleyn_system(K.graph))


def flip_quotient(g: OpenTrivalentGraph, solutions: Sequence[KasteleynOrientation]) -> list[list[KasteleynOrientation]]:
    """Orbits of vertex flips by exhaustive closure; all must have size 2^|V^I|."""
    flips = flip_vectors(g)
    remaining = {K.bits for K in solutions}
    orbits = []
    expected = 2 ** len(g.internal_vertices)
    for start in sorted(remaining):
        if start not in remaining:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for f in flips:
                y = x ^ f
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        if not orbit <= remaining:
            raise VerificationError("vertex flip left the solution set")
        if len(orbit) != expected:
            raise VerificationError(f"flip orbit of size {len(orbit)}, expected {expected}")
        remaining -= orbit
        orbits.append([KasteleynOrientation(g, b) for b in sorted(orbit)])
    return orbits


def class_representatives(space: SolutionSpace) -> list[KasteleynOrientation]:
    """One orientation per flip class, via a complement of the flip span."""
    if space.particular is None:
        return []
    g = space.graph
    fb = _span_basis(flip_vectors(g))
    if len(fb) != len(g.internal_vertices):
        raise VerificationError("vertex flips are linearly dependent")
    basis = {v.bit_length() - 1: v for v in fb}
    comp = []
    for v in space.null_basis:
        r = _reduce(v, basis)
        if r:
            basis[r.bit_length() - 1] = r
            comp.append(r)
    if len(fb) + len(comp) != len(space.null_basis):
        raise VerificationError("flips do not lie in the solution space")
    reps = []
    for sel in range(2 ** len(comp)):
        v = space.particular
        for j, c in enumerate(comp):
            if sel >> j & 1:
                v ^= c
        reps.append(KasteleynOrientation(g, v))
    return reps


# ---------------------------------------------------------------------------
# path invariants
# ---------------------------------------------------------------------------

def is_bad_turn(g: OpenTrivalentGraph, h_prev: int, h_next: int) -> bool:
    """Turn from directed half-edge ``h_prev`` into ``h_next`` at their common vertex.

    Leaving the rotation successor of the arrival half is bad; at a boundary
    marked point the turn is bad exactly when arriving along a boundary half.
    """
    s0, s1 = g.sigma0, g.sigma1
    a = s1[h_prev]
    if g.vertex_of[h_next] != g.vertex_of[a]:
        raise InvalidGraphError(f"half-edges {h_prev} and {h_next} are not consecutive")
    if h_next == a:
        raise InvalidGraphError("path backtracks")
    if g.vertex_types[g.vertex_of[a]] == VERTEX_MARKED:
        return g.kinds[h_prev] == KIND_B
    return h_next == s0[a]


def bad_turns(g: OpenTrivalentGraph, path: Sequence[int], closed: bool) -> int:
    n = len(path)
    pairs = [(path[i], path[i + 1]) for i in range(n - 1)]
    if closed:
        pairs.append((path[-1], path[0]))
    return sum(is_bad_turn(g, a, b) for a, b in pairs)


def q_of_cycle(K: KasteleynOrientation, path: Sequence[int]) -> int:
    """q(gamma) = 1 + sum K(h_i) + BT(gamma) for a closed non-backtracking path."""
    if not path:
        raise ValueError("empty path")
    return (1 + sum(K(h) for h in path) + bad_turns(K.graph, path, True)) % 2


def Q_of_path(K: KasteleynOrientation, path: Sequence[int]) -> int:
    """Same formula for an open path between boundary edges; turns at interior vertices only."""
    if not path:
        raise ValueError("empty path")
    return (1 + sum(K(h) for h in path) + bad_turns(K.graph, path, False)) % 2


def reverse_path(g: OpenTrivalentGraph, path: Sequence[int]) -> list[int]:
    s1 = g.sigma1
    return [s1[h] for h in reversed(path)]


def face_path(g: OpenTrivalentGraph, face: int) -> list[int]:
    return list(g.faces[face])


def boundary_path(g: OpenTrivalentGraph, b: int) -> list[int]:
    """The face-side half-edges along boundary ``b``, in traversal order."""
    s0, s1 = g.sigma0, g.sigma1
    start = s1[g.boundary_cycles[b][0]]
    out = [start]
    h = s0[s1[start]]
    while h != start:
        out.append(h)
        h = s0[s1[h]]
    return out


# ---------------------------------------------------------------------------
# signs and c_spin
# ---------------------------------------------------------------------------

def reference_order(g: OpenTrivalentGraph) -> list[tuple[int, int]]:
    """Edges sorted by their smallest canonical half-edge number."""
    _, relabel = canonical_form(g)
    s1 = g.sigma1
    edges = {tuple(sorted((h, s1[h]))) for h in range(g.n_half)}
    return sorted(edges, key=lambda e: min(relabel[e[0]], relabel[e[1]]))


def _ordered_faces(g: OpenTrivalentGraph) -> list[tuple[int, ...]]:
    if g.face_labels:
        return [g.faces[i] for i in sorted(range(len(g.faces)), key=lambda i: g.face_labels[i])]
    return list(g.faces)


def orientation_listing(K: KasteleynOrientation) -> list[tuple[int, int]]:
    """Edges in the order of the K = 1 half-edges of faces 1..l."""
    g = K.graph
    s1 = g.sigma1
    out = []
    for face in _ordered_faces(g):
        ones = [h for h in face if K(h)]
        if len(ones) % 2 != 1:
            raise VerificationError("face with an even number of K = 1 half-edges")
        out.extend(tuple(sorted((h, s1[h]))) for h in ones)
    return out


def _parity(seq: Sequence[int]) -> int:
    seen = [False] * len(seq)
    swaps = 0
    for i in range(len(seq)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = seq[j]
            length += 1
        swaps += length - 1
    return swaps % 2


def orientation_sign(K: KasteleynOrientation, reference: Sequence[tuple[int, int]] | None = None) -> int:
    g = K.graph
    if reference is None:
        reference = reference_order(g)
    listing = orientation_listing(K)
    if g.is_ghost:
        return 1
    if sorted(listing) != sorted(reference):
        raise VerificationError("orientation listing does not cover every edge exactly once")
    pos = {e: i for i, e in enumerate(reference)}
    return -1 if _parity([pos[e] for e in listing]) else 1


@dataclass(frozen=True)
class SignedClass:
    representative: KasteleynOrientation
    sign: int


@dataclass(frozen=True)
class SignedClassTable:
    graph: OpenTrivalentGraph
    classes: tuple[SignedClass, ...]
    reference_order: tuple[tuple[int, int], ...]
    orbit_size: int
    n_solutions: int

    @property
    def signed_sum(self) -> int:
        return sum(c.sign for c in self.classes)

    @property
    def c_spin(self) -> int:
        return abs(self.signed_sum)

    @property
    def expected(self) -> int:
        """2^{(g+b-1)/2} for odd graphs, 0 otherwise."""
        if not self.graph.is_odd():
            return 0
        st = stats(self.graph)
        return 2 ** ((st.genus + st.boundaries - 1) // 2)

    @property
    def match(self) -> bool:
        return self.c_spin == self.expected

    def record(self) -> dict:
        st = stats(self.graph)
        return {
            "graph": self.graph.to_dict(),
            "genus": st.genus,
            "boundaries": st.boundaries,
            "internal_vertices": st.internal_vertices,
            "solutions": self.n_solutions,
            "orbit_size": self.orbit_size,
            "classes": [{"bits": c.representative.bits, "sign": c.sign} for c in self.classes],
            "c_spin": self.c_spin,
            "expected": self.expected,
            "match": self.match,
        }

    def to_json(self) -> str:
        return json.dumps(self.record(), sort_keys=True) + "\n"


def class_signs(g: OpenTrivalentGraph, check_orbits: bool = False) -> SignedClassTable:
    """Signed flip classes; ``check_orbits`` verifies sign constancy on whole orbits."""
    space = solution_space(g)
    reps = class_representatives(space)
    ref = tuple(reference_order(g))
    flips = flip_vectors(g)
    classes = []
    for K in reps:
        s = orientation_sign(K, ref)
        members = [K.bits]
        if check_orbits:
            seen = {K.bits}
            frontier = [K.bits]
            while frontier:
                x = frontier.pop()
                for f in flips:
                    if x ^ f not in seen:
                        seen.add(x ^ f)
                        frontier.append(x ^ f)
            members = sorted(seen)
        else:
            members += [K.bits ^ f for f in flips]
        for b in members:
            if orientation_sign(KasteleynOrientation(g, b), ref) != s:
                raise VerificationError("orientation sign differs within a flip class")
        classes.append(SignedClass(K, s))
    return SignedClassTable(g, tuple(classes), ref, 2 ** len(flips), space.size)


def c_spin(g: OpenTrivalentGraph) -> int:
    return class_signs(g).c_spin

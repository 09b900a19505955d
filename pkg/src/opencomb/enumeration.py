"""Generation of smooth trivalent open ribbon graphs and closed trivalent graphs.

Unlabeled shapes come from a rooted search that glues one half-edge at a
time, always completing the smallest open half-edge first.  A finished map
is kept only when its root gives the minimal breadth-first code among all
admissible roots (canonical augmentation), so every shape appears once and
the number of minimal roots is its automorphism count.  Labeled catalogs are
orbits of labelings under those automorphisms.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import InvalidGraphError, ResourceLimitError
from .ribbon import (KIND_B, KIND_I, KIND_X, HalfEdgeStructure, OpenTrivalentGraph,
                     automorphisms, canonical_code, canonical_graph, ghost, trace_code)

DEFAULT_MAX_ENTRIES = 10 ** 6
DEFAULT_MAX_NODES = 5 * 10 ** 7

_PARTNER = {KIND_B: KIND_X, KIND_X: KIND_B, KIND_I: KIND_I}

# rotations of the vertex patterns (X,I,B), (X,B), (I,I,I) by the kind of their first half
_ENTRIES = {
    KIND_X: (("U", (KIND_X, KIND_I, KIND_B)), ("M", (KIND_X, KIND_B))),
    KIND_I: (("U", (KIND_I, KIND_B, KIND_X)), ("T", (KIND_I, KIND_I, KIND_I))),
    KIND_B: (("U", (KIND_B, KIND_X, KIND_I)), ("M", (KIND_B, KIND_X))),
}


class CatalogEntry(NamedTuple):
    graph: OpenTrivalentGraph
    aut: int


@dataclass(frozen=True)
class GraphCatalog:
    """Pairwise non-isomorphic graphs of one signature with their |Aut|."""

    g: int
    k: int
    l: int
    closed: bool
    odd: bool
    entries: tuple[CatalogEntry, ...]

    @property
    def signature(self) -> tuple[int, int, int, bool, bool]:
        return (self.g, self.k, self.l, self.closed, self.odd)

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    def to_jsonl(self) -> str:
        head = {"signature": {"g": self.g, "k": self.k, "l": self.l,
                              "closed": self.closed, "odd": self.odd}}
        lines = [json.dumps(head, sort_keys=True, separators=(",", ":"))]
        for e in self.entries:
            d = e.graph.to_dict()
            d["aut"] = e.aut
            lines.append(json.dumps(d, sort_keys=True, separators=(",", ":")))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "GraphCatalog":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise InvalidGraphError("empty catalog file")
        sig = json.loads(lines[0])["signature"]
        entries = []
        for ln in lines[1:]:
            d = json.loads(ln)
            entries.append(CatalogEntry(OpenTrivalentGraph.from_dict(d), int(d["aut"])))
        return cls(sig["g"], sig["k"], sig["l"], bool(sig["closed"]), bool(sig["odd"]),
                   tuple(entries))


# ---------------------------------------------------------------------------
# unlabeled shapes
# ---------------------------------------------------------------------------

def trivalent_count(g: int, l: int, closed: bool = False) -> int:
    """Number of degree-3 vertices forced by the Euler characteristic."""
    return 4 * g - 4 + 2 * l if closed else 2 * g - 2 + 2 * l


class _Search:
    def __init__(self, k: int, n_tri: int, l: int, closed: bool, max_nodes: int):
        self.k = k
        self.n_tri = n_tri
        self.l = l
        self.closed = closed
        self.max_nodes = max_nodes
        self.nodes = 0
        self.s0: list[int] = []
        self.s1: list[int] = []
        self.kind: list[int] = []
        self.out: list[tuple[OpenTrivalentGraph, int]] = []

    def add_vertex(self, pattern):
        n = len(self.s0)
        d = len(pattern)
        for i, kd in enumerate(pattern):
            self.s0.append(n + (i + 1) % d)
            self.s1.append(-1)
            self.kind.append(kd)
        return n

    def pop_vertex(self, d):
        del self.s0[-d:]
        del self.s1[-d:]
        del self.kind[-d:]

    def run(self):
        if self.closed:
            if self.n_tri < 1:
                return
            self.add_vertex((KIND_I,) * 3)
            self.rec(self.k, self.n_tri - 1, 0)
        elif self.k >= 1:
            self.add_vertex((KIND_B, KIND_X))
            self.rec(self.k - 1, self.n_tri, 0)
        elif self.n_tri >= 1:
            self.add_vertex((KIND_B, KIND_X, KIND_I))
            self.rec(0, self.n_tri - 1, 0)

    def rec(self, rem_m: int, rem_t: int, ptr: int):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ResourceLimitError("graph search nodes", self.max_nodes)
        s1 = self.s1
        n = len(s1)
        while ptr < n and s1[ptr] >= 0:
            ptr += 1
        if ptr == n:
            if rem_m == 0 and rem_t == 0:
                self.leaf()
            return
        h = ptr
        need = _PARTNER[self.kind[h]]
        kind = self.kind
        for j in range(h + 1, n):
            if s1[j] < 0 and kind[j] == need:
                s1[h] = j
                s1[j] = h
                self.rec(rem_m, rem_t, h + 1)
                s1[h] = -1
                s1[j] = -1
        for vt, pattern in _ENTRIES[need]:
            if vt == "M":
                if rem_m == 0:
                    continue
                nm, nt = rem_m - 1, rem_t
            else:
                if rem_t == 0 or (vt == "U" and self.closed):
                    continue
                nm, nt = rem_m, rem_t - 1
            v = self.add_vertex(pattern)
            s1[h] = v
            s1[v] = h
            self.rec(nm, nt, h + 1)
            s1[h] = -1
            self.pop_vertex(len(pattern))

    def leaf(self):
        s0, s1, kind = self.s0, self.s1, self.kind
        n = len(s0)
        inv0 = [0] * n
        for i, p in enumerate(s0):
            inv0[p] = i
        s2 = [inv0[s1[h]] for h in range(n)]
        seen = [False] * n
        nf = 0
        for st in range(n):
            if seen[st]:
                continue
            h = st
            while not seen[h]:
                seen[h] = True
                h = s2[h]
            if kind[st] != KIND_B:
                nf += 1
        if nf != self.l:
            return
        if self.closed:
            roots = range(1, n)
        elif self.k >= 1:
            roots = [h for h in range(1, n) if kind[h] == KIND_B and len_vertex(s0, h) == 2]
        else:
            roots = [h for h in range(1, n) if kind[h] == KIND_B]
        base, _ = trace_code(0, s0, s1, kind)
        aut = 1
        for r in roots:
            code, _ = trace_code(r, s0, s1, kind, base)
            if code is None:
                continue
            if code < base:
                return
            aut += 1
        hb = frozenset(h for h in range(n) if kind[h] == KIND_B)
        graph = OpenTrivalentGraph(HalfEdgeStructure(tuple(s0), tuple(s1)), hb, check=False)
        self.out.append((graph, aut))


def len_vertex(s0: Sequence[int], h: int) -> int:
    d = 1
    x = s0[h]
    while x != h:
        x = s0[x]
        d += 1
    return d


@lru_cache(maxsize=None)
def _shapes_cached(g, k, l, closed, max_nodes):
    if closed:
        n_tri = trivalent_count(g, l, True)
        if k or n_tri < 1 or 2 * g - 2 + l <= 0:
            return ()
    else:
        if l == 0:
            if (g, k) == (0, 3):
                gh = ghost((None, None, None))
                return ((gh, 3),)
            return ()
        n_tri = trivalent_count(g, l)
        if n_tri < 0:
            return ()
    s = _Search(k, n_tri, l, closed, max_nodes)
    s.run()
    shapes = []
    for graph, aut in s.out:
        # canonical relabeling makes the output independent of search order
        cg = canonical_graph(graph)
        shapes.append((canonical_code(cg), cg, aut))
    shapes.sort(key=lambda t: t[0])
    return tuple((cg, aut) for _, cg, aut in shapes)


def enumerate_shapes(g: int, k: int, l: int, closed: bool = False,
                     max_nodes: int = DEFAULT_MAX_NODES) -> list[tuple[OpenTrivalentGraph, int]]:
    """Unlabeled shapes (faces and points unlabeled) with automorphism counts.

    For ``l = 0`` only the ghost shape for ``(g, k) = (0, 3)`` exists.
    """
    if min(g, k, l) < 0:
        raise ValueError("g, k, l must be nonnegative")
    return list(_shapes_cached(g, k, l, closed, max_nodes))


# ---------------------------------------------------------------------------
# labelings
# ---------------------------------------------------------------------------

def _induced_maps(graph: OpenTrivalentGraph, perms):
    """Face and marked-vertex permutations induced by half-edge automorphisms."""
    faces = graph.faces if not graph.is_ghost else []
    face_of = graph.face_of
    marked = graph.marked_vertices
    pos = {v: i for i, v in enumerate(marked)}
    vo = graph.vertex_of
    out = []
    for phi in perms:
        fmap = tuple(face_of[phi[f[0]]] for f in faces)
        vmap = tuple(pos[vo[phi[graph.vertices[v][0]]]] for v in marked)
        out.append((fmap, vmap))
    return out


def _apply(lab: Sequence[int], mp: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(lab)
    for i, x in enumerate(lab):
        out[mp[i]] = x
    return tuple(out)


def labeling_orbits(graph: OpenTrivalentGraph, face_labels: Sequence[int] | None,
                    point_labels: Sequence[int] | None, perms=None):
    """Orbit representatives of labelings under the automorphisms of ``graph``.

    ``face_labels`` (resp. ``point_labels``) is the label multiset to distribute
    over faces (resp. marked vertices); ``None`` leaves that part unlabeled.
    Yields ``(labeled graph, residual automorphism perms)``.
    """
    if perms is None:
        perms = automorphisms(graph)
    maps = _induced_maps(graph, perms)
    faces_n = 0 if graph.is_ghost else len(graph.faces)
    marked = graph.marked_vertices
    f_opts = [()] if face_labels is None else sorted(set(itertools.permutations(face_labels)))
    p_opts = [()] if point_labels is None else sorted(set(itertools.permutations(point_labels)))
    if face_labels is not None and len(face_labels) != faces_n:
        raise ValueError("face label count does not match faces")
    if point_labels is not None and len(point_labels) != len(marked):
        raise ValueError("point label count does not match marked points")
    for fl in f_opts:
        for pl in p_opts:
            key = (fl, pl)
            stab = []
            minimal = True
            for phi, (fmap, vmap) in zip(perms, maps):
                img = (_apply(fl, fmap) if fl else (), _apply(pl, vmap) if pl else ())
                if img < key:
                    minimal = False
                    break
                if img == key:
                    stab.append(phi)
            if not minimal:
                continue
            fdict = {i: lab for i, lab in enumerate(fl)}
            pdict = {marked[i]: lab for i, lab in enumerate(pl)}
            yield graph.with_labels(fdict, pdict), stab


def _catalog_from_shapes(g, k, l, closed, shapes, max_entries):
    entries = []
    for shape, _aut in shapes:
        perms = automorphisms(shape)
        fls = tuple(range(1, l + 1)) if l else None
        pls = tuple(range(1, k + 1)) if k else None
        for lab, stab in labeling_orbits(shape, fls, pls, perms):
            entries.append((canonical_code(lab), lab, len(stab)))
            if len(entries) > max_entries:
                raise ResourceLimitError("catalog entries", max_entries)
    entries.sort(key=lambda t: t[0])
    return GraphCatalog(g, k, l, closed, False,
                        tuple(CatalogEntry(gr, a) for _, gr, a in entries))


def enumerate_open_trivalent(g: int, k: int, l: int, max_entries: int = DEFAULT_MAX_ENTRIES,
                             max_nodes: int = DEFAULT_MAX_NODES) -> GraphCatalog:
    """All smooth trivalent (g, k, l)-graphs with faces labeled [l] and points [k]."""
    if min(g, k, l) < 0 or 2 * g - 2 + k + 2 * l <= 0:
        raise ValueError(f"unstable signature (g,k,l)=({g},{k},{l})")
    shapes = enumerate_shapes(g, k, l, False, max_nodes)
    return _catalog_from_shapes(g, k, l, False, shapes, max_entries)


def enumerate_closed_trivalent(g: int, n: int, max_entries: int = DEFAULT_MAX_ENTRIES,
                               max_nodes: int = DEFAULT_MAX_NODES) -> GraphCatalog:
    """All closed trivalent genus-g ribbon graphs with n labeled faces.

    Unstable signatures have no trivalent graphs and give an empty catalog.
    """
    if g < 0 or n < 1:
        raise ValueError(f"invalid closed signature (g,n)=({g},{n})")
    if 2 * g - 2 + n <= 0:
        return GraphCatalog(g, 0, n, True, False, ())
    shapes = enumerate_shapes(g, 0, n, True, max_nodes)
    return _catalog_from_shapes(g, 0, n, True, shapes, max_entries)


def odd_subset(c: GraphCatalog) -> GraphCatalog:
    """Graphs whose every boundary circle carries an odd number of marked points."""
    if c.closed:
        raise ValueError("odd_subset needs an open catalog")
    keep = tuple(e for e in c.entries if e.graph.is_odd())
    return GraphCatalog(c.g, c.k, c.l, False, True, keep)


@lru_cache(maxsize=None)
def face_labeled_shapes(g: int, k: int, labels: tuple[int, ...], odd: bool = True):
    """Shapes with faces labeled by ``labels`` and unlabeled points.

    Returns ``(graph, residual automorphisms)`` pairs; used to build nodal
    components.
    """
    out = []
    for shape, _ in enumerate_shapes(g, k, len(labels)):
        if odd and not shape.is_odd():
            continue
        fl = labels if labels else None
        for lab, stab in labeling_orbits(shape, fl, None):
            out.append((lab, tuple(stab)))
    return tuple(out)


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

def _matchings(items: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in _matchings(rest):
            yield [(a, items[i])] + m


def brute_force_open(g: int, k: int, l: int, closed: bool = False) -> GraphCatalog:
    """Independent labeled-then-quotient generator for small signatures.

    Fixes the vertex rotations, runs over every compatible edge pairing,
    filters by connectivity and face count, labels in every way and
    deduplicates by canonical code.  Automorphisms are counted by direct
    propagation rather than by code minimisation.
    """
    if not closed and l == 0:
        if (g, k) != (0, 3):
            return GraphCatalog(g, k, l, False, False, ())
    n_tri = trivalent_count(g, l, closed)
    found = {}
    if closed:
        splits = [(0, n_tri)]
    elif l == 0:
        splits = [(0, 0)]
    else:
        splits = [(u, n_tri - u) for u in range(n_tri + 1)]
    for n_u, n_int in splits:
        if n_int < 0:
            continue
        s0, kind = [], []
        blocks = [(KIND_X, KIND_B)] * (0 if closed else k) + [(KIND_X, KIND_I, KIND_B)] * n_u \
            + [(KIND_I,) * 3] * n_int
        if l == 0:
            blocks = [(KIND_X, KIND_B)] * 3
        for bl in blocks:
            base = len(s0)
            for i, kd in enumerate(bl):
                s0.append(base + (i + 1) % len(bl))
                kind.append(kd)
        n = len(s0)
        bs = [h for h in range(n) if kind[h] == KIND_B]
        xs = [h for h in range(n) if kind[h] == KIND_X]
        iis = [h for h in range(n) if kind[h] == KIND_I]
        if not closed and not bs:
            continue
        for perm in itertools.permutations(xs):
            for mt in _matchings(iis):
                s1 = [0] * n
                for b, x in zip(bs, perm):
                    s1[b], s1[x] = x, b
                for a, b in mt:
                    s1[a], s1[b] = b, a
                he = HalfEdgeStructure(tuple(s0), tuple(s1))
                if not he.is_connected():
                    continue
                gr = OpenTrivalentGraph(he, frozenset(bs), check=False, ghost=l == 0)
                if l == 0:
                    nf_ok = True
                else:
                    nf_ok = len(gr.faces) == l
                if not nf_ok:
                    continue
                nm = len(gr.marked_vertices)
                for fl in itertools.permutations(range(1, l + 1)):
                    for pl in itertools.permutations(range(1, nm + 1)):
                        lab = gr.with_labels({i: x for i, x in enumerate(fl)},
                                             {v: x for v, x in zip(gr.marked_vertices, pl)})
                        code = canonical_code(lab)
                        if code not in found:
                            found[code] = (lab, brute_force_aut_count(lab))
    entries = tuple(CatalogEntry(found[c][0], found[c][1]) for c in sorted(found))
    return GraphCatalog(g, k if not closed else 0, l, closed, False, entries)


def brute_force_aut_count(gr: OpenTrivalentGraph) -> int:
    """Automorphisms by propagating every possible image of half-edge 0."""
    n = gr.n_half
    s0, s1 = gr.sigma0, gr.sigma1
    col = [(gr.kinds[h], gr.half_face_label[h], gr.half_point_label[h]) for h in range(n)]
    count = 0
    for t in range(n):
        phi = {0: t}
        stack = [0]
        ok = col[0] == col[t]
        while ok and stack:
            h = stack.pop()
            for a, b in ((s0[h], s0[phi[h]]), (s1[h], s1[phi[h]])):
                if a in phi:
                    if phi[a] != b:
                        ok = False
                        break
                else:
                    if col[a] != col[b]:
                        ok = False
                        break
                    phi[a] = b
                    stack.append(a)
        if ok and len(set(phi.values())) == n:
            count += 1
    return count


def catalog_signatures(max_dim: int) -> Iterable[tuple[int, int, int]]:
    """Stable open signatures with 3g-3+k+2l <= max_dim, in a fixed order."""
    for dim in range(0, max_dim + 1):
        for g in range(0, dim + 4):
            for l in range(0, dim + 4):
                k = dim - 3 * g + 3 - 2 * l
                if k < 0:
                    continue
                if 2 * g - 2 + k + 2 * l > 0:
                    yield (g, k, l)

"""Half-edge (permutation) representation of open and closed ribbon graphs.

A ribbon graph on ``n`` half-edges is a pair of permutations ``sigma0``
(counterclockwise rotation at each vertex) and ``sigma1`` (fixed point free
involution pairing half-edges into edges).  The face permutation is
``sigma2 = sigma0^-1 o sigma1``.

Open graphs additionally carry the set ``H^B`` of boundary half-edges.  Every
half-edge then has one of three kinds:

* ``B``: in ``H^B``, runs along the boundary against its induced orientation;
* ``X``: the face side of a boundary edge (its partner is in ``H^B``);
* ``I``: a half of an internal edge.

Vertices of a smooth trivalent open graph have the rotations ``(I, I, I)``
(internal), ``(X, I, B)`` (unmarked boundary vertex) and ``(X, B)`` (boundary
marked point).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import InvalidGraphError

KIND_B, KIND_X, KIND_I = 0, 1, 2
KIND_NAMES = "BXI"

VERTEX_INTERNAL = "internal"
VERTEX_BOUNDARY = "boundary"
VERTEX_MARKED = "marked"


def cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles of ``perm``, each starting at its smallest element, sorted."""
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        h = start
        while not seen[h]:
            seen[h] = True
            cyc.append(h)
            h = perm[h]
        out.append(tuple(cyc))
    return out


def invert(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def is_permutation(perm: Sequence[int]) -> bool:
    n = len(perm)
    return sorted(perm) == list(range(n))


@dataclass(frozen=True)
class HalfEdgeStructure:
    """Permutation pair ``(sigma0, sigma1)`` on ``range(n_half)``."""

    sigma0: tuple[int, ...]
    sigma1: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma0", tuple(self.sigma0))
        object.__setattr__(self, "sigma1", tuple(self.sigma1))
        n = len(self.sigma0)
        if len(self.sigma1) != n:
            raise InvalidGraphError("sigma0 and sigma1 have different sizes")
        if n % 2:
            raise InvalidGraphError("odd number of half-edges")
        if not is_permutation(self.sigma0) or not is_permutation(self.sigma1):
            raise InvalidGraphError("sigma0/sigma1 must be permutations")
        for h, p in enumerate(self.sigma1):
            if p == h or self.sigma1[p] != h:
                raise InvalidGraphError(f"sigma1 is not a fixed point free involution at {h}")

    @property
    def n_half(self) -> int:
        return len(self.sigma0)

    @cached_property
    def sigma0_inv(self) -> tuple[int, ...]:
        return tuple(invert(self.sigma0))

    @cached_property
    def sigma2(self) -> tuple[int, ...]:
        inv = self.sigma0_inv
        return tuple(inv[p] for p in self.sigma1)

    @cached_property
    def vertices(self) -> list[tuple[int, ...]]:
        return cycles(self.sigma0)

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        out = [0] * self.n_half
        for i, cyc in enumerate(self.vertices):
            for h in cyc:
                out[h] = i
        return tuple(out)

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return [(h, p) for h, p in enumerate(self.sigma1) if h < p]

    def is_connected(self) -> bool:
        n = self.n_half
        if n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            h = stack.pop()
            for x in (self.sigma0[h], self.sigma1[h]):
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return len(seen) == n


def faces(h: HalfEdgeStructure) -> list[tuple[int, ...]]:
    """All cycles of ``sigma2 = sigma0^-1 o sigma1`` in cyclic order."""
    return cycles(h.sigma2)


@dataclass(frozen=True)
class GraphStats:
    genus: int  # doubled genus 2*g_s + b - 1
    boundaries: int
    internal_vertices: int
    faces: int
    boundary_points: int
    edges: int

    @property
    def surface_genus(self) -> int:
        return (self.genus - self.boundaries + 1) // 2

    @property
    def dim(self) -> int:
        return 3 * self.genus - 3 + self.boundary_points + 2 * self.faces


@dataclass(frozen=True, eq=False)
class OpenTrivalentGraph:
    """A smooth trivalent ribbon graph with boundary, or a closed one.

    ``face_labels`` maps face indices (positions in :attr:`faces`) to labels
    and ``point_labels`` maps vertex indices to boundary labels.  Either map
    may be empty, which denotes an unlabeled shape.  A ghost is the triangle
    with three marked points flagged by ``ghost``; its single cell is not a
    marked face.
    """

    halfedges: HalfEdgeStructure
    boundary_halves: frozenset = frozenset()
    face_labels: Mapping[int, int] = field(default_factory=dict)
    point_labels: Mapping[int, int] = field(default_factory=dict)
    check: bool = field(default=True, repr=False)
    ghost: bool = False

    def __post_init__(self):
        object.__setattr__(self, "boundary_halves", frozenset(self.boundary_halves))
        object.__setattr__(self, "face_labels", dict(self.face_labels))
        object.__setattr__(self, "point_labels", dict(self.point_labels))
        if self.check:
            self.validate()

    @classmethod
    def from_perms(cls, sigma0, sigma1, boundary_halves=(), face_labels=None,
                   point_labels=None, check=True, ghost=False) -> "OpenTrivalentGraph":
        return cls(HalfEdgeStructure(tuple(sigma0), tuple(sigma1)), frozenset(boundary_halves),
                   face_labels or {}, point_labels or {}, check, ghost)

    # -- derived structure -------------------------------------------------
    @property
    def n_half(self) -> int:
        return self.halfedges.n_half

    @property
    def sigma0(self):
        return self.halfedges.sigma0

    @property
    def sigma1(self):
        return self.halfedges.sigma1

    @property
    def sigma2(self):
        return self.halfedges.sigma2

    @cached_property
    def kinds(self) -> tuple[int, ...]:
        hb = self.boundary_halves
        s1 = self.sigma1
        return tuple(KIND_B if h in hb else KIND_X if s1[h] in hb else KIND_I
                     for h in range(self.n_half))

    @property
    def vertices(self):
        return self.halfedges.vertices

    @property
    def vertex_of(self):
        return self.halfedges.vertex_of

    @cached_property
    def vertex_types(self) -> list[str]:
        out = []
        kinds = self.kinds
        for cyc in self.vertices:
            ks = sorted(kinds[h] for h in cyc)
            if ks == [KIND_I] * 3:
                out.append(VERTEX_INTERNAL)
            elif ks == [KIND_B, KIND_X, KIND_I]:
                out.append(VERTEX_BOUNDARY)
            elif ks == [KIND_B, KIND_X]:
                out.append(VERTEX_MARKED)
            else:
                out.append("invalid")
        return out

    @cached_property
    def faces(self) -> list[tuple[int, ...]]:
        """Cycles of sigma2 made of non-boundary half-edges."""
        kinds = self.kinds
        return [c for c in cycles(self.sigma2) if kinds[c[0]] != KIND_B]

    @cached_property
    def boundary_cycles(self) -> list[tuple[int, ...]]:
        kinds = self.kinds
        return [c for c in cycles(self.sigma2) if kinds[c[0]] == KIND_B]

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        """Face index of each half-edge, -1 for boundary half-edges."""
        out = [-1] * self.n_half
        for i, cyc in enumerate(self.faces):
            for h in cyc:
                out[h] = i
        return tuple(out)

    @cached_property
    def boundary_of(self) -> tuple[int, ...]:
        out = [-1] * self.n_half
        for i, cyc in enumerate(self.boundary_cycles):
            for h in cyc:
                out[h] = i
        return tuple(out)

    @property
    def marked_vertices(self) -> list[int]:
        return [i for i, t in enumerate(self.vertex_types) if t == VERTEX_MARKED]

    @property
    def internal_vertices(self) -> list[int]:
        return [i for i, t in enumerate(self.vertex_types) if t == VERTEX_INTERNAL]

    @property
    def is_closed(self) -> bool:
        return not self.boundary_halves

    @property
    def is_ghost(self) -> bool:
        return self.ghost

    @property
    def n_faces(self) -> int:
        """Number of marked faces ``l`` (zero for a ghost)."""
        return 0 if self.is_ghost else len(self.faces)

    def boundary_half_at(self, v: int) -> int:
        """The ``H^B`` half-edge issuing from boundary vertex ``v``."""
        for h in self.vertices[v]:
            if self.kinds[h] == KIND_B:
                return h
        raise InvalidGraphError(f"vertex {v} is not on the boundary")

    def points_on_boundary(self) -> list[int]:
        """Number of marked points on each boundary cycle."""
        counts = [0] * len(self.boundary_cycles)
        for v in self.marked_vertices:
            counts[self.boundary_of[self.boundary_half_at(v)]] += 1
        return counts

    def is_odd(self) -> bool:
        return all(c % 2 == 1 for c in self.points_on_boundary())

    @cached_property
    def half_face_label(self) -> tuple[int, ...]:
        """Label of the face containing each half-edge, 0 if none."""
        fo = self.face_of
        fl = self.face_labels
        return tuple(fl.get(fo[h], 0) if fo[h] >= 0 else 0 for h in range(self.n_half))

    @cached_property
    def half_point_label(self) -> tuple[int, ...]:
        vo = self.vertex_of
        pl = self.point_labels
        return tuple(pl.get(vo[h], 0) for h in range(self.n_half))

    # -- validation ----------------------------------------------------------
    def validate(self) -> None:
        he = self.halfedges
        n = he.n_half
        if any(not 0 <= h < n for h in self.boundary_halves):
            raise InvalidGraphError("boundary half-edge out of range")
        if not he.is_connected():
            raise InvalidGraphError("graph is disconnected")
        s1 = he.sigma1
        for h in self.boundary_halves:
            if s1[h] in self.boundary_halves:
                raise InvalidGraphError("both halves of an edge are boundary halves")
        kinds = self.kinds
        for h in range(n):
            if (kinds[h] == KIND_B) != (kinds[he.sigma2[h]] == KIND_B):
                raise InvalidGraphError("sigma2 does not preserve the boundary partition")
        for v, t in enumerate(self.vertex_types):
            if t == "invalid":
                raise InvalidGraphError(f"vertex {v} is not internal, boundary or marked")
            if t == VERTEX_MARKED and self.is_closed:
                raise InvalidGraphError("marked vertex in a closed graph")
        if self.is_closed and any(k != KIND_I for k in kinds):
            raise InvalidGraphError("closed graph with boundary edges")
        nf = len(self.faces)
        for fi, lab in self.face_labels.items():
            if not 0 <= fi < nf:
                raise InvalidGraphError(f"face index {fi} out of range")
        if len(set(self.face_labels.values())) != len(self.face_labels):
            raise InvalidGraphError("face labels are not distinct")
        marked = set(self.marked_vertices)
        for v in self.point_labels:
            if v not in marked:
                raise InvalidGraphError(f"point label on non-marked vertex {v}")
        if len(set(self.point_labels.values())) != len(self.point_labels):
            raise InvalidGraphError("point labels are not distinct")
        if self.ghost and (n != 6 or len(marked) != 3 or self.face_labels):
            raise InvalidGraphError("a ghost is the unlabeled triangle with three marked points")
        stats(self)

    # -- (de)serialisation -----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "n_half": self.n_half,
            "sigma0": list(self.sigma0),
            "sigma1": list(self.sigma1),
            "boundary_halves": sorted(self.boundary_halves),
            "face_labels": {str(k): v for k, v in sorted(self.face_labels.items())},
            "point_labels": {str(k): v for k, v in sorted(self.point_labels.items())},
        } | ({"ghost": True} if self.ghost else {})

    @classmethod
    def from_dict(cls, d: Mapping) -> "OpenTrivalentGraph":
        if len(d["sigma0"]) != d["n_half"]:
            raise InvalidGraphError("n_half does not match sigma0")
        return cls.from_perms(
            d["sigma0"], d["sigma1"], d.get("boundary_halves", ()),
            {int(k): int(v) for k, v in d.get("face_labels", {}).items()},
            {int(k): int(v) for k, v in d.get("point_labels", {}).items()},
            ghost=bool(d.get("ghost", False)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    # -- transformations -------------------------------------------------------
    def relabel_halves(self, perm: Sequence[int]) -> "OpenTrivalentGraph":
        """The same graph with half-edge ``h`` renamed ``perm[h]``."""
        n = self.n_half
        inv = invert(perm)
        s0 = [perm[self.sigma0[inv[i]]] for i in range(n)]
        s1 = [perm[self.sigma1[inv[i]]] for i in range(n)]
        new = HalfEdgeStructure(tuple(s0), tuple(s1))
        hb = frozenset(perm[h] for h in self.boundary_halves)
        tmp = OpenTrivalentGraph(new, hb, {}, {}, check=False)
        fl = {}
        for fi, lab in self.face_labels.items():
            fl[tmp.face_of[perm[self.faces[fi][0]]]] = lab
        pl = {}
        for v, lab in self.point_labels.items():
            pl[tmp.vertex_of[perm[self.vertices[v][0]]]] = lab
        return OpenTrivalentGraph(new, hb, fl, pl, check=False, ghost=self.ghost)

    def with_labels(self, face_labels=None, point_labels=None) -> "OpenTrivalentGraph":
        return OpenTrivalentGraph(self.halfedges, self.boundary_halves,
                                  self.face_labels if face_labels is None else face_labels,
                                  self.point_labels if point_labels is None else point_labels,
                                  check=False, ghost=self.ghost)

    def mirror(self) -> "OpenTrivalentGraph":
        """Orientation reversal: reverse every vertex rotation.

        Boundary half-edges switch to the other half of each boundary edge.
        """
        s0 = self.halfedges.sigma0_inv
        s1 = self.sigma1
        hb = frozenset(s1[h] for h in self.boundary_halves)
        he = HalfEdgeStructure(s0, s1)
        tmp = OpenTrivalentGraph(he, hb, {}, {}, check=False)
        fl = {}
        for fi, lab in self.face_labels.items():
            h = self.faces[fi][0]
            # a face of the mirror image runs along the partners
            fl[tmp.face_of[s1[h]] if tmp.kinds[s1[h]] != KIND_B else tmp.face_of[h]] = lab
        return OpenTrivalentGraph(he, hb, fl, dict(self.point_labels), check=False,
                                  ghost=self.ghost)

    # -- summary ---------------------------------------------------------------
    def stats(self) -> GraphStats:
        return stats(self)

    def __repr__(self):
        return (f"OpenTrivalentGraph(sigma0={list(self.sigma0)}, sigma1={list(self.sigma1)}, "
                f"boundary={sorted(self.boundary_halves)}, faces={self.face_labels}, "
                f"points={self.point_labels})")


def _raw_stats(g: OpenTrivalentGraph) -> tuple[int, int]:
    n_vert = len(g.vertices)
    n_edge = g.n_half // 2
    n_cells = len(g.faces)
    b = len(g.boundary_cycles)
    chi = n_vert - n_edge + n_cells
    if b == 0:
        return 2 - chi, 0  # closed: 2 - 2*genus
    return 1 - chi, b


def stats(g: OpenTrivalentGraph) -> GraphStats:
    """Genus (doubled for open graphs), boundary and cell counts."""
    genus2, b = _raw_stats(g)
    if b == 0:
        if genus2 % 2 or genus2 < 0:
            raise InvalidGraphError("invalid closed gluing")
        genus = genus2 // 2
    else:
        genus = genus2
        if genus < 0 or (genus - b + 1) % 2 or genus - b + 1 < 0:
            raise InvalidGraphError("surface genus is negative")
    return GraphStats(
        genus=genus,
        boundaries=b,
        internal_vertices=len(g.internal_vertices),
        faces=g.n_faces,
        boundary_points=len(g.marked_vertices),
        edges=g.n_half // 2,
    )


# ---------------------------------------------------------------------------
# canonical form and automorphisms
# ---------------------------------------------------------------------------

def _colors(g: OpenTrivalentGraph) -> list[int]:
    kinds = g.kinds
    fl = g.half_face_label
    pl = g.half_point_label
    return [kinds[h] + 3 * (fl[h] + 64 * pl[h]) for h in range(g.n_half)]


def trace_code(root: int, s0: Sequence[int], s1: Sequence[int], color: Sequence[int],
               bound: tuple | None = None):
    """Breadth-first code of a connected map seen from ``root``.

    Returns ``(code, order)``; ``order[i]`` is the half-edge numbered ``i``.
    With ``bound`` given, returns ``(None, None)`` as soon as the code is
    known to exceed it.
    """
    num = {root: 0}
    order = [root]
    code = []
    i = 0
    while i < len(order):
        h = order[i]
        a = s0[h]
        if a not in num:
            num[a] = len(order)
            order.append(a)
        b = s1[h]
        if b not in num:
            num[b] = len(order)
            order.append(b)
        code.append(num[a])
        code.append(num[b])
        code.append(color[h])
        if bound is not None:
            j = 3 * i
            t = (code[j], code[j + 1], code[j + 2])
            u = bound[j:j + 3]
            if t != u:
                if t > u:
                    return None, None
                bound = None
        i += 1
    return tuple(code), order


def root_candidates(g: OpenTrivalentGraph) -> list[int]:
    """Half-edges any label-preserving automorphism must permute among themselves."""
    if g.point_labels:
        v = min(g.point_labels, key=g.point_labels.get)
        return [g.boundary_half_at(v)]
    kinds = g.kinds
    if g.boundary_halves:
        marked = set(g.marked_vertices)
        vo = g.vertex_of
        at_marked = [h for h in g.boundary_halves if vo[h] in marked]
        return sorted(at_marked or g.boundary_halves)
    if g.face_labels:
        fi = min(g.face_labels, key=g.face_labels.get)
        return list(g.faces[fi])
    return [h for h in range(g.n_half) if kinds[h] == KIND_I]


def _min_code(g: OpenTrivalentGraph):
    s0, s1 = g.sigma0, g.sigma1
    color = _colors(g)
    best = None
    best_roots = []
    for r in root_candidates(g):
        code, order = trace_code(r, s0, s1, color, best)
        if code is None:
            continue
        if best is None or code < best:
            best = code
            best_roots = [order]
        elif code == best:
            best_roots.append(order)
    return best, best_roots


def canonical_form(g: OpenTrivalentGraph) -> tuple[bytes, list[int]]:
    """Canonical code and the relabeling ``h -> canonical index``.

    Two graphs get equal codes iff they are isomorphic by an orientation
    preserving map respecting face labels, point labels and the boundary.
    """
    code, orders = _min_code(g)
    order = orders[0]
    relabel = [0] * g.n_half
    for i, h in enumerate(order):
        relabel[h] = i
    return encode_code(code), relabel


def encode_code(code: Iterable[int]) -> bytes:
    return ",".join(map(str, code)).encode()


def canonical_code(g: OpenTrivalentGraph) -> bytes:
    return encode_code(_min_code(g)[0])


def automorphisms(g: OpenTrivalentGraph) -> list[tuple[int, ...]]:
    """All label-preserving automorphisms as half-edge permutations."""
    _, orders = _min_code(g)
    base = orders[0]
    out = []
    for order in orders:
        perm = [0] * g.n_half
        for a, b in zip(base, order):
            perm[a] = b
        out.append(tuple(perm))
    out.sort()
    return out


def automorphism_count(g: OpenTrivalentGraph) -> int:
    return len(_min_code(g)[1])


def canonical_graph(g: OpenTrivalentGraph) -> OpenTrivalentGraph:
    """The representative obtained by applying the canonical relabeling."""
    _, relabel = canonical_form(g)
    return g.relabel_halves(relabel)


# ---------------------------------------------------------------------------
# small constructors
# ---------------------------------------------------------------------------

def polygon(points: Sequence[int | None], face_label: int | None = 1) -> OpenTrivalentGraph:
    """Disk whose graph is its boundary circle through ``len(points)`` marked points.

    ``points`` lists point labels in the order the boundary half-edges visit
    them (``None`` for unlabeled).  ``face_label=None`` makes a ghost.
    """
    k = len(points)
    if k == 0:
        raise InvalidGraphError("polygon needs at least one marked point")
    # vertex i has halves B=2i, X=2i+1; B_i runs to vertex i+1 where it meets X_{i+1}
    s0 = [0] * (2 * k)
    s1 = [0] * (2 * k)
    for i in range(k):
        b, x = 2 * i, 2 * i + 1
        s0[x], s0[b] = b, x
        xn = 2 * ((i + 1) % k) + 1
        s1[b], s1[xn] = xn, b
    hb = frozenset(2 * i for i in range(k))
    g = OpenTrivalentGraph.from_perms(s0, s1, hb, check=False)
    fl = {} if face_label is None else {0: face_label}
    pl = {}
    for i, lab in enumerate(points):
        if lab is not None:
            pl[g.vertex_of[2 * i]] = lab
    return OpenTrivalentGraph(g.halfedges, hb, fl, pl, ghost=face_label is None)


def ghost(points: Sequence[int | None] = (1, 2, 3)) -> OpenTrivalentGraph:
    if len(points) != 3:
        raise InvalidGraphError("a ghost has exactly three boundary points")
    return polygon(points, face_label=None)

"""Odd critical nodal ribbon graphs.

A nodal graph is a tuple of smooth trivalent components (ghosts allowed)
glued at ordered node pairs.  The legal side of a node is a marked vertex of
some component; the illegal side is a slot on a boundary edge of a non-ghost
component.  Slots on one edge are ordered along the edge, starting at the
vertex of its boundary half.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Mapping, NamedTuple, Sequence

from .enumeration import DEFAULT_MAX_ENTRIES, face_labeled_shapes
from .errors import InvalidGraphError, NodalValidationError, ResourceLimitError
from .ribbon import (KIND_B, KIND_X, HalfEdgeStructure, OpenTrivalentGraph, encode_code,
                     ghost, stats)

LABELED = "labeled"
LEGAL = "legal"


@dataclass(frozen=True)
class NodalStats:
    genus: int
    k: int
    l: int
    m: int
    c: int


@dataclass(frozen=True, eq=False)
class NodalGraph:
    """Components plus point roles and ordered slot lists.

    ``roles`` maps ``(component, vertex)`` for every marked vertex to
    ``("labeled", j)`` or ``("legal", node_id)``; ``j = 0`` marks a labeled
    point whose label is not assigned yet.  ``slots`` maps
    ``(component, boundary half)`` to the node ids whose illegal sides lie on
    that edge.  Components carry face labels only.
    """

    components: tuple[OpenTrivalentGraph, ...]
    roles: Mapping[tuple[int, int], tuple[str, int]]
    slots: Mapping[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "roles", dict(self.roles))
        object.__setattr__(self, "slots", {k: tuple(v) for k, v in self.slots.items() if v})

    @property
    def m(self) -> int:
        return sum(1 for r in self.roles.values() if r[0] == LEGAL)

    @property
    def k(self) -> int:
        return sum(1 for r in self.roles.values() if r[0] == LABELED)

    @property
    def l(self) -> int:
        return sum(len(c.face_labels) for c in self.components)

    def m_of_edge(self, comp: int, bhalf: int) -> int:
        return len(self.slots.get((comp, bhalf), ()))

    @cached_property
    def node_host(self) -> dict[int, tuple[int, int, int]]:
        """node id -> (component, boundary half, position)."""
        out = {}
        for (c, b), ids in self.slots.items():
            for pos, nid in enumerate(ids):
                out[nid] = (c, b, pos)
        return out

    @cached_property
    def node_legal(self) -> dict[int, tuple[int, int]]:
        return {r[1]: cv for cv, r in self.roles.items() if r[0] == LEGAL}

    def validate(self) -> NodalStats:
        return validate(self)

    # -- JSON ------------------------------------------------------------------
    def to_dict(self) -> dict:
        roles = {}
        for (c, v), (kind, x) in sorted(self.roles.items()):
            roles[f"{c}:{v}"] = {kind: x}
        slots = {f"{c}:{b}": list(ids) for (c, b), ids in sorted(self.slots.items())}
        return {"components": [g.to_dict() for g in self.components],
                "roles": roles, "slots": slots}

    @classmethod
    def from_dict(cls, d: Mapping) -> "NodalGraph":
        comps = tuple(OpenTrivalentGraph.from_dict(c) for c in d["components"])
        roles = {}
        for key, val in d["roles"].items():
            c, v = (int(x) for x in key.split(":"))
            (kind, x), = val.items()
            if kind not in (LABELED, LEGAL):
                raise InvalidGraphError(f"unknown role {kind}")
            roles[(c, v)] = (kind, int(x))
        slots = {}
        for key, ids in d.get("slots", {}).items():
            c, b = (int(x) for x in key.split(":"))
            slots[(c, b)] = tuple(int(i) for i in ids)
        return cls(comps, roles, slots)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def _fail(code, msg):
    raise NodalValidationError(code, msg)


def validate(n: NodalGraph) -> NodalStats:
    """Check every invariant and return the nodal surface statistics."""
    comps = n.components
    if not comps:
        _fail("structure", "no components")
    marked = set()
    for ci, comp in enumerate(comps):
        try:
            comp.validate()
        except InvalidGraphError as exc:
            _fail("structure", f"component {ci}: {exc}")
        if comp.is_closed:
            _fail("structure", f"component {ci} has no boundary")
        if comp.point_labels:
            _fail("structure", f"component {ci} carries point labels; use roles")
        if not comp.face_labels and not comp.is_ghost:
            _fail("structure", f"component {ci} has unlabeled faces")
        for v in comp.marked_vertices:
            marked.add((ci, v))
    if set(n.roles) != marked:
        _fail("structure", "roles must cover exactly the marked vertices")
    face_labels = [x for c in comps for x in c.face_labels.values()]
    if sorted(face_labels) != list(range(1, len(face_labels) + 1)):
        _fail("labels", "face labels are not a bijection onto [l]")
    labeled = [x for kind, x in n.roles.values() if kind == LABELED]
    if any(x != 0 for x in labeled) and sorted(labeled) != list(range(1, len(labeled) + 1)):
        _fail("labels", "point labels are not a bijection onto [k]")
    legal_ids = [x for kind, x in n.roles.values() if kind == LEGAL]
    if len(set(legal_ids)) != len(legal_ids):
        _fail("duplicate-node", "a node id is the legal side of two points")
    slot_ids = [x for ids in n.slots.values() for x in ids]
    if len(set(slot_ids)) != len(slot_ids):
        _fail("duplicate-node", "a node id occupies two slots")
    if set(slot_ids) != set(legal_ids):
        _fail("duplicate-node", "legal sides and slots do not match one to one")
    for (ci, b) in n.slots:
        if not 0 <= ci < len(comps) or b not in comps[ci].boundary_halves:
            _fail("structure", f"slot key {(ci, b)} is not a boundary edge")
        if comps[ci].is_ghost:
            _fail("ghost-slot", f"ghost component {ci} hosts an illegal side")
    for ci, comp in enumerate(comps):
        if not comp.is_odd():
            _fail("even-boundary", f"component {ci} has a boundary with an even number of points")
    # connectivity of the incidence graph
    parent = list(range(len(comps)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for nid, (c, _b, _p) in n.node_host.items():
        a = find(c)
        b = find(n.node_legal[nid][0])
        parent[a] = b
    if len({find(i) for i in range(len(comps))}) != 1:
        _fail("disconnected", "components are not connected by nodes")
    m = len(legal_ids)
    c = len(comps)
    genus = sum(stats(comp).genus for comp in comps) + m - c + 1
    if genus < 0:
        _fail("negative-genus", "total genus is negative")
    return NodalStats(genus, len(labeled), len(face_labels), m, c)


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

class _Flat(NamedTuple):
    s0: list
    s1: list
    color: list
    link: dict
    slots: dict
    offsets: list
    owner: list


def _flatten(n: NodalGraph) -> _Flat:
    s0, s1, color, owner, offsets = [], [], [], [], []
    for ci, comp in enumerate(n.components):
        off = len(s0)
        offsets.append(off)
        kinds = comp.kinds
        fl = comp.half_face_label
        vo = comp.vertex_of
        for h in range(comp.n_half):
            s0.append(comp.sigma0[h] + off)
            s1.append(comp.sigma1[h] + off)
            role = n.roles.get((ci, vo[h]))
            pt = 0
            if role is not None and role[0] == LABELED:
                pt = 1 + role[1]
            color.append(kinds[h] + 4 * (fl[h] + 1000 * pt))
            owner.append(ci)
    legal_b = {}
    for (ci, v), (kind, nid) in n.roles.items():
        if kind == LEGAL:
            legal_b[nid] = n.components[ci].boundary_half_at(v) + offsets[ci]
    slots = {}
    link = {}
    for (ci, b), ids in n.slots.items():
        gb = b + offsets[ci]
        slots[gb] = tuple(legal_b[i] for i in ids)
        for x in slots[gb]:
            link[x] = gb
    return _Flat(s0, s1, color, link, slots, offsets, owner)


def _trace(root, f: _Flat, bound=None):
    s0, s1, color, link, slots = f.s0, f.s1, f.color, f.link, f.slots
    num = {root: 0}
    order = [root]
    code = []
    i = 0
    while i < len(order):
        h = order[i]
        lk = link.get(h)
        sl = slots.get(h, ())
        nbrs = [s0[h], s1[h]]
        if lk is not None:
            nbrs.append(lk)
        nbrs.extend(sl)
        for x in nbrs:
            if x not in num:
                num[x] = len(order)
                order.append(x)
        start = len(code)
        code.append(num[s0[h]])
        code.append(num[s1[h]])
        code.append(color[h])
        code.append(-1 if lk is None else num[lk])
        code.append(len(sl))
        code.extend(num[x] for x in sl)
        if bound is not None:
            a = tuple(code[start:])
            b = bound[start:len(code)]
            if a != b:
                if a > b:
                    return None, None
                bound = None
        i += 1
    return tuple(code), order


def _roots(n: NodalGraph, f: _Flat) -> list[int]:
    for (ci, v), (kind, j) in n.roles.items():
        if kind == LABELED and j == 1:
            return [n.components[ci].boundary_half_at(v) + f.offsets[ci]]
    for ci, comp in enumerate(n.components):
        if 1 in comp.face_labels.values():
            return sorted(h + f.offsets[ci] for h in comp.boundary_halves)
    return [h for h in range(len(f.s0)) if f.color[h] % 4 == KIND_B]


def _min_traces(n: NodalGraph):
    f = _flatten(n)
    best = None
    orders = []
    for r in _roots(n, f):
        code, order = _trace(r, f, best)
        if code is None:
            continue
        if best is None or code < best:
            best, orders = code, [order]
        elif code == best:
            orders.append(order)
    return f, best, orders


def nodal_canonical_form(n: NodalGraph) -> bytes:
    """Isomorphism invariant code (labels, roles, sides and slot order respected)."""
    return encode_code(_min_traces(n)[1])


def nodal_automorphisms(n: NodalGraph) -> list[tuple[int, ...]]:
    """Automorphisms as permutations of the flattened half-edge set."""
    f, _, orders = _min_traces(n)
    base = orders[0]
    out = []
    for order in orders:
        perm = [0] * len(f.s0)
        for a, b in zip(base, order):
            perm[a] = b
        out.append(tuple(perm))
    out.sort()
    return out


def nodal_automorphism_count(n: NodalGraph) -> int:
    return len(_min_traces(n)[2])


def canonical_nodal(n: NodalGraph) -> NodalGraph:
    """Representative in canonical numbering: components, halves and node ids."""
    f, _, orders = _min_traces(n)
    order = orders[0]
    rank = {h: i for i, h in enumerate(order)}
    comp_order = sorted(range(len(n.components)),
                        key=lambda ci: min(rank[h + f.offsets[ci]]
                                           for h in range(n.components[ci].n_half)))
    new_index = {old: new for new, old in enumerate(comp_order)}
    comps = []
    perms = []
    for ci in comp_order:
        comp = n.components[ci]
        halves = sorted(range(comp.n_half), key=lambda h: rank[h + f.offsets[ci]])
        perm = [0] * comp.n_half
        for new, old in enumerate(halves):
            perm[old] = new
        perms.append(perm)
        comps.append(comp.relabel_halves(perm))
    # node ids by rank of the legal boundary half
    legal = []
    for (ci, v), (kind, nid) in n.roles.items():
        if kind == LEGAL:
            legal.append((rank[n.components[ci].boundary_half_at(v) + f.offsets[ci]], nid))
    new_id = {nid: i for i, (_, nid) in enumerate(sorted(legal))}
    roles = {}
    for (ci, v), (kind, x) in n.roles.items():
        nc = new_index[ci]
        comp = n.components[ci]
        h = comp.vertices[v][0]
        nv = comps[nc].vertex_of[perms[nc][h]]
        roles[(nc, nv)] = (kind, new_id[x] if kind == LEGAL else x)
    slots = {}
    for (ci, b), ids in n.slots.items():
        nc = new_index[ci]
        slots[(nc, perms[nc][b])] = tuple(new_id[i] for i in ids)
    return NodalGraph(tuple(comps), dict(sorted(roles.items())), dict(sorted(slots.items())))


# ---------------------------------------------------------------------------
# slot insertion (the degree-2 vertex picture)
# ---------------------------------------------------------------------------

def insert_slots(n: NodalGraph, ci: int) -> tuple[OpenTrivalentGraph, dict[int, int]]:
    """Component ``ci`` with every illegal side made a degree-2 marked vertex.

    Returns the enlarged graph (no point labels) and a map from node id to the
    new vertex index.
    """
    comp = n.components[ci]
    s0 = list(comp.sigma0)
    s1 = list(comp.sigma1)
    hb = set(comp.boundary_halves)
    new_half = {}
    for b in sorted(hb):
        ids = n.slots.get((ci, b), ())
        if not ids:
            continue
        x = s1[b]
        prev = b
        for nid in ids:
            xh, bh = len(s0), len(s0) + 1
            s0.extend([bh, xh])
            s1.extend([prev, x])
            s1[prev] = xh
            hb.add(bh)
            new_half[nid] = bh
            prev = bh
        s1[prev] = x
        s1[x] = prev
    g = OpenTrivalentGraph(HalfEdgeStructure(tuple(s0), tuple(s1)), frozenset(hb),
                           {}, {}, check=False)
    # face indices move when half-edges are added; carry labels by a member half
    fl = {g.face_of[comp.faces[fi][0]]: lab for fi, lab in comp.face_labels.items()}
    g = g.with_labels(fl, {})
    return g, {nid: g.vertex_of[h] for nid, h in new_half.items()}


def erase_slots(g: OpenTrivalentGraph, illegal: Mapping[int, int]) -> tuple[OpenTrivalentGraph, dict[int, tuple[int, ...]]]:
    """Inverse of :func:`insert_slots`: remove the listed degree-2 vertices.

    ``illegal`` maps node id to vertex index.  Returns the reduced graph and
    its slot lists keyed by boundary half.
    """
    s0 = list(g.sigma0)
    s1 = list(g.sigma1)
    node_at = {}
    drop = set()
    for nid, v in illegal.items():
        cyc = g.vertices[v]
        if len(cyc) != 2:
            raise InvalidGraphError("illegal side must be a degree-2 vertex")
        b = g.boundary_half_at(v)
        x = s0[b]
        node_at[b] = nid
        drop.update((b, x))
    slots: dict[int, list[int]] = {}
    for b0 in range(g.n_half):
        if b0 in drop or b0 not in g.boundary_halves:
            continue
        ids = []
        cur = s1[b0]  # X half of the next vertex
        while cur in drop:
            bh = s0[cur]
            ids.append(node_at[bh])
            cur = s1[bh]
        s1[b0] = cur
        s1[cur] = b0
        if ids:
            slots[b0] = ids
    keep = [h for h in range(g.n_half) if h not in drop]
    idx = {h: i for i, h in enumerate(keep)}
    ns0 = tuple(idx[s0[h]] for h in keep)
    ns1 = tuple(idx[s1[h]] for h in keep)
    hb = frozenset(idx[h] for h in g.boundary_halves if h not in drop)
    red = OpenTrivalentGraph(HalfEdgeStructure(ns0, ns1), hb, {}, {}, check=False)
    fl = {red.face_of[idx[g.faces[fi][0]]]: lab for fi, lab in g.face_labels.items()}
    red = red.with_labels(fl, {})
    return red, {idx[b]: tuple(ids) for b, ids in slots.items()}


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

class NodalEntry(NamedTuple):
    graph: NodalGraph
    aut: int


@dataclass(frozen=True)
class NodalCatalog:
    g: int
    k: int
    l: int
    m: int
    entries: tuple[NodalEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[NodalEntry]:
        return iter(self.entries)

    def to_jsonl(self) -> str:
        head = {"signature": {"g": self.g, "k": self.k, "l": self.l, "m": self.m}}
        lines = [json.dumps(head, sort_keys=True, separators=(",", ":"))]
        for e in self.entries:
            d = e.graph.to_dict()
            d["aut"] = e.aut
            lines.append(json.dumps(d, sort_keys=True, separators=(",", ":")))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "NodalCatalog":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        sig = json.loads(lines[0])["signature"]
        entries = []
        for ln in lines[1:]:
            d = json.loads(ln)
            entries.append(NodalEntry(NodalGraph.from_dict(d), int(d["aut"])))
        return cls(sig["g"], sig["k"], sig["l"], sig["m"], tuple(entries))


def max_nodes(g: int, k: int, l: int) -> int:
    """Each node lowers the cell dimension by one."""
    return 3 * g - 3 + k + 2 * l


def _set_partitions(items: Sequence[int], r: int) -> Iterator[list[tuple[int, ...]]]:
    """Partitions into r blocks, blocks ordered by their minimum."""
    items = list(items)
    if r == 0:
        if not items:
            yield []
        return
    if len(items) < r:
        return
    first, rest = items[0], items[1:]
    # first joins a block that it opens; choose the other members of that block
    for size in range(0, len(rest) + 1):
        for others in itertools.combinations(rest, size):
            remaining = [x for x in rest if x not in others]
            for tail in _set_partitions(remaining, r - 1):
                yield [(first,) + others] + tail


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for x in range(total + 1):
        for rest in _compositions(total - x, parts - 1):
            yield (x,) + rest


def _component_tuples(g: int, k: int, l: int, m: int):
    """Component lists (non-ghost components then ghosts) compatible with (g,k,l,m)."""
    if l == 0:
        if (g, k, m) == (0, 3, 0):
            yield (ghost((None, None, None)),)
        return
    gh = ghost((None, None, None))
    for r in range(1, l + 1):
        for blocks in _set_partitions(range(1, l + 1), r):
            for q in range(0, (k + m) // 3 + 1):
                c = r + q
                if m < c - 1:
                    continue
                gsum = g - m + c - 1
                ksum = k + m - 3 * q
                if gsum < 0 or ksum < 0:
                    continue
                for gs in _compositions(gsum, r):
                    for ks in _compositions(ksum, r):
                        options = []
                        for gi, ki, bl in zip(gs, ks, blocks):
                            opts = face_labeled_shapes(gi, ki, tuple(bl), True)
                            if not opts:
                                break
                            options.append([sh for sh, _ in opts])
                        else:
                            for combo in itertools.product(*options):
                                yield tuple(combo) + (gh,) * q


def _host_assignments(n_legal: int, edges: list[tuple[int, int]]):
    """Ordered distributions of legal points 0..n_legal-1 into slot lists."""
    lists = {e: [] for e in edges}

    def rec(i):
        if i == n_legal:
            yield {e: tuple(v) for e, v in lists.items() if v}
            return
        for e in edges:
            lst = lists[e]
            for pos in range(len(lst) + 1):
                lst.insert(pos, i)
                yield from rec(i + 1)
                del lst[pos]

    yield from rec(0)


def _connected(n_comp: int, legal_comp: Sequence[int], host_of: Mapping[int, int]) -> bool:
    parent = list(range(n_comp))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, c in enumerate(legal_comp):
        parent[find(c)] = find(host_of[i])
    return len({find(i) for i in range(n_comp)}) == 1


@lru_cache(maxsize=None)
def nodal_structures(g: int, k: int, l: int, m: int,
                     max_entries: int = DEFAULT_MAX_ENTRIES) -> tuple[tuple[NodalGraph, tuple], ...]:
    """Isomorphism classes with point labels left unassigned, and their automorphisms."""
    found = {}
    for comps in _component_tuples(g, k, l, m):
        points = [(ci, v) for ci, comp in enumerate(comps) for v in comp.marked_vertices]
        if len(points) != k + m:
            continue
        edges = [(ci, b) for ci, comp in enumerate(comps) if not comp.is_ghost
                 for b in sorted(comp.boundary_halves)]
        if m and not edges:
            continue
        for legal in itertools.combinations(range(len(points)), m):
            legal_pts = [points[i] for i in legal]
            legal_set = set(legal)
            for hosts in _host_assignments(m, edges):
                host_of = {i: e[0] for e, ids in hosts.items() for i in ids}
                if not _connected(len(comps), [p[0] for p in legal_pts], host_of):
                    continue
                roles = {}
                for i, pt in enumerate(points):
                    roles[pt] = (LABELED, 0)
                for i, pt in enumerate(legal_pts):
                    roles[pt] = (LEGAL, i)
                ng = NodalGraph(comps, roles, hosts)
                f, code, orders = _min_traces(ng)
                if code in found:
                    continue
                found[code] = ng
                if len(found) > max_entries:
                    raise ResourceLimitError("nodal structures", max_entries)
    out = []
    for code in sorted(found):
        cg = canonical_nodal(found[code])
        out.append((cg, tuple(nodal_automorphisms(cg))))
    return tuple(out)


def _labeled_points(n: NodalGraph) -> list[tuple[int, int]]:
    return sorted(cv for cv, r in n.roles.items() if r[0] == LABELED)


def label_orbits(n: NodalGraph, perms) -> Iterator[tuple[NodalGraph, int]]:
    """Point labelings of a structure up to its automorphisms, with stabilizer sizes."""
    f = _flatten(n)
    pts = _labeled_points(n)
    bhalf = [n.components[ci].boundary_half_at(v) + f.offsets[ci] for ci, v in pts]
    pos = {h: i for i, h in enumerate(bhalf)}
    maps = [tuple(pos[phi[h]] for h in bhalf) for phi in perms]
    k = len(pts)
    for lab in itertools.permutations(range(1, k + 1)):
        stab = 0
        minimal = True
        for mp in maps:
            img = [0] * k
            for i, x in enumerate(lab):
                img[mp[i]] = x
            img = tuple(img)
            if img < lab:
                minimal = False
                break
            if img == lab:
                stab += 1
        if not minimal:
            continue
        roles = dict(n.roles)
        for pt, x in zip(pts, lab):
            roles[pt] = (LABELED, x)
        yield NodalGraph(n.components, roles, n.slots), stab


@lru_cache(maxsize=None)
def enumerate_nodal(g: int, k: int, l: int, m: int,
                    max_entries: int = DEFAULT_MAX_ENTRIES) -> NodalCatalog:
    """All odd critical nodal (g,k,l)-graphs with m nodes, up to isomorphism."""
    if min(g, k, l, m) < 0:
        raise ValueError("g, k, l, m must be nonnegative")
    entries = []
    for struct, perms in nodal_structures(g, k, l, m, max_entries):
        for lab, stab in label_orbits(struct, perms):
            entries.append((nodal_canonical_form(lab), lab, stab))
            if len(entries) > max_entries:
                raise ResourceLimitError("nodal catalog entries", max_entries)
    entries.sort(key=lambda t: t[0])
    return NodalCatalog(g, k, l, m, tuple(NodalEntry(canonical_nodal(x), a) for _, x, a in entries))


def brute_force_nodal(g: int, k: int, l: int, m: int) -> dict[bytes, int]:
    """Oracle: label every point in every way before deduplicating.

    Returns canonical code -> automorphism count computed by direct
    propagation over the flattened structure.
    """
    found = {}
    for comps in _component_tuples(g, k, l, m):
        points = [(ci, v) for ci, comp in enumerate(comps) for v in comp.marked_vertices]
        if len(points) != k + m:
            continue
        edges = [(ci, b) for ci, comp in enumerate(comps) if not comp.is_ghost
                 for b in sorted(comp.boundary_halves)]
        for legal in itertools.combinations(range(len(points)), m):
            legal_pts = [points[i] for i in legal]
            others = [p for i, p in enumerate(points) if i not in set(legal)]
            for hosts in _host_assignments(m, edges) if m else [{}]:
                host_of = {i: e[0] for e, ids in hosts.items() for i in ids}
                if not _connected(len(comps), [p[0] for p in legal_pts], host_of):
                    continue
                for lab in itertools.permutations(range(1, k + 1)):
                    roles = {p: (LABELED, x) for p, x in zip(others, lab)}
                    for i, p in enumerate(legal_pts):
                        roles[p] = (LEGAL, i)
                    ng = NodalGraph(comps, roles, hosts)
                    code = nodal_canonical_form(ng)
                    if code not in found:
                        found[code] = _propagated_aut_count(ng)
    return found


def _propagated_aut_count(n: NodalGraph) -> int:
    f = _flatten(n)
    N = len(f.s0)
    rev = {}
    for b, lst in f.slots.items():
        for i, x in enumerate(lst):
            rev[x] = (b, i)

    def nbrs(h):
        out = [("s0", f.s0[h]), ("s1", f.s1[h])]
        if h in f.link:
            out.append(("link", f.link[h]))
        for i, x in enumerate(f.slots.get(h, ())):
            out.append((("slot", i), x))
        return out

    count = 0
    for t in range(N):
        phi = {0: t}
        stack = [0]
        ok = f.color[0] == f.color[t]
        while ok and stack:
            h = stack.pop()
            a_n = nbrs(h)
            b_n = dict(nbrs(phi[h]))
            if len(a_n) != len(b_n) or len(f.slots.get(h, ())) != len(f.slots.get(phi[h], ())):
                ok = False
                break
            for key, a in a_n:
                b = b_n.get(key)
                if b is None:
                    ok = False
                    break
                if a in phi:
                    if phi[a] != b:
                        ok = False
                        break
                elif f.color[a] != f.color[b]:
                    ok = False
                    break
                else:
                    phi[a] = b
                    stack.append(a)
        if ok and len(phi) == N and len(set(phi.values())) == N:
            count += 1
    return count

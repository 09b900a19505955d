"""Independent brute-force oracles used only by the tests."""
from __future__ import annotations

import itertools

from opencomb.ribbon import OpenTrivalentGraph


def is_isomorphism(p, a: OpenTrivalentGraph, b: OpenTrivalentGraph) -> bool:
    """``p`` maps half-edges of ``a`` to half-edges of ``b``."""
    if a.n_half != b.n_half:
        return False
    for h in range(a.n_half):
        if p[a.sigma0[h]] != b.sigma0[p[h]] or p[a.sigma1[h]] != b.sigma1[p[h]]:
            return False
    if {p[h] for h in a.boundary_halves} != set(b.boundary_halves):
        return False
    fa, fb = a.half_face_label, b.half_face_label
    pa, pb = a.half_point_label, b.half_point_label
    return all(fa[h] == fb[p[h]] and pa[h] == pb[p[h]] for h in range(a.n_half))


def brute_isomorphic(a: OpenTrivalentGraph, b: OpenTrivalentGraph) -> bool:
    if a.n_half != b.n_half or a.ghost != b.ghost:
        return False
    return any(is_isomorphism(p, a, b) for p in itertools.permutations(range(a.n_half)))


def brute_automorphisms(a: OpenTrivalentGraph) -> list[tuple[int, ...]]:
    return sorted(p for p in itertools.permutations(range(a.n_half)) if is_isomorphism(p, a, a))


def compose(p, q):
    """(p o q)(h) = p[q[h]]."""
    return tuple(p[x] for x in q)

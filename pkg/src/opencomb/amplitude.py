"""Graph sums for open descendents and their extraction.

Every nodal graph contributes

    prod_i 2^{|V^I(G_i)| + g(G_i) + b(G_i) - 1} / |Aut(G)| * prod_e lambda(e)

with lambda(e) = 1/(lambda_i + lambda_j) on internal edges,
C_m * lambda_i^{-2m-1} on a boundary edge of face i carrying m illegal
sides, and 1 on ghost edges.  The sum over all m is matched against

    2^{(g+k-1)/2} sum_a <tau_a sigma^k>_g prod_i 2^{a_i} (2a_i - 1)!! / lambda_i^{2a_i+1}.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Mapping, NamedTuple, Sequence

from sympy import QQ, prime
from sympy.polys.matrices import DomainMatrix

from .errors import NonLaurentError, OutOfScopeError, VerificationError
from .nodal import NodalGraph, enumerate_nodal, max_nodes, nodal_automorphism_count
from .ratfunc import PartialFractionSum, RationalFunction
from .ribbon import KIND_B, KIND_I, stats

OUT_OF_SCOPE = "out of theorem scope"


def in_scope(g: int, k: int, l: int) -> bool:
    return min(g, k, l) >= 0 and 2 * g - 2 + k + 2 * l > 0 and (g + k - 1) % 2 == 0


def check_scope(g: int, k: int, l: int) -> None:
    if not in_scope(g, k, l):
        raise OutOfScopeError(f"(g,k,l)=({g},{k},{l}) is {OUT_OF_SCOPE}: need 2g-2+k+2l>0 and 2|g+k-1")


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


def double_factorial(n: int) -> int:
    """n!! with (-1)!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


# ---------------------------------------------------------------------------
# edge and graph weights
# ---------------------------------------------------------------------------

class EdgeInfo(NamedTuple):
    kind: str  # "internal", "boundary" or "ghost"
    faces: tuple[int, ...]  # face labels: two for internal edges, one for boundary edges
    m: int = 0


def edges_of(n: NodalGraph) -> list[EdgeInfo]:
    out = []
    for ci, comp in enumerate(n.components):
        if comp.is_ghost:
            out.extend(EdgeInfo("ghost", ()) for _ in comp.boundary_halves)
            continue
        fl = comp.half_face_label
        kinds = comp.kinds
        for h, p in comp.halfedges.edges:
            if kinds[h] == KIND_I:
                out.append(EdgeInfo("internal", tuple(sorted((fl[h], fl[p])))))
            else:
                b = h if kinds[h] == KIND_B else p
                x = comp.sigma1[b]
                out.append(EdgeInfo("boundary", (fl[x],), n.m_of_edge(ci, b)))
    return out


def edge_weight(e: EdgeInfo, n_vars: int) -> RationalFunction:
    if e.kind == "ghost":
        if e.m:
            raise ValueError("ghost edges carry no illegal sides")
        return RationalFunction.const(n_vars, 1)
    if e.kind == "internal":
        i, j = e.faces
        return 1 / (RationalFunction.lam(i, n_vars) + RationalFunction.lam(j, n_vars))
    (i,) = e.faces
    return catalan(e.m) * RationalFunction.lam(i, n_vars) ** (-2 * e.m - 1)


def component_power(comp) -> int:
    """Exponent |V^I| + g + b - 1 of the component prefactor."""
    st = stats(comp)
    return st.internal_vertices + st.genus + st.boundaries - 1


def graph_term(n: NodalGraph, aut: int | None = None) -> tuple[Fraction, tuple[int, ...], tuple]:
    """``(coefficient, lambda exponents, face pairs)`` of one graph's weight."""
    l = n.l
    if aut is None:
        aut = nodal_automorphism_count(n)
    coeff = Fraction(2 ** sum(component_power(c) for c in n.components), aut)
    exps = [0] * l
    pairs = []
    for e in edges_of(n):
        if e.kind == "internal":
            i, j = e.faces
            if i == j:
                coeff /= 2
                exps[i - 1] += 1
            else:
                pairs.append((i, j))
        elif e.kind == "boundary":
            coeff *= catalan(e.m)
            exps[e.faces[0] - 1] += 2 * e.m + 1
    return coeff, tuple(exps), tuple(sorted(pairs))


def graph_amplitude(n: NodalGraph, aut: int | None = None) -> RationalFunction:
    n.validate()
    s = PartialFractionSum(n.l)
    s.add(*graph_term(n, aut))
    return s.reduce()


# ---------------------------------------------------------------------------
# total amplitude
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    m: int
    count: int
    sum: PartialFractionSum = field(compare=False)

    def value(self) -> RationalFunction:
        return self.sum.reduce()


@lru_cache(maxsize=None)
def strata(g: int, k: int, l: int) -> tuple[Stratum, ...]:
    """Per-m graph sums over the nodal catalogs."""
    check_scope(g, k, l)
    out = []
    for m in range(0, max_nodes(g, k, l) + 1):
        cat = enumerate_nodal(g, k, l, m)
        s = PartialFractionSum(l)
        for e in cat:
            s.add(*graph_term(e.graph, e.aut))
        out.append(Stratum(m, len(cat), s))
    return tuple(out)


def amplitude_sum(g: int, k: int, l: int) -> PartialFractionSum:
    total = PartialFractionSum(l)
    for st in strata(g, k, l):
        total.extend(st.sum)
    return total


@lru_cache(maxsize=None)
def total_amplitude(g: int, k: int, l: int) -> RationalFunction:
    """Right-hand side summed over all m; must reduce to a Laurent polynomial."""
    r = amplitude_sum(g, k, l).reduce()
    if not r.is_laurent():
        raise NonLaurentError(f"total amplitude of (g,k,l)=({g},{k},{l}) is not Laurent: {r}")
    return r


# ---------------------------------------------------------------------------
# descendents
# ---------------------------------------------------------------------------

def half_dim(g: int, k: int, l: int) -> int:
    return (3 * g - 3 + k + 2 * l) // 2


def basis_coefficient(g: int, k: int, a: Sequence[int]) -> Fraction:
    """2^{(g+k-1)/2} prod 2^{a_i} (2a_i - 1)!!."""
    c = Fraction(2 ** ((g + k - 1) // 2))
    for x in a:
        c *= 2 ** x * double_factorial(2 * x - 1)
    return c


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 0:
        return [()] if total == 0 else []
    return [c for c in itertools.product(range(total + 1), repeat=parts) if sum(c) == total]


def bracket_text(g: int, k: int, a: Sequence[int], closed: bool = False) -> str:
    sub = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
    sup = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
    body = "".join(f"τ{x}" for x in sorted(a, reverse=True))
    if k == 1:
        body += "σ"
    elif k > 1:
        body += "σ" + str(k).translate(sup)
    if not body:
        body = "1"
    return f"⟨{body}⟩{str(g).translate(sub)}" + ("ᶜ" if closed else "")


def fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class DescendentTable:
    """(g, k, non-increasing a) -> exact value."""

    entries: dict[tuple[int, int, tuple[int, ...]], Fraction] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def __getitem__(self, key):
        g, k, a = key
        return self.entries[(g, k, tuple(sorted(a, reverse=True)))]

    def get(self, g, k, a, default=None):
        return self.entries.get((g, k, tuple(sorted(a, reverse=True))), default)

    def __contains__(self, key):
        g, k, a = key
        return (g, k, tuple(sorted(a, reverse=True))) in self.entries

    def __len__(self):
        return len(self.entries)

    def update(self, other: "DescendentTable"):
        for key, v in other.entries.items():
            if key in self.entries and self.entries[key] != v:
                raise VerificationError(f"conflicting values for {key}")
            self.entries[key] = v
        self.notes.extend(other.notes)

    def rows(self) -> list[tuple[int, int, tuple[int, ...], Fraction]]:
        return [(g, k, a, v) for (g, k, a), v in sorted(self.entries.items())]

    def to_text(self) -> str:
        lines = [f"{bracket_text(g, k, a)} = {fraction_text(v)}" for g, k, a, v in self.rows()]
        lines += [f"# {n}" for n in self.notes]
        return "\n".join(lines) + ("\n" if lines else "")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["g", "k", "a", "value"])
        for g, k, a, v in self.rows():
            w.writerow([g, k, " ".join(map(str, a)), f"{v.numerator}/{v.denominator}"])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [{"g": g, "k": k, "a": list(a), "value": f"{v.numerator}/{v.denominator}"}
                for g, k, a, v in self.rows()]
        return json.dumps({"rows": rows, "notes": self.notes}, sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DescendentTable":
        d = json.loads(text)
        t = cls(notes=list(d.get("notes", [])))
        for r in d["rows"]:
            t.entries[(r["g"], r["k"], tuple(r["a"]))] = Fraction(r["value"])
        return t


def _symmetrize(g, k, ordered: Mapping[tuple[int, ...], Fraction]) -> DescendentTable:
    t = DescendentTable()
    for a, v in ordered.items():
        key = (g, k, tuple(sorted(a, reverse=True)))
        if key in t.entries and t.entries[key] != v:
            raise VerificationError(f"{bracket_text(g, k, a)} is not symmetric in the faces")
        t.entries[key] = v
    return t


def extract_symbolic(g: int, k: int, l: int) -> dict[tuple[int, ...], Fraction]:
    """Route (i): read coefficients off the reduced Laurent polynomial."""
    terms = total_amplitude(g, k, l).laurent_terms()
    d = half_dim(g, k, l)
    out = {}
    for a in compositions(d, l):
        e = tuple(-(2 * x + 1) for x in a)
        out[a] = terms.pop(e, Fraction(0)) / basis_coefficient(g, k, a)
    if any(terms.values()):
        raise NonLaurentError(f"unexpected monomials {sorted(terms)} in ({g},{k},{l})")
    return out


def sample_points(n_vars: int, count: int, offset: int = 0) -> list[list[Fraction]]:
    """Distinct primes as evaluation points, deterministic in ``offset``."""
    pts = []
    idx = offset + 1
    for _ in range(count):
        pts.append([Fraction(prime(idx + i)) for i in range(n_vars)])
        idx += n_vars
    return pts


def extract_linear(g: int, k: int, l: int, extra: int = 2, max_tries: int = 8) -> dict[tuple[int, ...], Fraction]:
    """Route (ii): evaluate the graph sum at prime points and solve exactly."""
    total = amplitude_sum(g, k, l)
    unknowns = compositions(half_dim(g, k, l), l)
    n = len(unknowns)
    offset = 0
    for _ in range(max_tries):
        pts = sample_points(l, n + extra, offset)
        rows = []
        rhs = []
        for p in pts:
            row = []
            for a in unknowns:
                v = basis_coefficient(g, k, a)
                for x, lam in zip(a, p):
                    v /= lam ** (2 * x + 1)
                row.append(v)
            rows.append(row)
            rhs.append(total.evaluate(p))
        M = DomainMatrix([[QQ(x.numerator, x.denominator) for x in r] for r in rows[:n]], (n, n), QQ)
        if M.rank() < n:
            offset += 7 * (n + extra) * max(l, 1)
            continue
        b = DomainMatrix([[QQ(x.numerator, x.denominator)] for x in rhs[:n]], (n, 1), QQ)
        sol = M.lu_solve(b).to_Matrix()
        vals = [Fraction(int(sol[i, 0].p), int(sol[i, 0].q)) for i in range(n)]
        for row, r in zip(rows[n:], rhs[n:]):
            if sum(c * v for c, v in zip(row, vals)) != r:
                raise NonLaurentError(f"graph sum of ({g},{k},{l}) is not of the descendent form")
        return dict(zip(unknowns, vals))
    raise VerificationError("could not find a nonsingular set of sample points")


def extract_descendents(g: int, k: int, l: int, route: str = "both") -> DescendentTable:
    """Open descendents of one signature; ``route`` is symbolic, linear or both."""
    if not in_scope(g, k, l):
        t = DescendentTable()
        t.notes.append(f"(g,k,l)=({g},{k},{l}): {OUT_OF_SCOPE}")
        return t
    if route not in ("symbolic", "linear", "both"):
        raise ValueError(f"unknown route {route}")
    sym = extract_symbolic(g, k, l) if route in ("symbolic", "both") else None
    lin = extract_linear(g, k, l) if route in ("linear", "both") else None
    if sym is not None and lin is not None and sym != lin:
        raise VerificationError(f"extraction routes disagree on ({g},{k},{l})")
    return _symmetrize(g, k, sym if sym is not None else lin)


def open_signatures(max_dim: int) -> Iterator[tuple[int, int, int]]:
    """In-scope (g,k,l) with 3g-3+k+2l <= max_dim, in a fixed order."""
    for dim in range(0, max_dim + 1):
        for g in range(0, dim + 4):
            for l in range(0, dim + 4):
                k = dim - 3 * g + 3 - 2 * l
                if k >= 0 and in_scope(g, k, l):
                    yield (g, k, l)


def descendent_table(max_dim: int = 6, route: str = "both") -> DescendentTable:
    t = DescendentTable()
    for sig in open_signatures(max_dim):
        t.update(extract_descendents(*sig, route=route))
    return t

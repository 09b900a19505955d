"""Closed descendents from trivalent ribbon graph sums.

sum_a <tau_a>^c_g prod (2a_i - 1)!! / lambda_i^{2a_i+1}
    = sum_G 2^{|E|-|V|} / |Aut G| prod_e 1/(lambda_i + lambda_j)
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .amplitude import compositions, double_factorial, fraction_text, bracket_text, sample_points
from .enumeration import enumerate_closed_trivalent
from .errors import NonLaurentError, VerificationError
from .ratfunc import PartialFractionSum, RationalFunction


@lru_cache(maxsize=None)
def closed_sum(g: int, n: int) -> PartialFractionSum:
    if 2 * g - 2 + n <= 0 or n < 1:
        raise ValueError(f"unstable closed signature (g,n)=({g},{n})")
    s = PartialFractionSum(n)
    for gr, aut in enumerate_closed_trivalent(g, n):
        n_v = len(gr.vertices)
        n_e = gr.n_half // 2
        if 3 * n_v != 2 * n_e:
            raise VerificationError("closed graph is not trivalent")
        coeff = Fraction(2) ** (n_e - n_v) / aut
        exps = [0] * n
        pairs = []
        fl = gr.half_face_label
        for h, p in gr.halfedges.edges:
            i, j = sorted((fl[h], fl[p]))
            if i == j:
                coeff /= 2
                exps[i - 1] += 1
            else:
                pairs.append((i, j))
        s.add(coeff, exps, pairs)
    return s


@lru_cache(maxsize=None)
def closed_total_amplitude(g: int, n: int) -> RationalFunction:
    r = closed_sum(g, n).reduce()
    if not r.is_laurent():
        raise NonLaurentError(f"closed amplitude of (g,n)=({g},{n}) is not Laurent: {r}")
    return r


def closed_basis(a) -> int:
    out = 1
    for x in a:
        out *= double_factorial(2 * x - 1)
    return out


@dataclass
class ClosedTable:
    """(g, non-increasing a) -> <tau_a>^c_g."""

    entries: dict[tuple[int, tuple[int, ...]], Fraction] = field(default_factory=dict)

    def get(self, g, a, default=None):
        return self.entries.get((g, tuple(sorted(a, reverse=True))), default)

    def __getitem__(self, key):
        g, a = key
        return self.entries[(g, tuple(sorted(a, reverse=True)))]

    def __contains__(self, key):
        g, a = key
        return (g, tuple(sorted(a, reverse=True))) in self.entries

    def update(self, other: "ClosedTable"):
        for key, v in other.entries.items():
            if key in self.entries and self.entries[key] != v:
                raise VerificationError(f"conflicting closed values for {key}")
            self.entries[key] = v

    def rows(self):
        return [(g, a, v) for (g, a), v in sorted(self.entries.items())]

    def to_text(self) -> str:
        return "".join(f"{bracket_text(g, 0, a, closed=True)} = {fraction_text(v)}\n"
                       for g, a, v in self.rows())

    def to_json(self) -> str:
        rows = [{"g": g, "a": list(a), "value": f"{v.numerator}/{v.denominator}"} for g, a, v in self.rows()]
        return json.dumps({"rows": rows}, sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ClosedTable":
        t = cls()
        for r in json.loads(text)["rows"]:
            t.entries[(r["g"], tuple(r["a"]))] = Fraction(r["value"])
        return t


def _store(g, ordered) -> ClosedTable:
    t = ClosedTable()
    for a, v in ordered.items():
        key = (g, tuple(sorted(a, reverse=True)))
        if key in t.entries and t.entries[key] != v:
            raise VerificationError(f"closed bracket {key} not symmetric")
        t.entries[key] = v
    return t


def extract_closed(g: int, n: int, route: str = "both") -> ClosedTable:
    """Closed descendents of genus g with n insertions, by both routes."""
    d = 3 * g - 3 + n
    unknowns = compositions(d, n)
    sym = lin = None
    if route in ("symbolic", "both"):
        terms = closed_total_amplitude(g, n).laurent_terms()
        sym = {}
        for a in unknowns:
            sym[a] = terms.pop(tuple(-(2 * x + 1) for x in a), Fraction(0)) / closed_basis(a)
        if any(terms.values()):
            raise NonLaurentError(f"unexpected monomials in closed ({g},{n})")
    if route in ("linear", "both"):
        s = closed_sum(g, n)
        m = len(unknowns)
        offset = 0
        while lin is None:
            pts = sample_points(n, m + 2, offset)
            rows = [[Fraction(closed_basis(a)) / _mono_val(a, p) for a in unknowns] for p in pts]
            rhs = [s.evaluate(p) for p in pts]
            M = DomainMatrix([[QQ(x.numerator, x.denominator) for x in r] for r in rows[:m]], (m, m), QQ)
            if M.rank() < m:
                offset += 7 * (m + 2) * n
                if offset > 10 ** 4:
                    raise VerificationError("no nonsingular sample points")
                continue
            b = DomainMatrix([[QQ(x.numerator, x.denominator)] for x in rhs[:m]], (m, 1), QQ)
            sol = M.lu_solve(b).to_Matrix()
            vals = [Fraction(int(sol[i, 0].p), int(sol[i, 0].q)) for i in range(m)]
            for row, r in zip(rows[m:], rhs[m:]):
                if sum(c * v for c, v in zip(row, vals)) != r:
                    raise NonLaurentError(f"closed graph sum ({g},{n}) is not of the descendent form")
            lin = dict(zip(unknowns, vals))
    if sym is not None and lin is not None and sym != lin:
        raise VerificationError(f"closed extraction routes disagree on ({g},{n})")
    return _store(g, sym if sym is not None else lin)


def _mono_val(a, p) -> Fraction:
    out = Fraction(1)
    for x, lam in zip(a, p):
        out *= lam ** (2 * x + 1)
    return out


def closed_string_fill(table: ClosedTable, g: int, n_max: int) -> ClosedTable:
    """Extend genus-g rows to n_max insertions with the string equation.

    Starts from the rows already in ``table``; for genus 0 the seed is
    <tau_0^3> = 1, which must itself come from the graph sum.
    """
    out = ClosedTable(dict(table.entries))
    for n in range(2, n_max + 1):
        d = 3 * g - 3 + n
        if d < 0:
            continue
        for a in _partitions(d, n):
            key = (g, a)
            if key in out.entries:
                continue
            if 0 not in a:
                continue
            rest = list(a)
            rest.remove(0)
            total = Fraction(0)
            ok = True
            for j in range(len(rest)):
                if rest[j] == 0:
                    continue
                b = rest[:j] + [rest[j] - 1] + rest[j + 1:]
                v = out.get(g, b)
                if v is None:
                    ok = False
                    break
                total += v
            if ok and 2 * g - 2 + n - 1 > 0:
                out.entries[key] = total
    return out


def _partitions(d: int, n: int) -> list[tuple[int, ...]]:
    """Non-increasing n-tuples of nonnegative integers summing to d."""
    res = []

    def rec(rem, parts, maxv, acc):
        if parts == 0:
            if rem == 0:
                res.append(tuple(acc))
            return
        for x in range(min(rem, maxv), -1, -1):
            rec(rem - x, parts - 1, x, acc + [x])

    rec(d, n, d, [])
    return res

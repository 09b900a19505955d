"""Coefficient-level string and dilaton checks, and the Catalan integral identities."""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from sympy import Poly, QQ, symbols

from ..amplitude import DescendentTable, bracket_text, in_scope
from .report import Report


class OpenBrackets:
    """Lookup of open descendents with the vanishing rules made explicit.

    ``None`` means the bracket is not determined by the table.
    """

    def __init__(self, table: DescendentTable, signatures=None):
        self.table = table
        if signatures is None:
            signatures = {(g, k, len(a)) for g, k, a in table.entries}
        self.signatures = set(signatures)

    def __call__(self, g: int, k: int, a) -> Fraction | None:
        a = tuple(sorted(a, reverse=True))
        l = len(a)
        if g < 0 or k < 0 or min(a, default=0) < 0:
            return Fraction(0)
        if 2 * g - 2 + k + 2 * l <= 0:
            return Fraction(0)
        if 2 * sum(a) != 3 * g - 3 + k + 2 * l:
            return Fraction(0)
        if not in_scope(g, k, l):
            return Fraction(0)
        v = self.table.get(g, k, a)
        if v is not None:
            return v
        if (g, k, l) in self.signatures:
            return Fraction(0)
        return None


def string_dilaton_check(table: DescendentTable, signatures=None, suite: str | None = None) -> Report:
    """Check the string equation on rows with a tau_0 and the dilaton equation on rows with a tau_1."""
    br = OpenBrackets(table, signatures)
    rep = Report(suite or "string-dilaton")
    for g, k, a, v in table.rows():
        if suite in (None, "string") and 0 in a:
            rest = list(a)
            rest.remove(0)
            rhs = Fraction(1) if (g, k, tuple(rest)) == (0, 1, ()) else Fraction(0)
            known = True
            for j in range(len(rest)):
                if rest[j] == 0:
                    continue
                x = br(g, k, rest[:j] + [rest[j] - 1] + rest[j + 1:])
                if x is None:
                    known = False
                    break
                rhs += x
            if known:
                rep.add(f"string {bracket_text(g, k, a)}", v, rhs)
        if suite in (None, "dilaton") and 1 in a:
            rest = list(a)
            rest.remove(1)
            x = br(g, k, rest)
            if x is None:
                continue
            factor = sum(Fraction(2 * b + 1, 3) for b in rest) + Fraction(2 * k, 3)
            rhs = factor * x + (Fraction(1, 2) if (g, k, rest) == (1, 0, []) else 0)
            rep.add(f"dilaton {bracket_text(g, k, a)}", v, rhs)
    return rep


def catalan_integrals(m: int) -> tuple[Fraction, Fraction]:
    """Return the y^{2m} and y^{2m-1} coefficients of the two integral sums."""
    x, y = symbols("x y")
    first = Poly(0, y, domain=QQ)
    second = Poly(0, y, domain=QQ)
    for a in range(m):
        w = QQ(comb(m - 1, a), factorial(a + 1) * factorial(m - a))
        for target, e in ((0, 2 * (m - a) - 1), (1, 2 * (m - a - 1))):
            p = Poly(x ** (2 * a) * (y - x) ** e, x, y, domain=QQ).integrate(x)
            val = Poly(p.as_expr().subs(x, y), y, domain=QQ) - Poly(p.as_expr().subs(x, 0), y, domain=QQ)
            if target == 0:
                first += val * w
            else:
                second += val * w
    c1 = first.as_dict()
    c2 = second.as_dict()
    if set(c1) - {(2 * m,)} or set(c2) - {(2 * m - 1,)}:
        raise AssertionError("integral sum is not a monomial")
    q1 = c1.get((2 * m,), QQ(0))
    q2 = c2.get((2 * m - 1,), QQ(0))
    return Fraction(int(q1.numerator), int(q1.denominator)), Fraction(int(q2.numerator), int(q2.denominator))


def catalan_identities(m_max: int = 10) -> Report:
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    rep = Report("catalan")
    for m in range(1, m_max + 1):
        c1, c2 = catalan_integrals(m)
        rep.add(f"m={m} first", c1, Fraction(1, factorial(m + 1)))
        rep.add(f"m={m} second", c2, Fraction(2, factorial(m + 1)))
    return rep

"""Graded-commutative forms in r_i, dr_i, alpha_i, omega_i on the unit sphere.

A monomial is ``(r exponents, odd generators, omega exponents)``.  Odd
generators are encoded as integers, ``2i`` for dr_{i+1} and ``2i+1`` for
alpha_{i+1}, and kept sorted; reordering contributes the permutation sign.

The relations sum r_i^2 = 1 and sum r_i dr_i = 0 are handled by
:meth:`FormalForm.normal_form`.  Multiplication by r_n is injective on the
quotient, and after it every dr_n sits next to an r_n, so r_n dr_n and r_n^2
can both be eliminated.  The result is a canonical representative of r_n * x.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import combinations
from math import factorial

from .report import Report


def _sort_sign(odd: list[int]) -> tuple[int, tuple[int, ...]] | None:
    if len(set(odd)) != len(odd):
        return None
    sign = 1
    arr = list(odd)
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


class FormalForm:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms: dict[tuple, Fraction] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = Fraction(c)

    # -- generators ------------------------------------------------------------
    def _unit(self, r=None, odd=(), w=None, c=1) -> "FormalForm":
        r = tuple(r) if r is not None else (0,) * self.n
        w = tuple(w) if w is not None else (0,) * self.n
        return FormalForm(self.n, {(r, tuple(odd), w): Fraction(c)})

    @classmethod
    def const(cls, n: int, c=1) -> "FormalForm":
        return cls(n)._unit(c=c)

    @classmethod
    def r(cls, n: int, i: int) -> "FormalForm":
        e = [0] * n
        e[i - 1] = 1
        return cls(n)._unit(r=e)

    @classmethod
    def dr(cls, n: int, i: int) -> "FormalForm":
        return cls(n)._unit(odd=(2 * (i - 1),))

    @classmethod
    def alpha(cls, n: int, i: int) -> "FormalForm":
        return cls(n)._unit(odd=(2 * (i - 1) + 1,))

    @classmethod
    def omega(cls, n: int, i: int) -> "FormalForm":
        e = [0] * n
        e[i - 1] = 1
        return cls(n)._unit(w=e)

    # -- algebra ---------------------------------------------------------------
    def __add__(self, other: "FormalForm") -> "FormalForm":
        out = defaultdict(Fraction, self.terms)
        for k, c in other.terms.items():
            out[k] += c
        return FormalForm(self.n, out)

    def __neg__(self) -> "FormalForm":
        return FormalForm(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "FormalForm") -> "FormalForm":
        return self + (-other)

    def __mul__(self, other) -> "FormalForm":
        if not isinstance(other, FormalForm):
            return FormalForm(self.n, {k: c * Fraction(other) for k, c in self.terms.items()})
        out = defaultdict(Fraction)
        for (r1, o1, w1), c1 in self.terms.items():
            for (r2, o2, w2), c2 in other.terms.items():
                s = _sort_sign(list(o1) + list(o2))
                if s is None:
                    continue
                sign, odd = s
                key = (tuple(a + b for a, b in zip(r1, r2)), odd, tuple(a + b for a, b in zip(w1, w2)))
                out[key] += sign * c1 * c2
        return FormalForm(self.n, out)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def d(self) -> "FormalForm":
        out = defaultdict(Fraction)
        for (r, odd, w), c in self.terms.items():
            for i, e in enumerate(r):
                if not e:
                    continue
                s = _sort_sign([2 * i] + list(odd))
                if s is None:
                    continue
                sign, new = s
                rr = list(r)
                rr[i] -= 1
                out[(tuple(rr), new, w)] += sign * e * c
            for pos, x in enumerate(odd):
                if x % 2 == 0:
                    continue
                i = x // 2
                ww = list(w)
                ww[i] += 1
                sign = -1 if pos % 2 else 1
                out[(r, odd[:pos] + odd[pos + 1:], tuple(ww))] += -sign * c
        return FormalForm(self.n, out)

    def set_omega_zero(self) -> "FormalForm":
        return FormalForm(self.n, {k: c for k, c in self.terms.items() if not any(k[2])})

    # -- relations -------------------------------------------------------------
    def normal_form(self) -> "FormalForm":
        """Canonical representative of r_n * self modulo the sphere relations."""
        n = self.n
        last = n - 1
        dr_last = 2 * last
        work = (self * FormalForm.r(n, n)).terms
        out = defaultdict(Fraction)
        stack = list(work.items())
        while stack:
            (r, odd, w), c = stack.pop()
            if not c:
                continue
            if dr_last in odd:
                if r[last] == 0:
                    raise AssertionError("dr_n without a matching r_n")
                pos = odd.index(dr_last)
                for i in range(last):
                    s = _sort_sign(list(odd[:pos]) + [2 * i] + list(odd[pos + 1:]))
                    if s is None:
                        continue
                    sign, new = s
                    rr = list(r)
                    rr[last] -= 1
                    rr[i] += 1
                    stack.append(((tuple(rr), new, w), -sign * c))
                continue
            if r[last] >= 2:
                rr = list(r)
                rr[last] -= 2
                stack.append(((tuple(rr), odd, w), c))
                for i in range(last):
                    r2 = list(rr)
                    r2[i] += 2
                    stack.append(((tuple(r2), odd, w), -c))
                continue
            out[(r, odd, w)] += c
        return FormalForm(n, out)

    def equals(self, other: "FormalForm") -> bool:
        return (self - other).normal_form().is_zero()

    # -- printing --------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (r, odd, w), c in sorted(self.terms.items()):
            f = [f"r{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(r) if e]
            f += [("dr" if x % 2 == 0 else "α") + str(x // 2 + 1) for x in odd]
            f += [f"ω{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(w) if e]
            coeff = str(c) if c.denominator == 1 else f"({c})"
            parts.append("*".join([coeff] + f))
        return " + ".join(parts)

    def __str__(self):
        return self.to_text()


def angular_form(n: int) -> FormalForm:
    """Phi_L for n line bundles."""
    phi = FormalForm(n)
    for k in range(n):
        for i in range(1, n + 1):
            others = [j for j in range(1, n + 1) if j != i]
            for I in combinations(others, k):
                t = FormalForm.r(n, i) * FormalForm.r(n, i) * FormalForm.alpha(n, i)
                for j in I:
                    t = t * FormalForm.r(n, j) * FormalForm.dr(n, j) * FormalForm.alpha(n, j)
                for h in others:
                    if h not in I:
                        t = t * FormalForm.omega(n, h)
                phi = phi + t * (2 ** k * factorial(k))
    return phi


def sphere_volume(n: int) -> FormalForm:
    vol = FormalForm(n)
    for i in range(1, n + 1):
        t = FormalForm.r(n, i) * FormalForm.r(n, i) * FormalForm.alpha(n, i)
        for j in range(1, n + 1):
            if j != i:
                t = t * FormalForm.r(n, j) * FormalForm.dr(n, j) * FormalForm.alpha(n, j)
        vol = vol + t
    return vol * (2 ** (n - 1) * factorial(n - 1))


def angular_identity(n_max: int = 3) -> Report:
    rep = Report("angular")
    for n in range(1, n_max + 1):
        phi = angular_form(n)
        top = FormalForm.const(n)
        for i in range(1, n + 1):
            top = top * FormalForm.omega(n, i)
        residual = (phi.d() + top).normal_form()
        rep.add(f"n={n} d(Phi)+prod omega", residual.to_text(), "0")
        fiber = (phi.set_omega_zero() - sphere_volume(n)).normal_form()
        rep.add(f"n={n} fiber restriction", fiber.to_text(), "0")
    return rep

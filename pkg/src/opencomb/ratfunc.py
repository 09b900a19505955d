"""Exact multivariate rational functions in lambda_1..lambda_n.

Arithmetic is delegated to sympy's sparse rational function fields over QQ,
which keep numerator and denominator coprime.  :class:`PartialFractionSum`
accumulates the product-of-simple-factor terms produced by graph sums and
reduces them with a single exact division.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from sympy import QQ
from sympy.polys.fields import field as sympy_field
from sympy.polys.rings import ring as sympy_ring

from .errors import NonLaurentError


def var_names(n: int) -> list[str]:
    return [f"λ{i}" for i in range(1, n + 1)]


@lru_cache(maxsize=None)
def poly_ring(n: int):
    names = ",".join(var_names(n)) if n else "λ0"
    R, *gens = sympy_ring(names, QQ)
    return R, tuple(gens[:n]) if n else ()


@lru_cache(maxsize=None)
def frac_field(n: int):
    names = ",".join(var_names(n)) if n else "λ0"
    K, *gens = sympy_field(names, QQ)
    return K, tuple(gens[:n]) if n else ()


def _q(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class RationalFunction:
    """A reduced quotient of polynomials with rational coefficients."""

    __slots__ = ("n_vars", "_el")

    def __init__(self, n_vars: int, element):
        self.n_vars = n_vars
        self._el = element

    # -- constructors ----------------------------------------------------------
    @classmethod
    def const(cls, n_vars: int, c) -> "RationalFunction":
        K, _ = frac_field(n_vars)
        c = Fraction(c)
        return cls(n_vars, K(QQ(c.numerator, c.denominator)))

    @classmethod
    def zero(cls, n_vars: int) -> "RationalFunction":
        return cls.const(n_vars, 0)

    @classmethod
    def lam(cls, i: int, n_vars: int) -> "RationalFunction":
        """The variable lambda_i (1-based)."""
        _, gens = frac_field(n_vars)
        return cls(n_vars, gens[i - 1])

    @classmethod
    def from_polys(cls, n_vars: int, num, den) -> "RationalFunction":
        K, _ = frac_field(n_vars)
        return cls(n_vars, K(num.set_ring(K.ring)) / K(den.set_ring(K.ring)))

    @classmethod
    def from_laurent(cls, n_vars: int, terms: Mapping[tuple[int, ...], Fraction]) -> "RationalFunction":
        """Sum of ``c * prod lambda_i^{e_i}`` with integer (possibly negative) ``e_i``."""
        R, gens = poly_ring(n_vars)
        if not terms:
            return cls.zero(n_vars)
        shift = [max(0, -min(e[i] for e in terms)) for i in range(n_vars)]
        num = R.zero
        for e, c in terms.items():
            mono = R.one
            for i, x in enumerate(e):
                mono *= gens[i] ** (x + shift[i])
            num += mono * QQ(Fraction(c).numerator, Fraction(c).denominator)
        den = R.one
        for i, s in enumerate(shift):
            den *= gens[i] ** s
        return cls.from_polys(n_vars, num, den)

    # -- arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.n_vars != self.n_vars:
                raise ValueError("variable count mismatch")
            return other
        return RationalFunction.const(self.n_vars, other)

    def __add__(self, other):
        return RationalFunction(self.n_vars, self._el + self._coerce(other)._el)

    __radd__ = __add__

    def __sub__(self, other):
        return RationalFunction(self.n_vars, self._el - self._coerce(other)._el)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RationalFunction(self.n_vars, -self._el)

    def __mul__(self, other):
        return RationalFunction(self.n_vars, self._el * self._coerce(other)._el)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return RationalFunction(self.n_vars, self._el / self._coerce(other)._el)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        return RationalFunction(self.n_vars, self._el ** e)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.const(self.n_vars, other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.n_vars == other.n_vars and self._el == other._el

    def __hash__(self):
        return hash((self.n_vars, self.to_text()))

    # -- structure -------------------------------------------------------------
    @property
    def numerator(self):
        return self._el.numer

    @property
    def denominator(self):
        return self._el.denom

    def is_zero(self) -> bool:
        return not self._el.numer

    def is_laurent(self) -> bool:
        """True when the reduced denominator is a single monomial."""
        return len(self._el.denom.terms()) == 1

    def laurent_terms(self) -> dict[tuple[int, ...], Fraction]:
        """Exponent vector -> coefficient; raises if not a Laurent polynomial."""
        if not self.is_laurent():
            raise NonLaurentError(f"denominator {self._el.denom.as_expr()} is not a monomial")
        (dexp, dc), = self._el.denom.terms()
        dc = _q(dc)
        out = {}
        for e, c in self._el.numer.terms():
            key = tuple(e[i] - dexp[i] for i in range(self.n_vars))
            out[key] = _q(c) / dc
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        pt = [Fraction(x) for x in point]
        num = sum((_q(c) * _mono(e, pt) for e, c in self._el.numer.terms()), Fraction(0))
        den = sum((_q(c) * _mono(e, pt) for e, c in self._el.denom.terms()), Fraction(0))
        return num / den

    # -- printing --------------------------------------------------------------
    def to_text(self) -> str:
        """Canonical text: Laurent terms sorted by exponent, otherwise N/D."""
        if self.is_zero():
            return "0"
        if self.is_laurent():
            return laurent_text(self.laurent_terms())
        num = _poly_text(self._el.numer, self.n_vars)
        den = _poly_text(self._el.denom, self.n_vars)
        return f"({num})/({den})"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"


def _mono(e, pt) -> Fraction:
    out = Fraction(1)
    for x, p in zip(pt, e):
        if p:
            out *= x ** p
    return out


def _factor_text(exps: Iterable[tuple[int, int]]) -> list[str]:
    return [f"λ{i}" if p == 1 else f"λ{i}^{p}" for i, p in exps if p]


def laurent_text(terms: Mapping[tuple[int, ...], Fraction]) -> str:
    parts = []
    for e in sorted(terms, key=lambda e: tuple(-x for x in e)):
        c = Fraction(terms[e])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        c = abs(c)
        up = _factor_text((i + 1, x) for i, x in enumerate(e) if x > 0)
        down = _factor_text((i + 1, -x) for i, x in enumerate(e) if x < 0)
        num = "*".join(([str(c.numerator)] if c.numerator != 1 or not up else []) + up)
        den_f = ([str(c.denominator)] if c.denominator != 1 else []) + down
        if not den_f:
            body = num
        elif len(den_f) == 1:
            body = f"{num}/{den_f[0]}"
        else:
            body = f"{num}/(" + "*".join(den_f) + ")"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _poly_text(p, n) -> str:
    terms = {}
    for e, c in p.terms():
        terms[tuple(e[:n])] = _q(c)
    return laurent_text(terms)


class PartialFractionSum:
    """Sum of terms ``c / (prod lambda_i^{e_i} * prod (lambda_a + lambda_b))``.

    Terms with equal denominators are merged before any polynomial work, so
    the reduction costs one common-denominator numerator and one division.
    """

    def __init__(self, n_vars: int):
        self.n_vars = n_vars
        self.groups: dict[tuple, Fraction] = defaultdict(Fraction)

    def add(self, coeff, exps: Sequence[int], pairs: Iterable[tuple[int, int]] = ()):
        """``exps`` are denominator powers; ``pairs`` are 1-based face pairs with a < b."""
        key = (tuple(exps), tuple(sorted(pairs)))
        self.groups[key] += Fraction(coeff)

    def extend(self, other: "PartialFractionSum"):
        for key, c in other.groups.items():
            self.groups[key] += c

    def items(self):
        return sorted((k, c) for k, c in self.groups.items() if c)

    def evaluate(self, point: Sequence) -> Fraction:
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for (exps, pairs), c in self.items():
            den = Fraction(1)
            for x, e in zip(pt, exps):
                den *= x ** e
            for a, b in pairs:
                den *= pt[a - 1] + pt[b - 1]
            total += c / den
        return total

    def reduce(self) -> RationalFunction:
        """Exact total as a reduced rational function.

        Terms sharing a set of linear factors are merged first; the resulting
        fractions are then added pairwise in a balanced tree over a factored
        common denominator, cancelling linear factors as soon as they divide.
        """
        n = self.n_vars
        R, gens = poly_ring(n)
        items = self.items()
        if not items:
            return RationalFunction.zero(n)
        by_pairs: dict[tuple, list] = defaultdict(list)
        for (exps, pairs), c in items:
            by_pairs[pairs].append((exps, c))
        lin = {}
        fracs = []
        for pairs, terms in sorted(by_pairs.items()):
            max_e = tuple(max(e[i] for e, _ in terms) for i in range(n))
            num = R.zero
            for e, c in terms:
                mono = R(QQ(c.numerator, c.denominator))
                for i in range(n):
                    if max_e[i] - e[i]:
                        mono *= gens[i] ** (max_e[i] - e[i])
                num += mono
            cnt: dict[tuple[int, int], int] = defaultdict(int)
            for pr in pairs:
                cnt[pr] += 1
                if pr not in lin:
                    lin[pr] = gens[pr[0] - 1] + gens[pr[1] - 1]
            fracs.append(_cancel(num, max_e, dict(cnt), lin))
        while len(fracs) > 1:
            nxt = [_merge(fracs[i], fracs[i + 1], gens, lin) for i in range(0, len(fracs) - 1, 2)]
            if len(fracs) % 2:
                nxt.append(fracs[-1])
            fracs = nxt
        num, max_e, cnt = fracs[0]
        den = R.one
        for i in range(n):
            den *= gens[i] ** max_e[i]
        for pr, c in sorted(cnt.items()):
            den *= lin[pr] ** c
        return RationalFunction.from_polys(n, num, den)


def _cancel(num, exps, cnt, lin):
    """Divide out linear factors of the denominator that divide ``num``."""
    cnt = dict(cnt)
    if num:
        for pr in sorted(cnt):
            while cnt[pr]:
                q, r = num.div(lin[pr])
                if r:
                    break
                num = q
                cnt[pr] -= 1
    return num, tuple(exps), {p: c for p, c in cnt.items() if c}


def _merge(a, b, gens, lin):
    na, ea, ca = a
    nb, eb, cb = b
    e = tuple(max(x, y) for x, y in zip(ea, eb))
    keys = set(ca) | set(cb)
    c = {p: max(ca.get(p, 0), cb.get(p, 0)) for p in keys}

    def lift(num, ex, cn):
        for i, (x, y) in enumerate(zip(e, ex)):
            if x - y:
                num = num * gens[i] ** (x - y)
        for p in sorted(keys):
            d = c[p] - cn.get(p, 0)
            if d:
                num = num * lin[p] ** d
        return num

    return _cancel(lift(na, ea, ca) + lift(nb, eb, cb), e, c, lin)

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from opencomb.amplitude import DescendentTable, descendent_table
from opencomb.verify import (FormalForm, Report, TruncatedSeries, angular_form, angular_identity,
                             catalan_identities, open_kdv_check, string_dilaton_check)
from opencomb.verify.forms import sphere_volume
from opencomb.verify.identities import OpenBrackets, catalan_integrals
from opencomb.verify.series import default_closed_table, default_open_table, monomials


@pytest.fixture(scope="module")
def small_table():
    return descendent_table(4)


# -- string and dilaton -------------------------------------------------------------

def test_string_dilaton_pass(small_table):
    rep = string_dilaton_check(small_table)
    assert rep.passed and len(rep.records) >= 5
    names = [r.instance for r in rep.records]
    assert "dilaton ⟨τ1τ0σ⟩₀" in names
    assert "dilaton ⟨τ1⟩₁" in names


def test_dilaton_examples(small_table):
    rep = string_dilaton_check(small_table, suite="dilaton")
    rec = {r.instance: r for r in rep.records}
    assert rec["dilaton ⟨τ1τ0σ⟩₀"].rhs == "1"
    assert rec["dilaton ⟨τ1⟩₁"].lhs == "1/2" and rec["dilaton ⟨τ1⟩₁"].rhs == "1/2"
    assert small_table[(0, 1, (0,))] == 1 and small_table[(0, 3, ())] == 1


def test_string_negative_control(small_table):
    bad = DescendentTable(dict(small_table.entries))
    key = (0, 1, (1, 0))
    bad.entries[key] += 1
    rep = string_dilaton_check(bad)
    assert not rep.passed
    assert any("⟨τ1τ0σ⟩₀" in f.instance for f in rep.failures)


def test_brackets_vanishing_rules(small_table):
    br = OpenBrackets(small_table)
    assert br(0, 2, (0,)) == 0  # out of scope
    assert br(0, 1, (3,)) == 0  # dimension mismatch
    assert br(0, 1, ()) == 0  # unstable
    assert br(3, 0, (4, 1)) is None  # signature not computed


# -- Catalan ---------------------------------------------------------------------------

def test_catalan_small_cases():
    assert catalan_integrals(1) == (Fraction(1, 2), Fraction(1))
    rep = catalan_identities(10)
    assert rep.passed and len(rep.records) == 20


# -- formal forms --------------------------------------------------------------------------

def test_angular_identity():
    rep = angular_identity(3)
    assert rep.passed and len(rep.records) == 6


def test_angular_n1():
    phi = angular_form(1)
    assert phi.equals(FormalForm.alpha(1, 1))
    assert phi.d().equals(-FormalForm.omega(1, 1))


def test_angular_negative_control():
    for n in (1, 2, 3):
        top = FormalForm.const(n)
        for i in range(1, n + 1):
            top = top * FormalForm.omega(n, i)
        assert not (angular_form(n).d() - top).normal_form().is_zero()
        wrong = sphere_volume(n) * 3
        assert not (angular_form(n).set_omega_zero() - wrong).normal_form().is_zero()


def test_sphere_relations_vanish():
    n = 3
    r = [FormalForm.r(n, i) for i in range(1, n + 1)]
    dr = [FormalForm.dr(n, i) for i in range(1, n + 1)]
    one = FormalForm.const(n)
    assert (r[0] * r[0] + r[1] * r[1] + r[2] * r[2] - one).normal_form().is_zero()
    assert (r[0] * dr[0] + r[1] * dr[1] + r[2] * dr[2]).normal_form().is_zero()
    # consequence of the derivative relation on a product
    assert ((r[0] * dr[0] + r[1] * dr[1]) * dr[0] + r[2] * dr[2] * dr[0]).normal_form().is_zero()


N = 3
GENS = [("r", 0), ("dr", 1), ("alpha", 1), ("omega", 2)]


@st.composite
def monomial(draw):
    parts = draw(st.lists(st.tuples(st.sampled_from(GENS), st.integers(1, N)), max_size=4))
    f = FormalForm.const(N, draw(st.integers(-3, 3)))
    deg = 0
    for (name, d), i in parts:
        f = f * getattr(FormalForm, name)(N, i)
        deg += d
    return f, deg


@given(monomial(), monomial())
def test_graded_commutativity(x, y):
    (a, da), (b, db) = x, y
    sign = -1 if da * db % 2 else 1
    assert (a * b - b * a * sign).normal_form().is_zero()


@given(monomial(), monomial())
def test_leibniz(x, y):
    (a, da), (b, _) = x, y
    sign = -1 if da % 2 else 1
    lhs = (a * b).d()
    rhs = a.d() * b + a * b.d() * sign
    assert (lhs - rhs).normal_form().is_zero()


@given(monomial())
def test_d_squared_zero(x):
    assert x[0].d().d().normal_form().is_zero()


@given(monomial(), monomial())
def test_normal_form_linear_and_blind_to_relations(x, y):
    a, b = x[0], y[0]
    assert (a + b).normal_form().equals(a.normal_form() + b.normal_form())
    r = [FormalForm.r(N, i) for i in range(1, N + 1)]
    dr = [FormalForm.dr(N, i) for i in range(1, N + 1)]
    sphere = r[0] * r[0] + r[1] * r[1] + r[2] * r[2] - FormalForm.const(N)
    tangent = r[0] * dr[0] + r[1] * dr[1] + r[2] * dr[2]
    shifted = a + sphere * b + tangent * b
    assert shifted.normal_form().to_text() == a.normal_form().to_text()
    assert shifted.equals(a)


# -- truncated series --------------------------------------------------------------------------

coeff_maps = st.dictionaries(
    st.tuples(st.integers(-2, 2), st.sampled_from(monomials(3, 3))),
    st.fractions(min_value=-4, max_value=4, max_denominator=5), max_size=6)


def series(c):
    return TruncatedSeries(2, 3, c)


@given(coeff_maps, coeff_maps)
def test_series_product_truncates_and_commutes(a, b):
    x, y = series(a), series(b)
    p = x * y
    assert all(sum(m) <= 3 for (_, m) in p.coeffs)
    assert (p - y * x).coeffs == {}


@given(coeff_maps, coeff_maps, coeff_maps)
def test_series_distributive(a, b, c):
    x, y, z = series(a), series(b), series(c)
    assert (x * (y + z) - (x * y + x * z)).coeffs == {}


def test_series_unknown_propagation():
    one = TruncatedSeries(2, 3, {(0, (0, 0, 0)): 1})
    unk = TruncatedSeries(2, 3, {}, {(1, (1, 0, 0))})
    p = one * unk
    assert p.coefficient(1, (1, 0, 0)) is None
    assert p.coefficient(0, (0, 0, 0)) == 0
    assert p.scale(2, 1).coefficient(2, (1, 0, 0)) is None


# -- open KdV -------------------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2])
def test_open_kdv(n):
    rep = open_kdv_check(n)
    assert rep.passed
    assert len(rep.records) > 200
    assert "coefficients compared" in rep.notes[0]


def test_open_kdv_negative_control():
    rep = open_kdv_check(1, closed_bracket=lambda g, a: Fraction(0))
    assert not rep.passed
    assert rep.failures


def test_open_kdv_corrupted_open_table():
    bad = DescendentTable(dict(default_open_table().entries))
    bad.entries[(0, 1, (1, 0))] = Fraction(5)
    assert not open_kdv_check(1, open_table=bad).passed


def test_open_kdv_rejects_n0():
    with pytest.raises(ValueError):
        open_kdv_check(0)


# -- reports --------------------------------------------------------------------------------------------

def test_report_json():
    rep = Report("x")
    assert not rep.passed
    rep.add("a", Fraction(1, 2), Fraction(1, 2))
    rep.add("b", 1, 2)
    d = json.loads(rep.to_json())
    assert d["records"][0] == {"suite": "x", "instance": "a", "lhs": "1/2", "rhs": "1/2", "pass": True}
    assert not d["passed"] and rep.summary() == "x: 1/2 instances pass"


def test_closed_inputs_come_from_graph_sums():
    t = default_closed_table()
    assert t[(0, (0, 0, 0))] == 1 and t[(1, (1,))] == Fraction(1, 24)

from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mellinrec.arith import (
    QQ,
    QQ_EPS,
    BigRational,
    LaurentSeries,
    Poly,
    RatFunc,
    dispersion,
    field_of,
    integer_roots,
    poly_gcd,
    rational_roots,
    resultant,
    shift_poly,
)

x = Poly.gen("x")
j = Poly.gen("j")


# -- rationals ---------------------------------------------------------------


def test_big_rational_is_reduced_fraction():
    r = BigRational(6, -4)
    assert (r.numerator, r.denominator) == (-3, 2)
    assert BigRational(0, 7) == BigRational(0, 1)


@given(st.fractions(), st.fractions(), st.fractions())
def test_rational_field_identities(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a - a == 0
    if b:
        assert (a / b) * b == a


# -- polynomials -------------------------------------------------------------


def test_gcd_common_root():
    assert poly_gcd(x * x - 1, x * x - 2 * x + 1) == x - 1


def test_divmod_exact():
    q, r = divmod(x * x - 1, x - 1)
    assert q == x + 1 and r.is_zero()


def test_gcd_euclid():
    assert poly_gcd(x ** 3 + x, x * x + 1) == x * x + 1


def test_divmod_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        divmod(x, Poly((), "x"))


def test_shift_examples():
    assert shift_poly(x * x, 1) == x * x + 2 * x + 1
    assert shift_poly(x * x - x, -1) == x * x - 3 * x + 2
    s = shift_poly(x, j)
    assert s.coeff(1) == Poly((1,), "j") and s.coeff(0) == j


def test_gcd_is_monic():
    g = poly_gcd(2 * x * x - 2, 3 * x - 3)
    assert g.lc == 1


poly_st = st.lists(st.integers(-9, 9), min_size=1, max_size=13).map(lambda cs: Poly(cs, "x"))


@settings(max_examples=150, deadline=None)
@given(poly_st, poly_st)
def test_divmod_reconstruction(p, q):
    if q.is_zero():
        return
    quo, rem = divmod(p, q)
    assert q * quo + rem == p
    assert rem.is_zero() or rem.degree < q.degree


# -- roots, resultants, dispersion -------------------------------------------


def test_integer_roots_examples():
    assert integer_roots((j - 3) * (j + 1) * j) == {-1, 0, 3}
    assert integer_roots(j * j + 1) == set()
    assert integer_roots(2 * j * j - j - 1) == {1}


def test_rational_roots_keep_multiplicity():
    assert rational_roots((2 * x + 1) ** 2 * (x - 3)) == {Fraction(-1, 2): 2, Fraction(3): 1}


def test_resultant_detects_common_root():
    assert resultant(x - 1, x * x - 1) == 0
    assert resultant(x - 2, x * x - 1) != 0


def test_dispersion_examples():
    assert dispersion(x, x - 3) == {3}
    assert dispersion(x, x) == {0}
    assert dispersion(x * (x - 1), x - 4) == {3, 4}


roots_st = st.lists(st.integers(-6, 6), min_size=1, max_size=4)


@settings(max_examples=80, deadline=None)
@given(roots_st, roots_st)
def test_dispersion_matches_brute_force(rp, rq):
    p = Poly.from_roots(rp, "x")
    q = Poly.from_roots(rq, "x")
    brute = {s for s in range(21) if poly_gcd(p, q.shift(s)).degree > 0}
    assert dispersion(p, q) == brute


# -- rational functions ------------------------------------------------------


def test_ratfunc_normal_form():
    f = RatFunc(2 * x * x - 2, 4 * x - 4)
    assert f.den.lc == 1
    assert poly_gcd(f.num, f.den).degree == 0
    assert f == RatFunc(x + 1) / 2


def test_ratfunc_shift_and_eval():
    f = RatFunc(Poly((1,), "x"), x)
    assert f.shift(1)(Fraction(2)) == Fraction(1, 3)
    with pytest.raises(ZeroDivisionError):
        f(Fraction(0))


# -- eps-Laurent series ------------------------------------------------------


def test_laurent_inverse_eps_times_eps():
    inv = LaurentSeries.monomial(Fraction(1), -1, 2)
    eps = LaurentSeries.monomial(Fraction(1), 1, 4)
    prod = inv * eps
    assert dict(prod.terms()) == {0: 1}


def test_laurent_geometric_series():
    one_plus = LaurentSeries.from_dict({0: Fraction(1), 1: Fraction(1)}, 2)
    one = LaurentSeries.from_dict({0: Fraction(1)}, 2)
    q = one / one_plus
    assert dict(q.terms()) == {0: 1, 1: -1, 2: 1}


def test_laurent_pole_times_geometric():
    # a factor 1/eps costs one order: the geometric series is needed to eps^3
    one_plus = LaurentSeries.from_dict({0: Fraction(1), 1: Fraction(1)}, 3)
    one = LaurentSeries.from_dict({0: Fraction(1)}, 3)
    inv = LaurentSeries.monomial(Fraction(1), -1, 2)
    r = inv * (one / one_plus)
    assert dict(r.terms()) == {-1: 1, 0: -1, 1: 1, 2: -1}
    assert r.order == 2


def test_laurent_order_propagates_minimum():
    geo = LaurentSeries.from_dict({0: Fraction(1)}, 2) / LaurentSeries.from_dict({0: Fraction(1), 1: Fraction(1)}, 2)
    r = LaurentSeries.monomial(Fraction(1), -1, 2) * geo
    assert r.order == 1


def test_laurent_division_by_truncated_zero():
    with pytest.raises(ZeroDivisionError):
        LaurentSeries.from_dict({0: Fraction(1)}, 2) / LaurentSeries.zero(2)


def test_laurent_beyond_order_is_unknown():
    s = LaurentSeries.from_dict({0: Fraction(1)}, 1)
    with pytest.raises(IndexError):
        s[2]


series_st = st.dictionaries(st.integers(-2, 3), st.fractions(max_denominator=20), min_size=1, max_size=5)


@settings(max_examples=100, deadline=None)
@given(series_st, series_st)
def test_laurent_div_then_mul_round_trip(a, b):
    sa = LaurentSeries.from_dict(a, 3)
    sb = LaurentSeries.from_dict(b, 3)
    if sb.is_zero() or sa.is_zero():
        return
    back = (sa / sb) * sb
    top = min(back.order, sa.order)
    for e in range(min(back.lead, sa.lead), top + 1):
        assert back[e] == sa[e]


# -- constant fields ---------------------------------------------------------


def test_field_detection():
    eps = RatFunc.gen("eps")
    assert field_of(Fraction(1), 2) == QQ
    assert field_of(eps + 1) == QQ_EPS


def test_exact_arithmetic_only():
    for a, b in product([Fraction(1, 3), Fraction(-7, 5)], repeat=2):
        assert isinstance(a * b + a / b, Fraction)

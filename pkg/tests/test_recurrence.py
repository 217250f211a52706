from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import as_zeta
from mellinrec.arith import RatFunc
from mellinrec.harmonic import HExpr, ZetaValue, parse_hexpr
from mellinrec.recurrence import (
    InsufficientInitialConditions,
    Recurrence,
    apply,
    singular_points,
    unroll,
    verify_solution,
)
from no22_oracle import NO22, X, no22_coefficients

P = parse_hexpr
N = RatFunc.gen("N")


def diff_rec(rhs=None):
    """I(N) - I(N-1) = rhs."""
    return Recurrence([1, -1], rhs, "N")


# -- construction ------------------------------------------------------------


def test_recurrence_rejects_zero_end_coefficients():
    with pytest.raises(ValueError):
        Recurrence([0, 1])
    with pytest.raises(ValueError):
        Recurrence([1])


def test_cleared_has_polynomial_coefficients():
    rec = Recurrence([1 / N, -1], P("1/N^2"))
    c = rec.cleared()
    assert all(a.den.degree == 0 for a in c.coeffs)
    assert c.coeffs == [RatFunc.const(1, "N"), -N]


# -- apply -------------------------------------------------------------------


def test_apply_examples():
    assert apply(diff_rec(), HExpr.S((1,))) == P("1/N")
    assert apply(diff_rec(), P("1")).is_zero()


def test_apply_rejects_other_variable():
    with pytest.raises(ValueError):
        apply(diff_rec(), P("S[1](k)"))


def test_apply_no22_closed_form_is_minus_two_x(no22_rec, no22_solution, no22_file):
    # the bundled fixture carries the sign under which the closed form solves it
    assert apply(no22_rec, no22_solution) == no22_rec.rhs
    lhs = apply(no22_rec, no22_solution)
    for n in (4, 7, 12):
        assert lhs.eval_exact(n) == as_zeta(X(n)) * -2


def test_no22_fixture_x_matches_oracle(no22_file):
    x = no22_file.defines["X"]
    for n in range(4, 30):
        assert x.eval_exact(n) == as_zeta(X(n))


def test_no22_closed_form_matches_oracle(no22_solution):
    for n in range(1, 40):
        assert no22_solution.eval_exact(n) == as_zeta(NO22(n))


@st.composite
def small_expr(draw):
    atoms = ["S[1](N)", "S[-2](N)", "S[2,1](N)", "1/(N+1)", "(-1)^N", "z(3)*S[1](N)", "N"]
    picks = draw(st.lists(st.sampled_from(atoms), min_size=1, max_size=3))
    cs = draw(st.lists(st.integers(-4, 4), min_size=len(picks), max_size=len(picks)))
    return P(" + ".join(f"({c})*{a}" for c, a in zip(cs, picks)))


coeff_st = st.sampled_from([N, N + 1, 2 * N - 1, RatFunc.const(3, "N"), N * N])


@settings(max_examples=40, deadline=None)
@given(small_expr(), small_expr(), st.integers(-3, 3), coeff_st, coeff_st)
def test_apply_is_linear(a, b, c, a0, a1):
    rec = Recurrence([a0, a1], None, "N")
    assert apply(rec, a * c + b) == apply(rec, a) * c + apply(rec, b)


@settings(max_examples=30, deadline=None)
@given(small_expr(), coeff_st, coeff_st)
def test_apply_agrees_with_pointwise_substitution(e, a0, a1):
    rec = Recurrence([a0, a1], None, "N")
    out = apply(rec, e)
    for n in range(2, 10):
        want = e.eval_exact(n) * a0(Fraction(n)) + e.eval_exact(n - 1) * a1(Fraction(n))
        assert out.eval_exact(n) == want


# -- verify_solution ---------------------------------------------------------


def test_verify_examples():
    rec = diff_rec(P("1/N"))
    ok = verify_solution(rec, HExpr.S((1,)), {0: 0}, range(1, 51))
    assert ok.passed and len(ok.checked) == 50
    assert all(v.is_zero() for v in ok.residuals.values())
    bad = verify_solution(rec, P("S[1](N) + 1/N"), None, range(1, 51))
    assert not bad.passed and bad.first_failure == 1
    # the candidate has a pole at N=0, so N=1 is flagged; N=2 shows 1/2 - 1
    assert "pole" in bad.failures[1]
    assert bad.residuals[2] == ZetaValue.const(Fraction(-1, 2))


def test_verify_reports_initial_condition_mismatch():
    rec = diff_rec(P("1/N"))
    rep = verify_solution(rec, P("S[1](N) + 1"), {0: 0}, range(1, 20))
    assert rep.failures == {} and 0 in rep.ic_failures
    assert not rep.passed


def test_verify_counts_poles_as_failures():
    rec = Recurrence([N - 3, -1], None, "N")
    rep = verify_solution(rec, P("1/(N-5)"), None, range(1, 10))
    assert 5 in rep.failures and 6 in rep.failures


def test_verify_symbolic_residual():
    rec = diff_rec(P("1/N"))
    rep = verify_solution(rec, P("S[1](N) + 1/N"), None, range(1, 3), symbolic=True)
    assert rep.symbolic == P("1/N - 1/(N-1)")


def test_verify_no22_fixture(no22_rec, no22_solution, no22_ics):
    rep = verify_solution(no22_rec, no22_solution, no22_ics, range(4, 101))
    assert rep.passed, rep.summary()
    assert len(rep.residuals) == 97


# -- singular points ---------------------------------------------------------


def test_singular_points_examples(no22_rec):
    assert singular_points(no22_rec).forward == {0, 1, 2}
    assert singular_points(diff_rec()).forward == set()
    assert singular_points(Recurrence([N, -1])).forward == {0}


def test_singular_points_backward(no22_rec):
    assert singular_points(no22_rec).backward == {1, 2, 3}
    assert list(singular_points(no22_rec)) == [0, 1, 2, 3]


def test_no22_coefficients_match_oracle(no22_rec):
    for n in range(-3, 12):
        assert tuple(c(Fraction(n)) for c in no22_rec.coeffs) == no22_coefficients(n)


# -- unroll ------------------------------------------------------------------


def test_unroll_examples():
    assert unroll(diff_rec(P("1/N")), {0: 0}, 3)[3] == Fraction(11, 6)
    geo = Recurrence([1, -2])
    assert unroll(geo, {0: 1}, 5)[5] == 32


def test_unroll_needs_enough_values():
    with pytest.raises(InsufficientInitialConditions):
        unroll(Recurrence([1, 0, -1]), {0: 1}, 5)
    with pytest.raises(InsufficientInitialConditions):
        unroll(diff_rec(), {}, 5)


def test_unroll_stops_at_singular_leading_coefficient():
    rec = Recurrence([N - 2, -1])
    with pytest.raises(InsufficientInitialConditions):
        unroll(rec, {0: 1}, 4)
    vals = unroll(rec, {0: 1, 2: 7}, 4)
    assert vals[3] == 7 and vals[4] == Fraction(7, 2)


def test_unroll_no22_matches_closed_form(no22_rec, no22_solution, no22_ics):
    vals = unroll(no22_rec, no22_ics, 60)
    for n in range(4, 61):
        assert vals[n] == no22_solution.eval_exact(n)
        assert vals[n] == as_zeta(NO22(n))


def test_unroll_values_are_exact_zeta_values(no22_rec, no22_ics):
    vals = unroll(no22_rec, no22_ics, 6)
    assert all(isinstance(v, ZetaValue) for v in vals.values())

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture_text
from mellinrec.arith import Poly, RatFunc
from mellinrec.cli import parse_recurrence_file
from mellinrec.harmonic import parse_hexpr
from mellinrec.recurrence import Recurrence, verify_solution
from mellinrec.solver import (
    AnsatzConfig,
    InconsistentConditions,
    NestedSumExpr,
    NoSolution,
    SolutionSet,
    Underdetermined,
    ansatz_general,
    creative_telescope,
    delta_check,
    match_initial_conditions,
    parameterized_telescope,
    solve_ansatz,
    solve_dalembertian,
    solve_hypergeometric,
    solve_rational,
    telescope,
    telescope_config,
)
from mellinrec.solver.hyper import apply_ratio
from mellinrec.solver.rational import forward_operator

k = RatFunc.gen("k")
N = RatFunc.gen("N")


def Pk(text):
    return parse_hexpr(text, var="k")


P = parse_hexpr


def one(var="k"):
    return RatFunc.const(1, var)


def value(e, n) -> Fraction:
    v = e.eval_exact(n)
    assert set(v.terms) <= {()}
    return v.terms.get((), Fraction(0))


def dalembert2():
    return parse_recurrence_file(fixture_text("dalembert2.rec")).recurrence()


# -- telescoping -------------------------------------------------------------


def test_telescope_rational_success():
    g = telescope(1 / (k * (k + 1)))
    assert g == Pk("-1/k")
    assert delta_check(g, Pk("1/(k*(k+1))"), range(1, 31))


def test_telescope_rational_failure_hints_harmonic_sum():
    with pytest.raises(NoSolution) as exc:
        telescope(1 / k)
    assert exc.value.hint == "adjoin S[1]"


def test_telescope_harmonic_examples():
    f = Pk("S[1](k)/(k+1)")
    g = telescope(f, "harmonic")
    assert g == Pk("S[1,1](k) - S[2](k)")
    assert delta_check(g, f, range(1, 21))
    assert telescope(1 / k, "harmonic") == Pk("S[1](k) - 1/k")


@pytest.mark.parametrize("text", [
    "(-1)^k*S[2](k)/(k+1)^2",
    "S[1](k)",
    "k*S[1](k)",
    "z(3)*S[-1](k)/k",
    "1/(k+2)^2",
])
def test_telescope_harmonic_certificates_check(text):
    f = Pk(text)
    g = telescope(f, "harmonic")
    assert delta_check(g, f, range(1, 31))


def test_telescope_config_covers_poles():
    cfg = telescope_config(Pk("S[2](k)/(k+1)^2"))
    assert cfg.max_weight == 4 and cfg.pole_degree == 2
    assert {0, 1, 2}.issubset(cfg.pole_offsets)
    assert not cfg.alt and cfg.zeta == ()


def test_delta_check_rejects_wrong_certificate():
    assert not delta_check(Pk("1/k"), Pk("1/(k*(k+1))"), range(1, 10))


def test_parameterized_telescope_polynomials():
    sols = parameterized_telescope([one(), k])
    spans = [s.constants for s in sols if any(s.constants)]
    assert sympy.Matrix(spans).rank() == 2
    for s in sols:
        g = s.certificate
        assert g.shift(1) - g == s.constants[0] * one() + s.constants[1] * k


def test_parameterized_telescope_rational():
    f1, f2 = 1 / (k * (k + 1)), (2 * k + 1) / (k * k * (k + 1) ** 2)
    sols = [s for s in parameterized_telescope([f1, f2]) if any(s.constants)]
    assert len(sols) == 2
    for s in sols:
        g = s.certificate
        assert g.shift(1) - g == f1 * s.constants[0] + f2 * s.constants[1]
    # Delta(-1/k^2) = f2
    [s2] = [s for s in sols if s.constants == (0, 1)]
    assert (s2.certificate - (-1 / (k * k))).is_constant()


def test_parameterized_telescope_one_dimensional():
    sols = [s for s in parameterized_telescope([1 / k, 1 / (k + 1)]) if any(s.constants)]
    assert len(sols) == 1
    c1, c2 = sols[0].constants
    assert c1 == -c2
    g = sols[0].certificate
    assert g.shift(1) - g == c1 / k + c2 / (k + 1)


def _nk(n_shift: int, extra: int = 0) -> Poly:
    """k + n + n_shift + extra as a polynomial in k over Q(n)."""
    n = RatFunc.gen("n")
    return Poly.gen("k") + Poly((n + n_shift + extra,), "k")


def _bivariate(dens):
    out = RatFunc(Poly((1,), "k"))
    for d in dens:
        out = out / RatFunc(d)
    return out


@pytest.mark.parametrize("m, shifted", [
    (2, lambda i: _bivariate([_nk(i), _nk(i, 1)])),
    (2, lambda i: _bivariate([_nk(i)])),
])
def test_creative_telescope_examples(m, shifted):
    sols = creative_telescope(shifted(0), m)
    assert sols
    for s in sols:
        lhs = sum((shifted(i) * RatFunc.const(c, "k") for i, c in enumerate(s.constants)), RatFunc.const(0, "k"))
        g = s.certificate
        assert g.shift(1) - g == lhs
    # the pair (-1, 1) lies in the span of the returned constants
    vecs = [[sympy.sympify(str(c)) for c in s.constants] for s in sols]
    assert sympy.Matrix(vecs + [[-1, 1]]).rank() == sympy.Matrix(vecs).rank()


def test_creative_telescope_without_parameter():
    [s] = creative_telescope(RatFunc(Poly.gen("k")), 1)
    assert s.constants == (1,)
    assert (s.certificate - k * (k - 1) / 2).is_constant()


# -- rational solutions ------------------------------------------------------


def test_solve_rational_inverse_telescoping():
    rec = Recurrence([1, -1], -1 / ((k - 1) * k), "k")
    sol = solve_rational(rec)
    assert (sol.particular - Pk("1/k")).as_ratfunc().is_constant()
    assert sol.particular.as_ratfunc().den == Poly.gen("k")


def test_solve_rational_polynomial_solution():
    # k g(k+1) - (k+2) g(k) = 0, written backward
    rec = Recurrence([k - 1, -(k + 1)], None, "k")
    sol = solve_rational(rec)
    assert sol.particular is None
    assert sol.homogeneous == [Pk("k^2 + k")]


def test_solve_rational_constant_rhs():
    sol = solve_rational(Recurrence([1, -1], 1, "k"))
    assert (sol.particular - Pk("k")).as_ratfunc().is_constant()
    assert sol.homogeneous == [Pk("1")]


def test_solve_rational_empty_is_normal():
    sol = solve_rational(Recurrence([1, -k], None, "k"))
    assert sol.homogeneous == [] and sol.particular is None


def test_solve_rational_rejects_harmonic_rhs():
    with pytest.raises(ValueError):
        solve_rational(Recurrence([1, -1], Pk("S[1](k)"), "k"))


# -- hypergeometric solutions ------------------------------------------------


def _ratios(rec):
    return [c.ratio for c in solve_hypergeometric(rec)]


def test_hyper_factorial():
    assert _ratios(Recurrence([1, -k], None, "k")) == [k + 1]


def test_hyper_constant_coefficients():
    assert sorted(_ratios(Recurrence([1, -3, 2], None, "k")), key=str) == [one(), 2 * one()]


def test_hyper_dalembert2_only_constant():
    assert _ratios(dalembert2()) == [one()]


@pytest.mark.parametrize("rec", [
    Recurrence([1, -k], None, "k"),
    Recurrence([1, -3, 2], None, "k"),
    Recurrence([k, -(2 * k - 1), k - 1], None, "k"),
    Recurrence([k + 1, -(k * k), 3], None, "k"),
])
def test_hyper_certificates_are_symbolic_identities(rec):
    ops, _ = forward_operator(rec)
    for c in solve_hypergeometric(rec):
        assert not apply_ratio(ops, c.ratio)


# -- d'Alembertian solutions -------------------------------------------------


def _span_values(elems, pts):
    return sympy.Matrix([[value(e, n) for n in pts] for e in elems])


def test_dalembert_dalembert2_basis():
    sol = solve_dalembertian(dalembert2())
    assert sol.homogeneous == [Pk("1"), Pk("S[1](k)")]
    assert sol.notes == []


def test_dalembert_double_root():
    sol = solve_dalembertian(Recurrence([1, -2, 1], None, "k"))
    assert _span_values(sol.homogeneous, range(3, 9)).rank() == 2
    for b in sol.homogeneous:
        assert verify_solution(Recurrence([1, -2, 1], None, "k"), b, rng=range(3, 40)).passed
    raw = solve_dalembertian(Recurrence([1, -2, 1], None, "k"), simplify=False)
    assert raw.homogeneous[1].depth == 1


def test_dalembert_factorial_is_pure_product():
    sol = solve_dalembertian(Recurrence([1, -k], None, "k"))
    [b] = sol.homogeneous
    assert isinstance(b, NestedSumExpr) and b.depth == 0
    assert [b.eval(n) for n in range(0, 7)] == [1, 1, 2, 6, 24, 120, 720]


def test_dalembert_particular_solution():
    rec = Recurrence([1, -1], Pk("1/k"), "k")
    assert solve_dalembertian(rec).particular == Pk("S[1](k)")
    rec2 = dalembert2().with_rhs(Pk("1/k^2"))
    part = solve_dalembertian(rec2).particular
    assert verify_solution(rec2, part, rng=range(3, 50)).passed


def test_dalembert_partial_factorization_is_reported():
    # y(k+2) = k y(k+1) + y(k) has no product solution
    rec = Recurrence([1, -(k - 2), -1], None, "k")
    sol = solve_dalembertian(rec)
    assert sol.homogeneous == []
    assert any("partial" in n for n in sol.notes)


def _forward_to_backward(ops, var="k"):
    m = len(ops) - 1
    return [ops[m - i].shift(-m) for i in range(m + 1)]


RATIOS = [one(), 2 * one(), -one(), k + 1, k + 2, (k + 1) / (k + 3), 1 / (k + 1)]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(RATIOS), st.sampled_from(RATIOS))
def test_dalembert_recovers_manufactured_basis(a, b):
    # L = (E - a)(E - b): y(k+2) - (a + b(k+1)) y(k+1) + a b y(k)
    ops = [a * b, -(a + b.shift(1)), one()]
    rec = Recurrence(_forward_to_backward(ops), None, "k")
    lo = 5

    # construction oracle: y1 = prod b, y2 = y1 * sum prod a / y1(i+1)
    def prod(r, n):
        p = Fraction(1)
        for j in range(lo, n):
            p *= r(Fraction(j))
        return p

    def y2(n):
        return prod(b, n) * sum(prod(a, i) / prod(b, i + 1) for i in range(lo, n))

    pts = range(10, 20)
    oracle = sympy.Matrix([[prod(b, n) for n in pts], [y2(n) for n in pts]])
    sol = solve_dalembertian(rec)
    assert len(sol.homogeneous) == 2
    got = _span_values(sol.homogeneous, pts)
    assert got.rank() == 2
    assert got.col_join(oracle).rank() == 2


# -- initial conditions ------------------------------------------------------


def test_match_geometric_basis():
    general = solve_dalembertian(Recurrence([1, -3, 2], None, "k"))
    pinned = match_initial_conditions(general, {0: 2, 1: 3})
    assert [value(pinned, n) for n in range(6)] == [1 + 2 ** n for n in range(6)]


def test_match_underdetermined():
    general = SolutionSet(None, [P("1"), P("S[1](N)")])
    with pytest.raises(Underdetermined):
        match_initial_conditions(general, {1: 1})


def test_match_two_conditions():
    general = SolutionSet(None, [P("1"), P("S[1](N)")])
    assert match_initial_conditions(general, {1: 2, 2: Fraction(5, 2)}) == P("1 + S[1](N)")


def test_match_inconsistent():
    general = SolutionSet(P("S[1](N)"), [P("1")])
    with pytest.raises(InconsistentConditions):
        match_initial_conditions(general, {1: 0, 2: 0})


def test_match_zeta_valued_conditions():
    general = SolutionSet(None, [P("1"), P("S[1](N)")])
    sol = match_initial_conditions(general, {1: P("z(3)"), 2: P("z(3) + 1/2")})
    assert sol == P("z(3) + S[1](N) - 1")


# -- ansatz ------------------------------------------------------------------

SMALL = AnsatzConfig(max_weight=1, pole_offsets=(0,), pole_degree=1, alt=False, zeta=())
WEIGHT2 = AnsatzConfig(max_weight=2, pole_offsets=(0,), pole_degree=1, alt=False, zeta=())


def test_ansatz_harmonic_number():
    rec = Recurrence([1, -1], P("1/N"))
    assert solve_ansatz(rec, SMALL, {0: 0}) == P("S[1](N)")


def test_ansatz_nested_sum():
    rec = Recurrence([1, -1], P("S[1](N)/N"))
    sol = solve_ansatz(rec, WEIGHT2, {0: 0})
    assert sol == P("S[1,1](N)") == P("(S[1](N)^2 + S[2](N))/2")


def test_ansatz_basis_too_small_names_key():
    rec = Recurrence([1, -1], P("1/N"))
    cfg = AnsatzConfig(max_weight=0, pole_offsets=(0,), pole_degree=1, alt=False, zeta=())
    with pytest.raises(NoSolution) as exc:
        solve_ansatz(rec, cfg, {0: 0})
    assert "S[1]" in str(exc.value)


def test_ansatz_underdetermined_without_conditions():
    rec = Recurrence([1, -1], P("1/N"))
    with pytest.raises(Underdetermined):
        solve_ansatz(rec, SMALL, {})


def test_ansatz_inconsistent_conditions():
    rec = Recurrence([1, -1], P("1/N"))
    with pytest.raises(InconsistentConditions):
        solve_ansatz(rec, SMALL, {0: 0, 1: 5})


def test_ansatz_general_reports_homogeneous_part():
    sol = ansatz_general(Recurrence([N, -(2 * N - 1), N - 1]), WEIGHT2)
    assert sol.particular.is_zero()
    assert sorted(map(str, sol.homogeneous)) == ["1", "S[1](N)"]


def test_ansatz_is_deterministic():
    rec = Recurrence([1, -1], P("S[1](N)/N + (-1)^N/N^2"))
    cfg = AnsatzConfig(max_weight=2, pole_offsets=(0,), pole_degree=2, alt=True, zeta=())
    a = solve_ansatz(rec, cfg, {0: 0})
    b = solve_ansatz(rec, cfg, {0: 0})
    assert a == b and str(a) == str(b)
    assert list(a.items()) == list(b.items())


scale_st = st.sampled_from([N, N + 1, 2 * N - 3, N * N + 1, RatFunc.const(-7, "N")])


@settings(max_examples=10, deadline=None)
@given(scale_st)
def test_ansatz_scaling_invariance(p):
    rec = Recurrence([N, -(N - 1)], P("S[1](N)"))
    base = ansatz_general(rec, WEIGHT2)
    scaled = ansatz_general(rec.scaled(p), WEIGHT2)
    assert base.particular == scaled.particular
    assert base.homogeneous == scaled.homogeneous


@pytest.mark.parametrize("rec, ics", [
    (Recurrence([1, -1], P("1/N")), {0: 0}),
    (Recurrence([1, -1], P("S[1](N)/N")), {0: 0}),
    (Recurrence([N, -(N - 1)], P("S[1](N)")), {1: 1}),
])
def test_ansatz_results_verify(rec, ics):
    sol = solve_ansatz(rec, WEIGHT2, ics)
    assert verify_solution(rec, sol, ics, range(1, 51)).passed

"""Rational solutions of linear difference equations.

Forward operators are lists ``ops`` of polynomials with
``sum_j ops[j](k) * y(k + j)``.  The pipeline is the classical one:

1. a universal denominator from the dispersion of the trailing and shifted
   leading coefficient,
2. a degree bound for the numerator from the indicial polynomial of the
   operator rewritten in powers of Delta,
3. undetermined coefficients for the numerator, highest degree first.

Right-hand sides may carry unknown constants (parameterized version), which
gives telescoping, parameterized telescoping and creative telescoping.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

from ..arith import Poly, RatFunc, dispersion, integer_roots, poly_gcd, poly_lcm
from ..harmonic import HExpr
from .linalg import solve_linear
from .types import NoSolution, ParamSolution, SolutionSet

__all__ = [
    "forward_operator",
    "universal_denominator",
    "degree_bound",
    "polynomial_solutions",
    "rational_solutions",
    "solve_rational",
    "telescope_rational",
    "parameterized_telescope",
    "creative_telescope",
]


def forward_operator(rec):
    """(ops, rhs) with ops[j](k) = a_{m-j}(k+m) and rhs(k+m)."""
    rec = rec.cleared()
    m = rec.order
    ops = [rec.coeffs[m - j].num.shift(m) for j in range(m + 1)]
    return ops, rec.rhs.shift(m)


def universal_denominator(p0: Poly, pm: Poly, m: int) -> Poly:
    """Multiple of the denominator of every rational solution."""
    var = p0.var
    a, b = p0, pm.shift(-m)
    one = Poly((1,), var)
    if a.degree <= 0 or b.degree <= 0:
        return one
    ds = dispersion(a, b)
    if not ds:
        return one
    u = one
    for i in range(max(ds), -1, -1):
        d = poly_gcd(a, b.shift(i))
        if d.degree <= 0:
            continue
        a = a.exquo(d)
        b = b.exquo(d.shift(-i))
        for j in range(i + 1):
            u = u * d.shift(-j)
    return u


def _falling(d: Poly, i: int) -> Poly:
    out = Poly((1,), d.var)
    for j in range(i):
        out = out * (d - j)
    return out


def degree_bound(ops: list[Poly], rhs_degree: int | None) -> int:
    """Largest possible degree of a polynomial solution (-1: none)."""
    var = ops[0].var
    m = len(ops) - 1
    delta = []
    for i in range(m + 1):
        c = Poly((), var)
        for j in range(i, m + 1):
            if ops[j]:
                c = c + ops[j] * comb(j, i)
        delta.append(c)
    b = max(c.degree - i for i, c in enumerate(delta) if c)
    d = Poly.gen("_d")
    ind = Poly((), "_d")
    for i, c in enumerate(delta):
        if c and c.degree - i == b:
            ind = ind + _falling(d, i) * c.lc
    bound = -1
    if rhs_degree is not None and rhs_degree >= 0:
        bound = rhs_degree - b
    roots = [r for r in integer_roots(ind) if r >= 0] if ind.degree > 0 else []
    if roots:
        bound = max(bound, max(roots))
    return bound


def _apply_ops(ops, y: Poly) -> Poly:
    out = Poly((), ops[0].var)
    for j, q in enumerate(ops):
        if q:
            out = out + q * y.shift(j)
    return out


def polynomial_solutions(ops: list[Poly], rhs: list[Poly], max_degree: int | None = None):
    """Basis of (y, c) with sum_j ops[j] y(k+j) = sum_i c_i rhs[i], y polynomial."""
    var = ops[0].var
    nz = [f for f in rhs if f]
    rdeg = max((f.degree for f in nz), default=None)
    bound = degree_bound(ops, rdeg) if max_degree is None else max_degree
    r = len(rhs)
    if bound < 0:
        # only the c-part can be nontrivial, with y = 0
        rows = _coefficient_rows([], rhs, 0)
        sol = solve_linear(rows, [Fraction(0)] * len(rows), r)
        basis = sol[1] if sol else []
        return [(Poly((), var), tuple(v)) for v in basis]
    x = Poly.gen(var)
    images = []
    mono = Poly((1,), var)
    for _ in range(bound + 1):
        images.append(_apply_ops(ops, mono))
        mono = mono * x
    rows = _coefficient_rows(images, rhs, bound + 1)
    ncols = bound + 1 + r
    # the highest degree has the lowest column and is eliminated first
    sol = solve_linear(rows, [Fraction(0)] * len(rows), ncols)
    out = []
    for v in sol[1] if sol else []:
        y = Poly(v[: bound + 1][::-1], var)
        out.append((y, tuple(v[bound + 1:])))
    return out


def _coefficient_rows(images, rhs, nu):
    """Rows of the coefficient comparison; column t is the unknown of degree nu-1-t."""
    top = max([p.degree for p in images + list(rhs) if p] + [0])
    rows = []
    for e in range(top + 1):
        row = {}
        for d, p in enumerate(images):
            c = p.coeff(e)
            if c:
                row[nu - 1 - d] = c
        for i, f in enumerate(rhs):
            c = f.coeff(e)
            if c:
                row[nu + i] = -c
        if row:
            rows.append(row)
    return rows


def rational_solutions(ops: list, rhs: list, max_degree: int | None = None):
    """Basis of (g, c) with g rational and sum_j ops[j] g(k+j) = sum_i c_i rhs[i]."""
    var = ops[0].var
    ops = [o if isinstance(o, Poly) else o.num for o in ops]
    rhs = [f if isinstance(f, RatFunc) else RatFunc(f) if isinstance(f, Poly) else RatFunc.const(f, var) for f in rhs]
    den = Poly((1,), var)
    for f in rhs:
        den = poly_lcm(den, f.den)
    ops = [o * den for o in ops]
    fpolys = [f.num * den.exquo(f.den) for f in rhs]
    m = len(ops) - 1
    u = universal_denominator(ops[0], ops[m], m)
    big = Poly((1,), var)
    for j in range(m + 1):
        big = poly_lcm(big, u.shift(j))
    q = [o * big.exquo(u.shift(j)) for j, o in enumerate(ops)]
    fl = [f * big for f in fpolys]
    g = poly_gcd_all(q + fl)
    if g.degree > 0:
        q = [p.exquo(g) for p in q]
        fl = [p.exquo(g) for p in fl]
    out = []
    for y, c in polynomial_solutions(q, fl, max_degree):
        out.append((RatFunc(y, u), c))
    return out


def poly_gcd_all(polys):
    g = None
    for p in polys:
        if p:
            g = p.monic() if g is None else poly_gcd(g, p)
    return g if g is not None else Poly((1,), polys[0].var)


def solve_rational(rec, max_degree: int | None = None) -> SolutionSet:
    """All rational solutions of a recurrence with rational rhs."""
    if not rec.rhs.is_rational():
        raise ValueError("rational solving needs a rational right-hand side")
    ops, rhs = forward_operator(rec)
    f = rhs.as_ratfunc()
    fs = [f] if f else []
    basis = rational_solutions(ops, fs, max_degree)
    particular = None
    homog = []
    if fs:
        with_c = [(g, c) for g, c in basis if c[0]]
        if with_c:
            g0, c0 = with_c[0]
            particular = g0 / c0[0]
        for g, c in basis:
            if c[0]:
                if (g, c) is with_c[0]:
                    continue
                g = g - particular * c[0]
            if g:
                homog.append(g)
    else:
        homog = [g for g, _ in basis if g]
    var = rec.var
    sol = SolutionSet(
        particular=None if particular is None else HExpr.rational(particular, var),
        homogeneous=[HExpr.rational(_normalize_scale(h), var) for h in homog],
    )
    return sol


def _normalize_scale(g: RatFunc) -> RatFunc:
    lc = g.num.lc
    return g / lc if lc and lc != 1 else g


def parameterized_telescope(fs: list, max_degree: int | None = None) -> list[ParamSolution]:
    """Basis of (c, g) with g(k+1) - g(k) = sum_i c_i f_i(k), g rational."""
    fs = list(fs)
    var = fs[0].var
    ops = [Poly((-1,), var), Poly((1,), var)]
    return [ParamSolution(tuple(c), g) for g, c in rational_solutions(ops, fs, max_degree)]


def telescope_rational(f: RatFunc, max_degree: int | None = None) -> RatFunc:
    """g with g(k+1) - g(k) = f(k); raises NoSolution if g is not rational."""
    for sol in parameterized_telescope([f], max_degree):
        c = sol.constants[0]
        if c:
            return sol.certificate / c
    raise NoSolution(f"{f} has no rational antidifference", hint="adjoin S[1]")


def creative_telescope(f: RatFunc, m: int, param: str = "n", max_degree: int | None = None) -> list[ParamSolution]:
    """Constants c_i(n) and g(n,k) with sum_i c_i f(n+i-1, k) = g(n,k+1) - g(n,k).

    ``f`` is a rational function in k whose coefficients may involve the
    parameter n.  Only solutions with some c_i nonzero are returned.
    """
    fs = []
    for i in range(m):
        fs.append(RatFunc(_shift_param(f.num, param, i), _shift_param(f.den, param, i)))
    sols = parameterized_telescope(fs, max_degree)
    return [s for s in sols if any(s.constants)]


def _shift_param(p: Poly, param: str, j: int) -> Poly:
    def sh(c):
        if isinstance(c, RatFunc) and c.var == param:
            return c.shift(j)
        return c

    return p.map_coeffs(sh)

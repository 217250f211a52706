"""Hypergeometric (product) solutions over Q by Petkovsek's method.

A product solution has ratio r(k) = Z * A(k)/B(k) * C(k+1)/C(k) with A a
monic divisor of the trailing coefficient, B a monic divisor of the shifted
leading coefficient, Z a constant and C a polynomial.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

from ..arith import Poly, RatFunc, rational_roots
from .rational import forward_operator, polynomial_solutions
from .types import HypergeomCertificate

__all__ = ["solve_hypergeometric", "hyper_ratios", "monic_divisors", "apply_ratio"]


def _irreducible_factors(p: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors over Q with multiplicities."""
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(p.coeffs))
    _, facs = sympy.factor_list(expr, x)
    out = []
    for f, m in facs:
        coeffs = sympy.Poly(f, x).all_coeffs()[::-1]
        q = Poly([Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in coeffs], p.var)
        if q.degree > 0:
            out.append((q.monic(), m))
    return out


def monic_divisors(p: Poly) -> list[Poly]:
    if p.degree <= 0:
        return [Poly((1,), p.var)]
    facs = _irreducible_factors(p)
    out = []
    for exps in product(*[range(m + 1) for _, m in facs]):
        d = Poly((1,), p.var)
        for (f, _), e in zip(facs, exps):
            d = d * f ** e
        out.append(d)
    out.sort(key=lambda d: (d.degree, d.coeffs))
    return out


def apply_ratio(ops: list[Poly], r: RatFunc) -> RatFunc:
    """(sum_j ops[j](k) y(k+j)) / y(k) for y with ratio r."""
    var = ops[0].var
    total = RatFunc.const(0, var)
    prod_r = RatFunc.const(1, var)
    for j, q in enumerate(ops):
        if j:
            prod_r = prod_r * r.shift(j - 1)
        if q:
            total = total + prod_r * RatFunc(q)
    return total


def solve_hypergeometric(rec) -> list[HypergeomCertificate]:
    """Ratios of all hypergeometric solutions of the homogeneous recurrence.

    Ratios are returned up to the equivalence of Petkovsek's candidate
    enumeration: one ratio per (A, B, Z, C) combination, duplicates removed.
    """
    ops, _ = forward_operator(rec.homogeneous())
    return [HypergeomCertificate(r) for r in hyper_ratios(ops)]


def hyper_ratios(ops: list[Poly]) -> list[RatFunc]:
    """Ratios of the product solutions of sum_j ops[j](k) y(k+j) = 0."""
    if not all(p.is_rational() for p in ops):
        raise ValueError("hypergeometric solving is implemented over Q only")
    m = len(ops) - 1
    found: list[RatFunc] = []
    for a in monic_divisors(ops[0]):
        for b in monic_divisors(ops[m].shift(-m + 1)):
            polys = []
            for i in range(m + 1):
                p = ops[i]
                for j in range(i):
                    p = p * a.shift(j)
                for j in range(i, m):
                    p = p * b.shift(j)
                polys.append(p)
            top = max(p.degree for p in polys if p)
            zpoly = Poly([p.coeff(top) if p.degree == top else Fraction(0) for p in polys], "_z")
            for z in sorted(rational_roots(zpoly)):
                if z == 0:
                    continue
                scaled = [p * z ** i for i, p in enumerate(polys)]
                for c, _ in polynomial_solutions(scaled, []):
                    if not c:
                        continue
                    r = RatFunc(a, b) * z * RatFunc(c.shift(1), c)
                    if r not in found and not apply_ratio(ops, r):
                        found.append(r)
    found.sort(key=lambda r: (r.num.degree + r.den.degree, str(r)))
    return found

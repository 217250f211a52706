"""Pinning the free constants of a general solution by initial values."""
from __future__ import annotations

from fractions import Fraction

from ..harmonic import HExpr, PoleError, ZetaValue
from ..recurrence import InsufficientInitialConditions, as_zeta_value, unroll
from .linalg import IncrementalRREF, Inconsistent
from .types import InconsistentConditions, SolutionSet, Underdetermined

__all__ = ["match_initial_conditions", "LinearCombination"]


def _value(elem, n) -> ZetaValue:
    if isinstance(elem, HExpr):
        return elem.eval_exact(n)
    v = elem.eval(n)
    return v if isinstance(v, ZetaValue) else ZetaValue.const(v)


class LinearCombination:
    """sum of coef * element for elements that are not all HExpr."""

    def __init__(self, terms):
        self.terms = [(c, e) for c, e in terms if c]

    def eval(self, n) -> ZetaValue:
        out = ZetaValue()
        for c, e in self.terms:
            out = out + _value(e, n) * c
        return out

    def eval_exact(self, n) -> ZetaValue:
        return self.eval(n)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, e in self.terms:
            s = str(e)
            cs = str(c)
            parts.append(s if c == 1 else f"({cs})*({s})")
        return " + ".join(parts)


def match_initial_conditions(general: SolutionSet, ics: dict, rec=None):
    """particular + sum t_b * basis_b matching every initial value.

    The t_b are rational when basis values carry zeta-values themselves (the
    zeta-multiples are then separate basis elements); otherwise each
    zeta-monomial of the initial values gets its own constants.  With a
    recurrence, values unrolled from the initial conditions are used as
    extra conditions when the given points alone leave constants free.
    """
    ics = {int(n): as_zeta_value(v) for n, v in ics.items()}
    part = general.particular
    basis = list(general.homogeneous)
    var = getattr(part, "var", None) or (basis[0].var if basis and isinstance(basis[0], HExpr) else "N")
    if part is None:
        part = HExpr.zero(var)
    if not basis:
        return part
    points = dict(ics)
    sol = _try_match(part, basis, points)
    if isinstance(sol, Underdetermined) and rec is not None and ics:
        try:
            more = unroll(rec, ics, max(ics) + sol.free + 4)
        except (InsufficientInitialConditions, PoleError, ZeroDivisionError):
            more = {}
        for n, v in more.items():
            points.setdefault(n, v)
        sol = _try_match(part, basis, points)
    if isinstance(sol, Exception):
        raise sol
    return sol


def _try_match(part, basis, points):
    rows = []
    for n, target in sorted(points.items()):
        try:
            vals = [_value(b, n) for b in basis]
            pv = _value(part, n)
        except (PoleError, ZeroDivisionError):
            continue
        rows.append((vals, target - pv))
    if not rows:
        return Underdetermined("no usable initial conditions", free=len(basis))
    zeta_in_basis = any(len(set(v.terms) - {()}) for vals, _ in rows for v in vals)
    monos = sorted({z for vals, t in rows for z in list(t.terms) + [m for v in vals for m in v.terms]},
                   key=lambda z: (len(z), z)) or [()]
    sys = IncrementalRREF(pivot_key=lambda c: (-c[0], c[1]) if isinstance(c, tuple) else -c)
    try:
        for vals, t in rows:
            if zeta_in_basis:
                for z in monos:
                    row = {b: v.terms.get(z, 0) for b, v in enumerate(vals)}
                    sys.add({c: x for c, x in row.items() if x}, t.terms.get(z, Fraction(0)))
            else:
                for z in monos:
                    row = {(b, z): v.terms.get((), 0) for b, v in enumerate(vals)}
                    sys.add({c: x for c, x in row.items() if x}, t.terms.get(z, Fraction(0)))
    except Inconsistent:
        return InconsistentConditions("initial conditions are inconsistent with the general solution")
    cols = list(range(len(basis))) if zeta_in_basis else [(b, z) for b in range(len(basis)) for z in monos]
    free = [c for c in cols if not sys.is_pivot(c)]
    if zeta_in_basis:
        if free:
            return Underdetermined(f"{len(free)} free constant(s) remain after the initial conditions", free=len(free))
        coefs = [sys.value(b) for b in range(len(basis))]
    else:
        if free:
            k = len(free) // len(monos)
            return Underdetermined(f"{k} free constant(s) remain after the initial conditions", free=k)
        coefs = [ZetaValue({z: sys.value((b, z)) for z in monos}) for b in range(len(basis))]
    return _combine(part, basis, coefs)


def _combine(part, basis, coefs):
    if isinstance(part, HExpr) and all(isinstance(b, HExpr) for b in basis):
        out = part
        for b, c in zip(basis, coefs):
            if isinstance(c, ZetaValue):
                for z, v in c.terms.items():
                    out = out + b * _zeta_hexpr(z, v, b.var)
            elif c:
                out = out + b.scale(c)
        return out
    terms = [(1, part)] if part else []
    for b, c in zip(basis, coefs):
        if isinstance(c, ZetaValue):
            if set(c.terms) - {()}:
                raise ValueError("zeta-valued constants need HExpr basis elements")
            c = c.terms.get((), 0)
        terms.append((c, b))
    return LinearCombination(terms)


def _zeta_hexpr(z, v, var):
    e = HExpr.const(v, var)
    for k in z:
        e = e * HExpr.zeta(k, var)
    return e

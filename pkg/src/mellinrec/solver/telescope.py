"""Telescoping: g(k+1) - g(k) = f(k) for rational and harmonic-sum summands."""
from __future__ import annotations

from ..arith import RatFunc, linear_factorization
from ..harmonic import HExpr, weight
from ..recurrence import Recurrence
from .ansatz import AnsatzConfig, ansatz_general
from .rational import telescope_rational
from .types import NoSolution

__all__ = ["telescope", "telescope_config", "delta_check"]


def telescope_config(f: HExpr) -> AnsatzConfig:
    """Basis for antidifferences of f.

    Summing c(k) S_m(k) with a pole of order p in c raises the weight by p;
    a polynomial part of degree q needs numerators of degree q + 1.
    """
    offsets = {0, 1}
    degree = 1
    top = 0
    poly = 0
    for (alt, zeta, idx), c in f.items():
        w = weight(idx) + sum(zeta)
        pole = 0
        if c.den.degree > 0:
            _, roots, _ = linear_factorization(c.den)
            for r, mult in roots.items():
                if r.denominator == 1:
                    j = -int(r)
                    offsets |= {j - 1, j, j + 1}
                    degree = max(degree, mult)
                    pole = max(pole, mult)
        top = max(top, w + max(pole, 1))
        poly = max(poly, c.num.degree - c.den.degree + 1)
    zeta = tuple(sorted({key[1] for key in f.keys() if key[1]}))
    return AnsatzConfig(
        max_weight=top,
        pole_offsets=tuple(sorted(offsets)),
        pole_degree=degree,
        alt=f.has_alt(),
        zeta=zeta,
        poly_degree=poly,
    )


def telescope(f, cls: str = "rational", cfg: AnsatzConfig | None = None, max_degree: int | None = None):
    """Certificate g with g(k+1) - g(k) = f(k), or NoSolution.

    ``cls`` is "rational" (complete for rational f) or "harmonic" (search
    inside a harmonic-sum basis).  The harmonic search returns the
    antidifference with zero constant part.
    """
    if isinstance(f, RatFunc):
        f = HExpr.rational(f, f.var)
    var = f.var
    if f.is_rational():
        try:
            return HExpr.rational(telescope_rational(f.as_ratfunc(), max_degree), var)
        except NoSolution:
            if cls != "harmonic":
                raise NoSolution(f"{f} has no rational antidifference", hint="adjoin S[1]") from None
    elif cls != "harmonic":
        raise NoSolution(f"{f} is not rational; use the harmonic class", hint="use --class harmonic")
    cfg = cfg or telescope_config(f)
    # G(N) - G(N-1) = f(N-1)
    rec = Recurrence([1, -1], f.shift(-1), var)
    general = ansatz_general(rec, cfg)
    g = general.particular
    c0 = g.coeff((False, (), ()))
    if c0.is_polynomial() and c0.num.coeff(0):
        g = g - HExpr.const(c0.num.coeff(0), var)
    if not delta_check(g, f, range(1, 31)):
        raise AssertionError("telescoping certificate failed its own check")
    return g


def delta_check(g: HExpr, f: HExpr, ks) -> bool:
    """g(k+1) - g(k) == f(k) exactly for every k in ks (poles fail)."""
    try:
        return all(g.eval_exact(k + 1) - g.eval_exact(k) == f.eval_exact(k) for k in ks)
    except ZeroDivisionError:
        return False

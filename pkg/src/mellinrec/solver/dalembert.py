"""d'Alembertian solutions: products times nested indefinite sums.

If h is a product solution (ratio r) of L y = f, substituting y = h * u and
v(k) = u(k+1) - u(k) gives an operator of one order less for v:

    sum_l d_l(k) v(k+l) = f(k) / h(k),   d_l = sum_{j>l} ops_j(k) prod_{t<j} r(k+t)

Repeating this until the order drops to zero splits off first-order right
factors one at a time; every level contributes one indefinite sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..arith import Poly, RatFunc, integer_roots, poly_lcm
from ..harmonic import HExpr, PoleError, ZetaValue
from ..recurrence import Recurrence
from .hyper import hyper_ratios
from .rational import forward_operator, solve_rational
from .types import NoSolution, SolutionSet

__all__ = ["Layer", "NestedSumExpr", "solve_dalembertian", "to_hexpr"]


@dataclass(frozen=True)
class Layer:
    """factor(k) * prod_{j=lo}^{k-1} ratio(j)."""

    ratio: RatFunc
    factor: HExpr

    def eval(self, k: int, lo: int):
        p = Fraction(1)
        for j in range(lo, k):
            p *= self.ratio(Fraction(j))
        f = self.factor.eval_exact(k)
        if set(f.terms) <= {()}:
            return f.terms.get((), Fraction(0)) * p
        return f * p

    def text(self, var: str, lo: int) -> str:
        parts = []
        if self.factor != 1:
            parts.append(f"({self.factor.with_var(var)})")
        if self.ratio != 1:
            parts.append(f"prod(j={lo}..{var}-1, {self.ratio.with_var('j')})")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class NestedSumExpr:
    """outer(k) * sum_{i1=lo}^{k-1} layers[0](i1) * sum_{i2=lo}^{i1-1} ... layers[-1](is).

    Every layer is a product (fixed to 1 at lo) times a harmonic factor.
    """

    outer: Layer
    layers: tuple
    lo: int
    var: str = "k"

    @property
    def depth(self) -> int:
        return len(self.layers)

    def eval(self, k: int):
        if k < self.lo:
            raise ValueError(f"nested sums are defined for {self.var} >= {self.lo}")
        # inner[i] = value of the sums below the current layer at index i
        inner = [Fraction(1)] * (k + 1)
        for layer in reversed(self.layers):
            acc = Fraction(0)
            nxt = [Fraction(0)] * (k + 1)
            for i in range(self.lo, k + 1):
                nxt[i] = acc
                acc = acc + layer.eval(i, self.lo) * inner[i]
            inner = nxt
        return self.outer.eval(k, self.lo) * inner[k]

    def eval_exact(self, k: int):
        v = self.eval(k)
        return v if isinstance(v, ZetaValue) else ZetaValue.const(v)

    def __str__(self):
        text = ""
        names = [f"i{t + 1}" for t in range(self.depth)]
        uppers = [self.var] + names[:-1]
        for layer, name, up in reversed(list(zip(self.layers, names, uppers))):
            body = layer.text(name, self.lo)
            if text:
                body = f"{body}*{text}" if body != "1" else text
            text = f"sum({name}={self.lo}..{up}-1, {body})"
        outer = self.outer.text(self.var, self.lo)
        if not text:
            return outer
        return text if outer == "1" else f"{outer}*{text}"

    def to_json(self):
        return {
            "var": self.var,
            "lo": self.lo,
            "outer": {"ratio": str(self.outer.ratio), "factor": str(self.outer.factor)},
            "layers": [{"ratio": str(l.ratio), "factor": str(l.factor)} for l in self.layers],
        }


def _reduce(ops: list[RatFunc], r: RatFunc) -> list[RatFunc]:
    m = len(ops) - 1
    var = r.var
    prods = [RatFunc.const(1, var)]
    for j in range(1, m + 1):
        prods.append(prods[-1] * r.shift(j - 1))
    return [sum((ops[j] * prods[j] for j in range(l + 1, m + 1)), RatFunc.const(0, var)) for l in range(m)]


def _polys(ops: list[RatFunc]) -> list[Poly]:
    den = Poly((1,), ops[0].var)
    for o in ops:
        den = poly_lcm(den, o.den)
    return [o.num * den.exquo(o.den) for o in ops]


def _int_roots(p: Poly) -> list[int]:
    return [int(x) for x in integer_roots(p)] if p.degree > 0 else []


def solve_dalembertian(rec: Recurrence, simplify: bool = True) -> SolutionSet:
    """Basis (and particular solution) as products times nested sums.

    The recursion depth is at most the order; when a level has no product
    solution the partial factorization is reported in ``notes`` and only the
    solutions found so far are returned.  With ``simplify`` every element
    that can be written as a harmonic expression is converted.
    """
    ops, rhs = forward_operator(rec)
    var = rec.var
    if not all(p.is_rational() for p in ops):
        raise ValueError("d'Alembertian solving is implemented over Q only")
    level = [RatFunc(p) for p in ops]
    ratios: list[RatFunc] = []
    notes = []
    while len(level) > 1:
        cands = hyper_ratios(_polys(level))
        if not cands:
            notes.append(f"left factor of order {len(level) - 1} has no product solution; factorization is partial")
            break
        r = cands[0]
        ratios.append(r)
        level = _reduce(level, r)
    complete = len(level) == 1
    # lower summation bound past every singular point met on the way
    roots = _int_roots(ops[0]) + _int_roots(ops[-1])
    for r in ratios:
        roots += _int_roots(r.num) + _int_roots(r.den)
    if complete:
        roots += _int_roots(level[0].num) + [int(x) for x in rhs.poles()]
    lo = max([0] + [x + 1 for x in roots])
    one = HExpr.const(1, var)
    layers = [Layer(r, one) for r in ratios]
    basis = [NestedSumExpr(layers[0], tuple(layers[1 : s + 1]), lo, var) for s in range(len(layers))]
    particular = None
    if complete and rhs:
        inv = RatFunc.const(1, var)
        for r in ratios:
            inv = inv / r
        last = Layer(inv, rhs.scale(1 / level[0]))
        if ratios:
            particular = NestedSumExpr(layers[0], tuple(layers[1:]) + (last,), lo, var)
        else:
            particular = NestedSumExpr(last, (), lo, var)
    if simplify:
        basis = [_simplified(b) for b in basis]
        particular = _simplified(particular) if particular is not None else None
    return SolutionSet(particular=particular, homogeneous=basis, notes=notes)


def _simplified(e: NestedSumExpr):
    try:
        return to_hexpr(e)
    except NoSolution:
        return e


def _product_hexpr(r: RatFunc, lo: int, var: str) -> HExpr:
    """prod_{j=lo}^{k-1} r(j) as a harmonic expression, or NoSolution."""
    if r == 1:
        return HExpr.const(1, var)
    for sign in (1, -1):
        rec = Recurrence([RatFunc.const(1, var), -(r * sign).shift(-1)], HExpr.zero(var), var)
        for q in solve_rational(rec).homogeneous:
            q0 = q.eval_exact(lo) if lo not in q.poles() else None
            if q0 and set(q0.terms) == {()}:
                q = q.scale(RatFunc.const(1 / q0.terms[()], var))
                if sign == -1:
                    q = q * HExpr.alternating(var)
                    if lo % 2:
                        q = -q
                return q
    raise NoSolution(f"product of {r} is not a rational function")


def _layer_hexpr(layer: Layer, lo: int, var: str) -> HExpr:
    return layer.factor.with_var(var) * _product_hexpr(layer.ratio.with_var(var), lo, var)


def to_hexpr(e: NestedSumExpr) -> HExpr:
    """Rewrite the nested sums by telescoping; NoSolution when impossible."""
    from .telescope import telescope

    var = e.var
    inner = HExpr.const(1, var)
    for layer in reversed(e.layers):
        f = _layer_hexpr(layer, e.lo, var) * inner
        g = telescope(f, "harmonic")
        try:
            g0 = g.eval_exact(e.lo)
        except PoleError:
            raise NoSolution("antidifference has a pole at the lower bound") from None
        inner = g - _zeta_const(g0, var)
    return _layer_hexpr(e.outer, e.lo, var) * inner


def _zeta_const(v: ZetaValue, var: str) -> HExpr:
    out = HExpr.zero(var)
    for z, c in v.terms.items():
        t = HExpr.const(c, var)
        for k in z:
            t = t * HExpr.zeta(k, var)
        out = out + t
    return out

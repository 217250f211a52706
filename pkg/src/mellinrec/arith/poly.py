"""Dense univariate polynomials over a constant field.

Coefficients are ``Fraction`` for the rationals, or :class:`RatFunc` elements
when the constant field is Q(eps) or Q(n).  Everything is immutable.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

__all__ = [
    "Poly",
    "poly_gcd",
    "poly_lcm",
    "shift_poly",
    "resultant",
    "integer_roots",
    "rational_roots",
    "dispersion",
    "squarefree_decomposition",
    "linear_factorization",
]


def _coerce(c):
    if isinstance(c, int):
        return Fraction(c)
    return c


class Poly:
    __slots__ = ("coeffs", "var", "_hash")

    def __init__(self, coeffs=(), var: str = "N"):
        cs = [_coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c, var: str = "N") -> "Poly":
        return cls((c,), var)

    @classmethod
    def gen(cls, var: str = "N") -> "Poly":
        return cls((0, 1), var)

    @classmethod
    def from_roots(cls, roots, var: str = "N") -> "Poly":
        """Monic polynomial prod (x - r)."""
        p = cls((1,), var)
        for r in roots:
            p = p * cls((-_coerce(r), 1), var)
        return p

    def _new(self, coeffs) -> "Poly":
        return Poly(coeffs, self.var)

    # basic properties
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def tc(self):
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.lc
        if lc == 1:
            return self
        return self._new([c / lc for c in self.coeffs])

    # arithmetic
    def _same(self, other) -> bool:
        return isinstance(other, Poly) and other.var == self.var

    def _lift(self, other) -> "Poly":
        if self._same(other):
            return other
        return Poly((other,), self.var)

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not self._same(other):
            other = _coerce(other)
            if not other:
                return self._new(())
            return self._new([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return self._new(())
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = self._new((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return self._new(()), self
        lc = other.lc
        quot = [Fraction(0)] * (len(rem) - dq)
        oc = other.coeffs
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if not c:
                continue
            c = c / lc
            quot[k - dq] = c
            for i in range(dq + 1):
                rem[k - dq + i] = rem[k - dq + i] - c * oc[i]
        return self._new(quot), self._new(rem[:dq])

    def __divmod__(self, other):
        return self.divmod(self._lift(other))

    def __floordiv__(self, other):
        return self.divmod(self._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(self._lift(other))[1]

    def exquo(self, other) -> "Poly":
        if not self._same(other):
            return self._new([c / other for c in self.coeffs])
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def prem(self, other: "Poly") -> "Poly":
        """Pseudo-remainder lc(other)^(deg self - deg other + 1) * self mod other."""
        d = self.degree - other.degree
        if d < 0:
            return self
        return (self * other.lc ** (d + 1)).divmod(other)[1]

    # equality
    def __eq__(self, other):
        if self._same(other):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return other == 0
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    # evaluation and substitution
    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, Poly) else x._new(())
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, j) -> "Poly":
        """p(x + j) for a constant j (Taylor shift)."""
        j = _coerce(j)
        if not j or len(self.coeffs) <= 1:
            return self
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n - 1):
            for k in range(n - 2, i - 1, -1):
                cs[k] = cs[k] + j * cs[k + 1]
        return self._new(cs)

    def map_coeffs(self, f) -> "Poly":
        return self._new([f(c) for c in self.coeffs])

    def derivative(self) -> "Poly":
        return self._new([c * i for i, c in enumerate(self.coeffs)][1:])

    def with_var(self, var: str) -> "Poly":
        return Poly(self.coeffs, var)

    # integer content over Q
    def integer_primitive(self):
        """(c, P) with P an integer-coefficient primitive polynomial, self = c*P.

        Only meaningful over the rationals; P's leading coefficient is positive.
        """
        if not self.coeffs:
            return Fraction(0), self
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), self._new([Fraction(i // g) for i in ints])

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    # printing
    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    s = str(c)
    return s


def _is_atom(text: str) -> bool:
    return not any(ch in text for ch in " /+") and not text.startswith("-")


def format_poly(p: Poly, var: str | None = None) -> str:
    """Render in the surface grammar, highest degree first."""
    var = var or p.var
    if not p.coeffs:
        return "0"
    parts = []
    for i in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if isinstance(c, Fraction):
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
        else:
            neg = False
            cs = str(c)
            if not _is_atom(cs):
                cs = f"({cs})"
            if mono:
                body = mono if c == 1 else f"{cs}*{mono}"
            else:
                body = cs
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm (zero if both are zero)."""
    a, b = p, q
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic()


def poly_lcm(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return p._new(())
    return (p * q.exquo(poly_gcd(p, q))).monic()


def shift_poly(p: Poly, j) -> Poly:
    """p(x + j).

    ``j`` may be a number, or a :class:`Poly` in a second variable, in which
    case the result is a polynomial in x whose coefficients are polynomials
    in that variable.
    """
    if not isinstance(j, Poly):
        return p.shift(j)
    xj = Poly((j, j._new((1,))), p.var)
    acc = Poly((), p.var)
    for c in reversed(p.coeffs):
        acc = acc * xj + Poly((j._new((c,)),), p.var)
    return acc


def resultant(p: Poly, q: Poly):
    """Resultant via the subresultant PRS.

    Over the rationals the inputs are first scaled to primitive integer
    polynomials so all intermediate divisions are exact integer divisions.
    """
    if not p or not q:
        return Fraction(0)
    scale = Fraction(1)
    if p.is_rational() and q.is_rational():
        cp, p = p.integer_primitive()
        cq, q = q.integer_primitive()
        scale = cp ** q.degree * cq ** p.degree
    a, b = p, q
    s = 1
    if a.degree < b.degree:
        a, b = b, a
        if a.degree % 2 and b.degree % 2:
            s = -1
    g = h = Fraction(1)
    while True:
        if b.degree == 0:
            break
        delta = a.degree - b.degree
        if a.degree % 2 and b.degree % 2:
            s = -s
        r = a.prem(b)
        if not r:
            return Fraction(0)
        a = b
        b = r.exquo(g * h ** delta)
        g = a.lc
        h = g ** delta / h ** (delta - 1) if delta >= 1 else h
    res = b.lc ** a.degree / h ** (a.degree - 1) if a.degree >= 1 else Fraction(1)
    return s * scale * res


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return []
    fac = _factorint(n)
    divs = [1]
    for p, e in fac.items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _factorint(n: int) -> dict[int, int]:
    from sympy import factorint

    return {int(p): e for p, e in factorint(n).items()}


def rational_roots(p: Poly) -> dict[Fraction, int]:
    """Rational roots with multiplicities of a polynomial over Q."""
    if not p:
        raise ValueError("zero polynomial has every root")
    roots: dict[Fraction, int] = {}
    _, q = p.integer_primitive()
    cs = list(q.coeffs)
    zeros = 0
    while cs and cs[0] == 0:
        cs.pop(0)
        zeros += 1
    if zeros:
        roots[Fraction(0)] = zeros
    q = Poly(cs, p.var)
    if q.degree <= 0:
        return roots
    a0, an = int(q.tc), int(q.lc)
    cands = {Fraction(s * a, b) for a in _divisors(a0) for b in _divisors(an) for s in (1, -1)}
    for r in sorted(cands):
        m = 0
        while q.degree >= 1 and not q(r):
            q = q.exquo(Poly((-r, 1), q.var))
            m += 1
        if m:
            roots[r] = m
    return roots


def _slices_over_q(p: Poly) -> list[Poly]:
    """Split a polynomial with RatFunc coefficients into Q-polynomials.

    A constant (numeric) value is a root of p iff it is a root of every
    slice, because the slices are the coefficients of p with respect to the
    constant-field generator after clearing denominators.
    """
    from .ratfunc import RatFunc

    if p.is_rational():
        return [p]
    den = Poly((1,), "_t")
    for c in p.coeffs:
        if isinstance(c, RatFunc):
            den = poly_lcm(den, c.den.with_var("_t"))
    nums = []
    for c in p.coeffs:
        if isinstance(c, RatFunc):
            nums.append(c.num.with_var("_t") * den.exquo(c.den.with_var("_t")))
        else:
            nums.append(den * c)
    top = max(n.degree for n in nums)
    slices = []
    for e in range(top + 1):
        sl = Poly([n.coeff(e) for n in nums], p.var)
        if sl:
            slices.append(sl)
    return slices


def integer_roots(p: Poly) -> set[int]:
    """All integer roots of p (coefficients in Q, Q(eps) or Q(n))."""
    if not p:
        raise ValueError("zero polynomial has every root")
    result = None
    for sl in _slices_over_q(p):
        rs = {int(r) for r in rational_roots(sl) if r.denominator == 1}
        result = rs if result is None else result & rs
    return result or set()


def _interpolate(xs, ys, var):
    """Newton interpolation returning a Poly."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = Poly((coef[-1],), var)
    for i in range(n - 2, -1, -1):
        p = p * Poly((-xs[i], 1), var) + coef[i]
    return p


def dispersion_resultant(p: Poly, q: Poly) -> Poly:
    """Res_x(p(x), q(x + j)) as a polynomial in j.

    Computed by evaluating the resultant at deg(p)*deg(q) + 1 integer shifts
    and interpolating; each evaluation is a subresultant PRS.
    """
    bound = p.degree * q.degree
    xs = [Fraction(j) for j in range(bound + 1)]
    ys = [resultant(p, q.shift(j)) for j in range(bound + 1)]
    return _interpolate(xs, ys, "j")


def dispersion(p: Poly, q: Poly) -> set[int]:
    """All j >= 0 with gcd(p(x), q(x + j)) nonconstant."""
    if not p or not q:
        raise ValueError("dispersion of the zero polynomial")
    if p.degree == 0 or q.degree == 0:
        return set()
    res = dispersion_resultant(p, q)
    if not res:
        # identically zero only if p and q share a factor for every shift,
        # impossible for nonzero polynomials of positive degree
        raise ArithmeticError("degenerate dispersion resultant")
    return {j for j in integer_roots(res) if j >= 0}


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: list of (monic squarefree factor, multiplicity)."""
    out = []
    if p.degree <= 0:
        return out
    f = p.monic()
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exquo(a)
    c = df.exquo(a)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exquo(a)
        c = d.exquo(a)
        d = c - b.derivative()
        i += 1
    return out


def linear_factorization(p: Poly):
    """Split p over Q as lc * prod (x - r)^m * rest.

    Returns (lc, {root: multiplicity}, rest) where ``rest`` is monic without
    rational roots.  ``rest`` is not factored further.
    """
    if not p:
        raise ValueError("cannot factor zero")
    roots = rational_roots(p)
    rest = p.monic()
    for r, m in roots.items():
        rest = rest.exquo(Poly((-r, 1), p.var) ** m)
    return p.lc, roots, rest



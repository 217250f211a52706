"""Rational functions num/den with den monic and gcd(num, den) = 1."""
from __future__ import annotations

from fractions import Fraction

from .poly import Poly, format_poly, linear_factorization, poly_gcd

__all__ = ["RatFunc"]


class RatFunc:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, var: str | None = None, _normalized: bool = False):
        if not isinstance(num, Poly):
            num = Poly((num,), var or (den.var if isinstance(den, Poly) else "N"))
        if den is None:
            den = Poly((1,), num.var)
        elif not isinstance(den, Poly):
            den = Poly((den,), num.var)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            if not num:
                den = Poly((1,), num.var)
            else:
                if den.degree > 0:
                    g = poly_gcd(num, den)
                    if g.degree > 0:
                        num = num.exquo(g)
                        den = den.exquo(g)
                lc = den.lc
                if lc != 1:
                    num = num.exquo(lc)
                    den = den.exquo(lc)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def var(self) -> str:
        return self.num.var

    @classmethod
    def const(cls, c, var: str = "N") -> "RatFunc":
        return cls(Poly((c,), var), Poly((1,), var), _normalized=True)

    @classmethod
    def gen(cls, var: str = "N") -> "RatFunc":
        return cls(Poly.gen(var), Poly((1,), var), _normalized=True)

    def _same(self, other) -> bool:
        return isinstance(other, (RatFunc, Poly)) and other.var == self.var

    def _lift(self, other) -> "RatFunc":
        if isinstance(other, RatFunc) and other.var == self.var:
            return other
        if isinstance(other, Poly) and other.var == self.var:
            return RatFunc(other, Poly((1,), other.var), _normalized=True)
        return RatFunc(Poly((other,), self.var), Poly((1,), self.var), _normalized=True)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self):
        """The value if constant, else raise."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeff(0)

    # arithmetic
    def __add__(self, other):
        other = self._lift(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        if self.den.degree == 0 and other.den.degree == 0:
            return RatFunc(self.num + other.num, self.den, _normalized=True)
        g = poly_gcd(self.den, other.den)
        if g.degree == 0:
            return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)
        a = self.den.exquo(g)
        b = other.den.exquo(g)
        return RatFunc(self.num * b + other.num * a, a * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not self._same(other):
            if not other:
                return RatFunc(Poly((), self.var), _normalized=False)
            return RatFunc(self.num * other, self.den, _normalized=True)
        other = self._lift(other)
        if not self.num or not other.num:
            return RatFunc(Poly((), self.var))
        # cross-cancel before multiplying
        g1 = poly_gcd(self.num, other.den) if other.den.degree > 0 else None
        g2 = poly_gcd(other.num, self.den) if self.den.degree > 0 else None
        n1, d2 = self.num, other.den
        if g1 is not None and g1.degree > 0:
            n1, d2 = n1.exquo(g1), d2.exquo(g1)
        n2, d1 = other.num, self.den
        if g2 is not None and g2.degree > 0:
            n2, d1 = n2.exquo(g2), d1.exquo(g2)
        num = n1 * n2
        den = d1 * d2
        lc = den.lc
        if lc != 1:
            num, den = num.exquo(lc), den.exquo(lc)
        return RatFunc(num, den, _normalized=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        if not self._same(other):
            if not other:
                raise ZeroDivisionError("division by zero")
            return RatFunc(self.num * (Fraction(1) / other), self.den, _normalized=True)
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e, _normalized=True)

    def __eq__(self, other):
        if isinstance(other, RatFunc) and other.var == self.var:
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly) and other.var == self.var:
            return self.den.degree == 0 and self.num == other
        return self.den.degree == 0 and self.num == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # evaluation / substitution
    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDivisionError(f"pole of {self} at {self.var}={x}")
        return self.num(x) / d

    def shift(self, j) -> "RatFunc":
        return RatFunc(self.num.shift(j), self.den.shift(j), _normalized=True)

    def map_coeffs(self, f) -> "RatFunc":
        return RatFunc(self.num.map_coeffs(f), self.den.map_coeffs(f))

    def poles(self) -> set[int]:
        from .poly import integer_roots

        if self.den.degree <= 0:
            return set()
        return integer_roots(self.den)

    def with_var(self, var: str) -> "RatFunc":
        return RatFunc(self.num.with_var(var), self.den.with_var(var), _normalized=True)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        return format_ratfunc(self)


def format_factored_den(den: Poly) -> str:
    """Denominator text, factored into linear pieces when possible."""
    var = den.var
    if not den.is_rational():
        return format_poly(den)
    lc, roots, rest = linear_factorization(den)
    pieces = []
    for r in sorted(roots, key=lambda r: (-r if r <= 0 else r, r)):
        m = roots[r]
        if r == 0:
            base = var
        else:
            base = f"({format_poly(Poly((-r, 1), var))})"
        pieces.append(base if m == 1 else f"{base}^{m}")
    if rest.degree > 0:
        pieces.append(f"({format_poly(rest)})")
    if lc != 1:
        pieces.insert(0, str(lc))
    if not pieces:
        return "1"
    return "*".join(pieces)


def format_ratfunc(f: RatFunc) -> str:
    num = format_poly(f.num)
    if f.den.degree == 0:
        return num
    if len([c for c in f.num.coeffs if c]) > 1:
        num = f"({num})"
    den = wrap_compound(format_factored_den(f.den))
    return f"{num}/{den}"


def wrap_compound(text: str) -> str:
    """Parenthesize text unless it is a single factor at top level."""
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in " */":
            return f"({text})"
    return text

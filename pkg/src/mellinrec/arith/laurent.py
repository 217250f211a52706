"""Truncated Laurent series in eps.

A series stores its leading exponent, the coefficients from there on, and
``order``: the last exponent that is known.  Terms beyond ``order`` are
unknown, never silently zero.  Coefficients may be anything supporting ring
operations (Fraction, RatFunc, HExpr); division needs an invertible leading
coefficient.
"""
from __future__ import annotations

from fractions import Fraction

__all__ = ["LaurentSeries"]


def _is_zero(c) -> bool:
    return not c


class LaurentSeries:
    __slots__ = ("lead", "coeffs", "order")

    def __init__(self, lead: int, coeffs, order: int, zero=Fraction(0)):
        coeffs = list(coeffs)[: max(0, order - lead + 1)]
        # drop leading zeros so coeffs[0] is the genuine leading term
        while coeffs and _is_zero(coeffs[0]):
            coeffs.pop(0)
            lead += 1
        while coeffs and _is_zero(coeffs[-1]):
            coeffs.pop()
        if not coeffs:
            lead = order + 1
        self.lead = lead
        self.coeffs = tuple(coeffs)
        self.order = order
        self._check()

    def _check(self):
        if self.coeffs and self.order < self.lead:
            raise ValueError("truncation order below leading exponent")

    @classmethod
    def from_dict(cls, terms: dict[int, object], order: int) -> "LaurentSeries":
        terms = {e: c for e, c in terms.items() if e <= order and not _is_zero(c)}
        if not terms:
            return cls(order + 1, (), order)
        lo = min(terms)
        zero = _zero_like(next(iter(terms.values())))
        return cls(lo, [terms.get(e, zero) for e in range(lo, order + 1)], order)

    @classmethod
    def monomial(cls, coeff, exponent: int, order: int) -> "LaurentSeries":
        return cls.from_dict({exponent: coeff}, order)

    @classmethod
    def zero(cls, order: int) -> "LaurentSeries":
        return cls(order + 1, (), order)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, e: int):
        if e > self.order:
            raise IndexError(f"coefficient of eps^{e} is beyond the truncation order {self.order}")
        i = e - self.lead
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def terms(self):
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                yield self.lead + i, c

    def truncate(self, order: int) -> "LaurentSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return LaurentSeries.from_dict(dict(self.terms()), order)

    def _other(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        # exact constant: known to any order
        if _is_zero(other):
            return LaurentSeries.zero(10 ** 9)
        return LaurentSeries(0, [other], 10 ** 9)

    def __add__(self, other):
        other = self._other(other)
        order = min(self.order, other.order)
        acc: dict[int, object] = {}
        for e, c in self.terms():
            if e <= order:
                acc[e] = c
        for e, c in other.terms():
            if e <= order:
                acc[e] = acc[e] + c if e in acc else c
        return LaurentSeries.from_dict(acc, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.lead, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            # scalar: precision unchanged
            return LaurentSeries.from_dict({e: c * other for e, c in self.terms()}, self.order)
        if self.is_zero() or other.is_zero():
            order = min(self.lead + other.order, other.lead + self.order)
            return LaurentSeries.zero(order)
        order = min(self.lead + other.order, other.lead + self.order)
        acc: dict[int, object] = {}
        for e1, c1 in self.terms():
            for e2, c2 in other.terms():
                e = e1 + e2
                if e > order:
                    continue
                p = c1 * c2
                acc[e] = acc[e] + p if e in acc else p
        return LaurentSeries.from_dict(acc, order)

    def __rmul__(self, other):
        return LaurentSeries.from_dict({e: other * c for e, c in self.terms()}, self.order)

    def inverse(self) -> "LaurentSeries":
        if self.is_zero():
            raise ZeroDivisionError("division by a truncated-zero series")
        rel = self.order - self.lead
        a0 = self.coeffs[0]
        inv0 = 1 / a0 if not isinstance(a0, Fraction) else Fraction(1) / a0
        out = [inv0]
        for n in range(1, rel + 1):
            s = None
            for k in range(1, n + 1):
                if k < len(self.coeffs) and not _is_zero(self.coeffs[k]):
                    t = self.coeffs[k] * out[n - k]
                    s = t if s is None else s + t
            out.append(Fraction(0) if s is None else -s * inv0)
        return LaurentSeries(-self.lead, out, -self.lead + rel)

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            if _is_zero(other):
                raise ZeroDivisionError("division by zero")
            return LaurentSeries.from_dict({e: c / other for e, c in self.terms()}, self.order)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.order == other.order and dict(self.terms()) == dict(other.terms())

    def __hash__(self):
        return hash((self.order, tuple(self.terms())))

    def map(self, f) -> "LaurentSeries":
        return LaurentSeries.from_dict({e: f(c) for e, c in self.terms()}, self.order)

    def __repr__(self):
        return f"LaurentSeries({self})"

    def __str__(self):
        parts = []
        for e, c in self.terms():
            mono = "" if e == 0 else ("eps" if e == 1 else f"eps^{e}")
            cs = str(c)
            if mono:
                parts.append(f"({cs})*{mono}" if cs != "1" else mono)
            else:
                parts.append(f"({cs})")
        parts.append(f"O(eps^{self.order + 1})")
        return " + ".join(parts)


def _zero_like(c):
    try:
        return c * 0
    except TypeError:
        return Fraction(0)

"""Canonical harmonic-sum expressions.

An :class:`HExpr` is a finite sum of terms

    c(N) * (-1)^(alt*N) * zeta-monomial * S_m(N)

keyed by ``(alt, zeta, index)``; the empty index stands for a pure
rational term.  Products of sums never survive: multiplication goes through
the quasi-shuffle product, and every sum is synchronized to argument N.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..arith import Poly, RatFunc

__all__ = [
    "HExpr",
    "HTerm",
    "ZetaValue",
    "PoleError",
    "stuffle",
    "weight",
    "harmonic_value",
    "term_sort_key",
    "basis_enumerate",
    "signed_compositions",
]

Key = tuple  # (alt: bool, zeta: tuple[int, ...], index: tuple[int, ...])


class PoleError(ZeroDivisionError):
    """Raised when an expression is evaluated at a pole of a coefficient."""

    def __init__(self, coeff, at):
        super().__init__(f"coefficient {coeff} has a pole at {coeff.var}={at}")
        self.coeff = coeff
        self.at = at


def weight(index) -> int:
    return sum(abs(m) for m in index)


def zeta_weight(zeta) -> int:
    return sum(zeta)


def term_sort_key(key: Key):
    alt, zeta, index = key
    return (alt, zeta, not index, index)


def _merge(a: int, b: int) -> int:
    s = (1 if a > 0 else -1) * (1 if b > 0 else -1)
    return s * (abs(a) + abs(b))


@lru_cache(maxsize=None)
def stuffle_indices(a: tuple, b: tuple) -> tuple:
    """Quasi-shuffle of two indices as ((index, int coefficient), ...)."""
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    acc: dict[tuple, int] = {}
    for idx, c in stuffle_indices(a[1:], b):
        k = (a[0],) + idx
        acc[k] = acc.get(k, 0) + c
    for idx, c in stuffle_indices(a, b[1:]):
        k = (b[0],) + idx
        acc[k] = acc.get(k, 0) + c
    for idx, c in stuffle_indices(a[1:], b[1:]):
        k = (_merge(a[0], b[0]),) + idx
        acc[k] = acc.get(k, 0) - c
    return tuple(sorted((k, c) for k, c in acc.items() if c))


def stuffle(a, b, var: str = "N") -> "HExpr":
    """S_a(N) * S_b(N) rewritten as a linear combination of single sums."""
    a, b = tuple(a), tuple(b)
    terms = {}
    for idx, c in stuffle_indices(a, b):
        terms[(False, (), idx)] = RatFunc.const(Fraction(c), var)
    return HExpr._make(terms, var)


# -- exact evaluation of harmonic sums -------------------------------------

_TABLES: dict[tuple, list] = {}


def harmonic_value(index: tuple, n: int) -> Fraction:
    """S_index(n) exactly; S of the empty index is 1 and S_m(n) = 0 for n <= 0."""
    if not index:
        return Fraction(1)
    if n <= 0:
        return Fraction(0)
    table = _TABLES.get(index)
    if table is None:
        table = _TABLES[index] = [Fraction(0)]
    if len(table) <= n:
        m, rest = index[0], index[1:]
        a = abs(m)
        neg = m < 0
        for i in range(len(table), n + 1):
            t = Fraction(1, i ** a)
            if neg and i % 2:
                t = -t
            if rest:
                t *= harmonic_value(rest, i)
            table.append(table[-1] + t)
    return table[n]


# -- zeta values --------------------------------------------------------------


class ZetaValue:
    """Element of Q[zeta_2, zeta_3, ...]; zeta-symbols stay symbolic."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c) -> "ZetaValue":
        return cls({(): Fraction(c) if isinstance(c, int) else c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, ZetaValue):
            other = ZetaValue.const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return ZetaValue(out)

    __radd__ = __add__

    def __neg__(self):
        return ZetaValue({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ZetaValue):
            other = ZetaValue.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return ZetaValue.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, ZetaValue):
            if not other:
                return ZetaValue()
            return ZetaValue({k: v * other for k, v in self.terms.items()})
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                out[k] = out.get(k, 0) + v1 * v2
        return ZetaValue(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ZetaValue):
            if set(other.terms) != {()}:
                raise ZeroDivisionError("division by a transcendental zeta-value")
            other = other.terms[()]
        return ZetaValue({k: v / other for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, ZetaValue):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == ZetaValue.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"ZetaValue({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda z: (len(z), z)):
            v = self.terms[k]
            mono = "*".join(_zeta_factor_strings(k))
            if isinstance(v, Fraction):
                neg = v < 0
                mag = -v if neg else v
                if mono:
                    body = mono if mag == 1 else f"{mag}*{mono}"
                else:
                    body = str(mag)
            else:
                neg = False
                body = f"({v})*{mono}" if mono else f"({v})"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def to_json(self):
        return {"+".join(f"z{z}" for z in k) or "1": str(v) for k, v in sorted(self.terms.items())}


def _zeta_factor_strings(zeta) -> list[str]:
    out = []
    for z in sorted(set(zeta)):
        e = zeta.count(z)
        out.append(f"z({z})" if e == 1 else f"z({z})^{e}")
    return out


# -- shifting of single sums -----------------------------------------------


@lru_cache(maxsize=None)
def _shift_sum_terms(index: tuple, j: int, var: str) -> tuple:
    """S_index(N + j) as ((alt, sub-index, RatFunc), ...), all sums at argument N."""
    if not index or j == 0:
        return ((False, index, RatFunc.const(1, var)),)
    m, rest = index[0], index[1:]
    a = abs(m)
    neg = m < 0
    acc: dict[tuple, RatFunc] = {(False, index): RatFunc.const(1, var)}
    x = Poly.gen(var)
    if j > 0:
        # S(N+j) = S(N) + sum_{l=1..j} sign^(N+l)/(N+l)^a * S_rest(N+l)
        ls = [(l, 1) for l in range(1, j + 1)]
    else:
        # S(N+j) = S(N) - sum_{l=0..|j|-1} sign^(N-l)/(N-l)^a * S_rest(N-l)
        ls = [(-l, -1) for l in range(0, -j)]
    for l, sgn in ls:
        c = RatFunc(Poly((sgn,), var), (x + l) ** a)
        if neg and l % 2:
            c = -c
        for alt2, idx2, c2 in _shift_sum_terms(rest, l, var):
            k = (neg ^ alt2, idx2)
            v = c * c2
            acc[k] = acc[k] + v if k in acc else v
    return tuple((alt, idx, c) for (alt, idx), c in sorted(acc.items()) if c)


# -- the expression type -----------------------------------------------------


@dataclass(frozen=True)
class HTerm:
    coeff: RatFunc
    alt: bool
    zeta: tuple
    index: tuple

    @property
    def key(self) -> Key:
        return (self.alt, self.zeta, self.index)


class HExpr:
    """Canonical linear combination of harmonic-sum terms (immutable)."""

    __slots__ = ("_terms", "var", "_hash")

    def __init__(self, terms=None, var: str = "N"):
        self.var = var
        clean = {}
        for k, c in (terms or {}).items():
            c = _as_ratfunc(c, var)
            if c:
                clean[k] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _make(cls, terms: dict, var: str) -> "HExpr":
        obj = cls.__new__(cls)
        obj.var = var
        obj._terms = {k: c for k, c in terms.items() if c}
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, var: str = "N") -> "HExpr":
        return cls._make({}, var)

    @classmethod
    def const(cls, c, var: str = "N") -> "HExpr":
        return cls({(False, (), ()): c}, var)

    @classmethod
    def rational(cls, f, var: str = "N") -> "HExpr":
        return cls({(False, (), ()): f}, var)

    @classmethod
    def S(cls, index, var: str = "N") -> "HExpr":
        index = tuple(index)
        if any(m == 0 for m in index):
            raise ValueError("harmonic sum indices must be nonzero")
        return cls._make({(False, (), index): RatFunc.const(1, var)}, var)

    @classmethod
    def zeta(cls, k: int, var: str = "N") -> "HExpr":
        if k < 2:
            raise ValueError("zeta(k) needs k >= 2")
        return cls._make({(False, (k,), ()): RatFunc.const(1, var)}, var)

    @classmethod
    def alternating(cls, var: str = "N") -> "HExpr":
        return cls._make({(True, (), ()): RatFunc.const(1, var)}, var)

    @classmethod
    def from_terms(cls, terms, var: str = "N") -> "HExpr":
        acc: dict = {}
        for t in terms:
            acc[t.key] = acc[t.key] + t.coeff if t.key in acc else t.coeff
        return cls._make(acc, var)

    # views
    def terms(self):
        for k in sorted(self._terms, key=term_sort_key):
            alt, zeta, index = k
            yield HTerm(self._terms[k], alt, zeta, index)

    def items(self):
        for k in sorted(self._terms, key=term_sort_key):
            yield k, self._terms[k]

    def keys(self):
        return sorted(self._terms, key=term_sort_key)

    def coeff(self, key: Key) -> RatFunc:
        return self._terms.get(key) or RatFunc.const(0, self.var)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_rational(self) -> bool:
        """True when the only key is the plain rational one."""
        return all(k == (False, (), ()) for k in self._terms)

    def as_ratfunc(self) -> RatFunc:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational function")
        return self.coeff((False, (), ()))

    def max_weight(self) -> int:
        if not self._terms:
            return 0
        return max(weight(k[2]) + zeta_weight(k[1]) for k in self._terms)

    def zeta_monomials(self) -> set:
        return {k[1] for k in self._terms}

    def has_alt(self) -> bool:
        return any(k[0] for k in self._terms)

    # arithmetic
    def _check(self, other: "HExpr"):
        if other.var != self.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def _coerce(self, other) -> "HExpr":
        if isinstance(other, HExpr):
            self._check(other)
            return other
        return HExpr.rational(other, self.var)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return HExpr._make(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return HExpr._make({k: -c for k, c in self._terms.items()}, self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, f) -> "HExpr":
        """Multiply every coefficient by a rational function or constant."""
        f = _as_ratfunc(f, self.var)
        if not f:
            return HExpr.zero(self.var)
        return HExpr._make({k: c * f for k, c in self._terms.items()}, self.var)

    def __mul__(self, other):
        if not isinstance(other, HExpr):
            return self.scale(other)
        self._check(other)
        if other.is_rational():
            return self.scale(other.as_ratfunc()) if other else HExpr.zero(self.var)
        if self.is_rational():
            return other.scale(self.as_ratfunc()) if self else HExpr.zero(self.var)
        out: dict = {}
        for (a1, z1, i1), c1 in self._terms.items():
            for (a2, z2, i2), c2 in other._terms.items():
                c = c1 * c2
                alt = a1 ^ a2
                z = tuple(sorted(z1 + z2))
                for idx, n in stuffle_indices(i1, i2):
                    k = (alt, z, idx)
                    v = c * n
                    out[k] = out[k] + v if k in out else v
        return HExpr._make(out, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, HExpr):
            if not other.is_rational() or not other:
                raise ZeroDivisionError(f"cannot divide by {other}: not an invertible rational function")
            other = other.as_ratfunc()
        f = _as_ratfunc(other, self.var)
        if not f:
            raise ZeroDivisionError("division by zero")
        return self.scale(f.inverse())

    def __pow__(self, e: int):
        if e < 0:
            if not self.is_rational():
                raise ValueError("negative power of a non-rational expression")
            return HExpr.rational(self.as_ratfunc() ** e, self.var)
        out = HExpr.const(1, self.var)
        for _ in range(e):
            out = out * self
        return out

    # shifting
    def shift(self, j: int) -> "HExpr":
        """Expression whose value at N equals the value of self at N + j."""
        if j == 0:
            return self
        out: dict = {}
        for (alt, zeta, index), c in self._terms.items():
            cs = c.shift(j)
            if alt and j % 2:
                cs = -cs
            for alt2, idx2, c2 in _shift_sum_terms(index, j, self.var):
                k = (alt ^ alt2, zeta, idx2)
                v = cs * c2
                out[k] = out[k] + v if k in out else v
        return HExpr._make(out, self.var)

    # evaluation
    def eval_exact(self, n: int) -> ZetaValue:
        if n < 0:
            raise ValueError("harmonic expressions are evaluated at N >= 0")
        acc: dict = {}
        for (alt, zeta, index), c in self._terms.items():
            try:
                v = c(Fraction(n))
            except ZeroDivisionError:
                raise PoleError(c, n) from None
            if not v:
                continue
            if index:
                s = harmonic_value(index, n)
                if not s:
                    continue
                v = v * s
            if alt and n % 2:
                v = -v
            acc[zeta] = acc[zeta] + v if zeta in acc else v
        return ZetaValue(acc)

    def poles(self) -> set[int]:
        out = set()
        for c in self._terms.values():
            out |= c.poles()
        return out

    def numerically_equal(self, other: "HExpr", start: int = 1, stop: int = 40) -> bool:
        """Cross-check by exact evaluation at N = start..stop, skipping poles."""
        bad = self.poles() | other.poles()
        return all(self.eval_exact(n) == other.eval_exact(n) for n in range(start, stop + 1) if n not in bad)

    def map_coeffs(self, f) -> "HExpr":
        return HExpr({k: f(c) for k, c in self._terms.items()}, self.var)

    def with_var(self, var: str) -> "HExpr":
        return HExpr._make({k: c.with_var(var) for k, c in self._terms.items()}, var)

    # equality / hashing
    def __eq__(self, other):
        if isinstance(other, HExpr):
            return self.var == other.var and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == HExpr.const(other, self.var)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.var, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"HExpr({self})"

    def __str__(self):
        from .printer import format_hexpr

        return format_hexpr(self)


def _as_ratfunc(c, var: str) -> RatFunc:
    if isinstance(c, RatFunc):
        if c.var != var:
            return RatFunc.const(c, var)
        return c
    if isinstance(c, Poly):
        if c.var != var:
            return RatFunc.const(c, var)
        return RatFunc(c)
    return RatFunc.const(c, var)


# -- ansatz basis -------------------------------------------------------------


@lru_cache(maxsize=None)
def signed_compositions(w: int) -> tuple:
    """All indices (tuples of nonzero ints) of weight exactly w."""
    if w == 0:
        return ((),)
    out = []
    for first in range(1, w + 1):
        for rest in signed_compositions(w - first):
            out.append((first,) + rest)
            out.append((-first,) + rest)
    return tuple(sorted(out))


def basis_enumerate(
    max_weight: int,
    pole_offsets,
    pole_degree: int,
    alt: bool,
    zeta_set=(),
    *,
    pole_weight: bool = True,
    poly_degree: int = 0,
    var: str = "N",
) -> list[HTerm]:
    """Ansatz skeletons c * (-1)^(N*delta) * zeta * S_m(N).

    Coefficient skeletons are 1 and 1/(N+j)^p for j in ``pole_offsets`` and
    1 <= p <= ``pole_degree`` (plus N^q up to ``poly_degree``).  With
    ``pole_weight`` the pole order counts toward the weight budget, so the
    total of sum weight, zeta weight and pole order stays within
    ``max_weight``; otherwise only sum and zeta weight are bounded and every
    key gets the full set of skeletons.
    """
    x = Poly.gen(var)
    skeletons = [(0, RatFunc.const(1, var))]
    for j in sorted(pole_offsets):
        for p in range(1, pole_degree + 1):
            skeletons.append((p, RatFunc(Poly((1,), var), (x + j) ** p)))
    for q in range(1, poly_degree + 1):
        skeletons.append((0, RatFunc(x ** q)))
    zetas = [()] + sorted({tuple(sorted(z)) for z in zeta_set if z})
    alts = (False, True) if alt else (False,)
    out = []
    for a in alts:
        for z in zetas:
            zw = zeta_weight(z)
            if zw > max_weight:
                continue
            for w in range(0, max_weight - zw + 1):
                for idx in signed_compositions(w):
                    for pw, sk in skeletons:
                        if pole_weight and zw + w + pw > max_weight:
                            continue
                        out.append(HTerm(sk, a, z, idx))
    out.sort(key=lambda t: term_sort_key(t.key))
    return out


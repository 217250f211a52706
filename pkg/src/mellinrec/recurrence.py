"""Linear difference equations  sum_i a_i(N) I(N - i) = rhs(N)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import Poly, RatFunc, field_of, integer_roots, poly_lcm
from .harmonic import HExpr, PoleError, ZetaValue

__all__ = [
    "Recurrence",
    "InitialConditions",
    "ResidualReport",
    "SingularPoints",
    "InsufficientInitialConditions",
    "apply",
    "verify_solution",
    "singular_points",
    "unroll",
    "as_zeta_value",
]


class InsufficientInitialConditions(ValueError):
    pass


def as_zeta_value(v) -> ZetaValue:
    """Coerce a number, ZetaValue or N-free HExpr to a ZetaValue."""
    if isinstance(v, ZetaValue):
        return v
    if isinstance(v, HExpr):
        if any(idx or alt or not c.is_constant() for (alt, _, idx), c in v.items()):
            raise ValueError(f"initial value {v} depends on {v.var}")
        return ZetaValue({z: c.constant_value() for (_, z, _), c in v.items()})
    if isinstance(v, int):
        v = Fraction(v)
    return ZetaValue.const(v)


class InitialConditions(dict):
    """Map from integer points to exact values in Q[zeta]."""

    def __init__(self, values=None):
        super().__init__()
        for n, v in (values or {}).items():
            self[int(n)] = as_zeta_value(v)


@dataclass
class Recurrence:
    """sum_{i=0..k} coeffs[i](var) * I(var - i) = rhs."""

    coeffs: list
    rhs: HExpr = None
    var: str = "N"

    def __post_init__(self):
        self.coeffs = [_rf(c, self.var) for c in self.coeffs]
        if len(self.coeffs) < 2:
            raise ValueError("a recurrence needs order at least 1")
        if not self.coeffs[0] or not self.coeffs[-1]:
            raise ValueError("leading and trailing coefficients must be nonzero")
        if self.rhs is None:
            self.rhs = HExpr.zero(self.var)
        elif not isinstance(self.rhs, HExpr):
            self.rhs = HExpr.rational(_rf(self.rhs, self.var), self.var)
        if self.rhs.var != self.var:
            raise ValueError("rhs variable differs from the recurrence variable")
        self.field = field_of(*[c for f in self.coeffs for c in f.num.coeffs + f.den.coeffs])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_homogeneous(self) -> bool:
        return self.rhs.is_zero()

    def homogeneous(self) -> "Recurrence":
        return Recurrence(self.coeffs, None, self.var)

    def cleared(self) -> "Recurrence":
        """Same equation with polynomial coefficients (denominators cleared)."""
        d = Poly((1,), self.var)
        for c in self.coeffs:
            d = poly_lcm(d, c.den)
        if d.degree == 0:
            return self
        df = RatFunc(d)
        return Recurrence([c * df for c in self.coeffs], self.rhs.scale(df), self.var)

    def poly_coeffs(self) -> list[Poly]:
        rec = self.cleared()
        return [c.num for c in rec.coeffs]

    def scaled(self, f) -> "Recurrence":
        f = _rf(f, self.var)
        return Recurrence([c * f for c in self.coeffs], self.rhs.scale(f), self.var)

    def with_rhs(self, rhs) -> "Recurrence":
        return Recurrence(self.coeffs, rhs, self.var)

    def __eq__(self, other):
        if not isinstance(other, Recurrence):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs and self.rhs == other.rhs


def _rf(c, var: str) -> RatFunc:
    if isinstance(c, RatFunc) and c.var == var:
        return c
    if isinstance(c, Poly) and c.var == var:
        return RatFunc(c)
    if isinstance(c, HExpr):
        return c.as_ratfunc()
    return RatFunc.const(c, var)


def apply(rec: Recurrence, candidate: HExpr) -> HExpr:
    """sum_i a_i(N) * candidate(N - i), in canonical form."""
    if candidate.var != rec.var:
        raise ValueError(f"candidate is in {candidate.var}, recurrence in {rec.var}")
    out = HExpr.zero(rec.var)
    for i, a in enumerate(rec.coeffs):
        if a:
            out = out + candidate.shift(-i).scale(a)
    return out


@dataclass
class ResidualReport:
    residuals: dict = field(default_factory=dict)  # N -> ZetaValue
    failures: dict = field(default_factory=dict)  # N -> reason text
    ic_failures: dict = field(default_factory=dict)  # N -> (expected, got)
    symbolic: HExpr | None = None
    checked: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.failures and not self.ic_failures

    @property
    def first_failure(self) -> int | None:
        bad = list(self.failures) + list(self.ic_failures)
        return min(bad) if bad else None

    def summary(self) -> str:
        if self.passed:
            lo, hi = (self.checked[0], self.checked[-1]) if self.checked else (None, None)
            return f"all residuals zero for {self.var_name}={lo}..{hi} ({len(self.checked)} points)"
        n = self.first_failure
        reason = self.failures.get(n) or "initial condition mismatch: expected {}, got {}".format(*self.ic_failures[n])
        return f"fails at {self.var_name}={n}: {reason}"

    var_name: str = "N"


def verify_solution(rec: Recurrence, candidate: HExpr, ics=None, rng=range(1, 51), symbolic: bool = False) -> ResidualReport:
    """Exact residual sum_i a_i(N) cand(N-i) - rhs(N) at every N in rng.

    A pole of a coefficient or of the candidate at some N counts as a failure
    at that N.  Initial conditions are compared against the candidate.
    """
    report = ResidualReport(var_name=rec.var)
    cache: dict[int, ZetaValue] = {}

    def value(n):
        if n not in cache:
            cache[n] = candidate.eval_exact(n)
        return cache[n]

    for n in rng:
        try:
            if n - rec.order < 0:
                raise ValueError(f"{rec.var}={n} reaches a negative argument")
            total = -rec.rhs.eval_exact(n)
            for i, a in enumerate(rec.coeffs):
                try:
                    ai = a(Fraction(n))
                except ZeroDivisionError:
                    raise PoleError(a, n) from None
                if ai:
                    total = total + value(n - i) * ai
        except (PoleError, ValueError) as exc:
            report.failures[n] = f"pole or invalid point: {exc}"
            continue
        report.residuals[n] = total
        if not total.is_zero():
            report.failures[n] = f"nonzero residual {total}"
    report.checked = tuple(rng)
    for n, expected in (ics or {}).items():
        expected = as_zeta_value(expected)
        try:
            got = value(n)
        except (PoleError, ValueError) as exc:
            report.ic_failures[n] = (expected, f"<{exc}>")
            continue
        if got != expected:
            report.ic_failures[n] = (expected, got)
    if symbolic:
        report.symbolic = apply(rec, candidate) - rec.rhs
    return report


@dataclass(frozen=True)
class SingularPoints:
    forward: frozenset
    backward: frozenset

    def __iter__(self):
        yield from sorted(self.forward | self.backward)


def singular_points(rec: Recurrence) -> SingularPoints:
    """Zeros N >= 0 of a_0 (forward solving) and of a_k (backward solving)."""
    coeffs = rec.poly_coeffs()

    def roots(p):
        if not p.is_rational() or p.degree <= 0:
            return frozenset()
        return frozenset(int(r) for r in integer_roots(p) if r >= 0)

    return SingularPoints(roots(coeffs[0]), roots(coeffs[-1]))


def unroll(rec: Recurrence, ics, up_to: int) -> dict[int, ZetaValue]:
    """Forward recursion from the initial values up to and including up_to."""
    ics = InitialConditions(ics)
    if not ics:
        raise InsufficientInitialConditions("no initial conditions given")
    k = rec.order
    start = min(ics)
    missing = [n for n in range(start, start + k) if n not in ics]
    if missing:
        raise InsufficientInitialConditions(
            f"need {k} consecutive initial values from {rec.var}={start}; missing {missing}")
    values = {n: v for n, v in ics.items()}
    for n in range(start + k, up_to + 1):
        if n in ics:
            continue
        try:
            a = [c(Fraction(n)) for c in rec.coeffs]
        except ZeroDivisionError:
            raise InsufficientInitialConditions(
                f"a coefficient has a pole at {rec.var}={n}; an initial value is required there") from None
        if not a[0]:
            raise InsufficientInitialConditions(
                f"leading coefficient vanishes at {rec.var}={n}; an initial value is required there")
        total = rec.rhs.eval_exact(n)
        for i in range(1, k + 1):
            if a[i]:
                total = total - values[n - i] * a[i]
        values[n] = total / a[0]
    return dict(sorted((n, v) for n, v in values.items() if n <= up_to))

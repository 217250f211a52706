"""Constant fields: Q, Q(eps) and Q(n)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly
from .ratfunc import RatFunc

__all__ = ["ConstantField", "QQ", "QQ_EPS", "QQ_N", "field_of"]


@dataclass(frozen=True)
class ConstantField:
    kind: str  # "Q", "Q(eps)" or "Q(n)"

    @property
    def generator_name(self) -> str | None:
        return {"Q": None, "Q(eps)": "eps", "Q(n)": "n"}[self.kind]

    def gen(self):
        if self.generator_name is None:
            raise ValueError("Q has no generator")
        return RatFunc.gen(self.generator_name)

    def coerce(self, c):
        if isinstance(c, int):
            c = Fraction(c)
        if isinstance(c, Fraction):
            return c
        if isinstance(c, RatFunc):
            if c.var != self.generator_name:
                raise TypeError(f"{c} is not an element of {self.kind}")
            if c.is_constant():
                return c.constant_value()
            return c
        if isinstance(c, Poly):
            return self.coerce(RatFunc(c))
        raise TypeError(f"cannot coerce {c!r} into {self.kind}")

    def contains(self, c) -> bool:
        if isinstance(c, (int, Fraction)):
            return True
        return isinstance(c, RatFunc) and c.var == self.generator_name

    def __str__(self):
        return self.kind


QQ = ConstantField("Q")
QQ_EPS = ConstantField("Q(eps)")
QQ_N = ConstantField("Q(n)")


def field_of(*values) -> ConstantField:
    """Smallest supported field containing all given constants."""
    found = None
    for v in values:
        if isinstance(v, RatFunc) and not v.is_constant():
            name = v.var
            if found is not None and found != name:
                raise TypeError("mixing Q(eps) and Q(n) is not supported")
            found = name
    return {None: QQ, "eps": QQ_EPS, "n": QQ_N}[found]

"""Result types shared by the solving strategies."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..arith import RatFunc


class NoSolution(Exception):
    """No solution within the searched class; ``keys`` names what is missing."""

    def __init__(self, msg: str, keys=(), hint: str | None = None):
        super().__init__(msg)
        self.keys = tuple(keys)
        self.hint = hint


class Underdetermined(ValueError):
    def __init__(self, msg: str, free: int = 0):
        super().__init__(msg)
        self.free = free


class InconsistentConditions(ValueError):
    pass


@dataclass(frozen=True)
class ParamSolution:
    """Constants c_1..c_d and certificate g with Delta g = sum c_i f_i."""

    constants: tuple
    certificate: object  # RatFunc or HExpr


@dataclass(frozen=True)
class HypergeomCertificate:
    """Ratio r(k) = g(k+1)/g(k) of a product solution."""

    ratio: RatFunc

    def __str__(self):
        return str(self.ratio)


@dataclass
class SolutionSet:
    """particular + span(homogeneous); elements are HExpr or NestedSumExpr."""

    particular: object = None
    homogeneous: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def free_constants(self) -> list[str]:
        return [f"c{i + 1}" for i in range(len(self.homogeneous))]

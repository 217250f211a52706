"""Harmonic-sum expressions in canonical form."""
from .expr import (
    HExpr,
    HTerm,
    PoleError,
    ZetaValue,
    basis_enumerate,
    harmonic_value,
    signed_compositions,
    stuffle,
    weight,
)
from .parse import Node, ParseError, normalize, parse, parse_hexpr

__all__ = [
    "HExpr",
    "HTerm",
    "Node",
    "ParseError",
    "PoleError",
    "ZetaValue",
    "basis_enumerate",
    "harmonic_value",
    "normalize",
    "parse",
    "parse_hexpr",
    "signed_compositions",
    "stuffle",
    "weight",
]

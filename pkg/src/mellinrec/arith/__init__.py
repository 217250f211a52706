"""Exact arithmetic: rationals, polynomials, rational functions, eps-series."""
from fractions import Fraction as BigRational

from .field import QQ, QQ_EPS, QQ_N, ConstantField, field_of
from .laurent import LaurentSeries
from .poly import (
    Poly,
    dispersion,
    integer_roots,
    linear_factorization,
    poly_gcd,
    poly_lcm,
    rational_roots,
    resultant,
    shift_poly,
    squarefree_decomposition,
)
from .ratfunc import RatFunc

__all__ = [
    "BigRational",
    "ConstantField",
    "LaurentSeries",
    "Poly",
    "QQ",
    "QQ_EPS",
    "QQ_N",
    "RatFunc",
    "dispersion",
    "field_of",
    "integer_roots",
    "linear_factorization",
    "poly_gcd",
    "poly_lcm",
    "rational_roots",
    "resultant",
    "shift_poly",
    "squarefree_decomposition",
]

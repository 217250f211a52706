"""Text form of HExpr in the surface grammar (parseable back)."""
from __future__ import annotations

from fractions import Fraction

from ..arith.poly import _is_atom, format_poly
from ..arith.ratfunc import format_factored_den, wrap_compound
from .expr import _zeta_factor_strings


def _index_str(index, var: str) -> str:
    return f"S[{','.join(str(m) for m in index)}]({var})"


def _format_term(key, coeff, var: str) -> tuple[bool, str]:
    """(negative, text) for one term; the sign is pulled out front."""
    alt, zeta, index = key
    factors = []
    if alt:
        factors.append(f"(-1)^{var}")
    factors.extend(_zeta_factor_strings(zeta))
    if index:
        factors.append(_index_str(index, var))
    num, den = coeff.num, coeff.den
    neg = False
    compound = len([c for c in num.coeffs if c]) > 1
    if num.is_rational():
        if num.lc < 0:
            neg = True
            num = -num
    if num.degree == 0:
        c = num.coeff(0)
        if isinstance(c, Fraction):
            if factors:
                body = "*".join(factors) if c == 1 else f"{c}*" + "*".join(factors)
            else:
                body = str(c)
        else:
            body = str(c)
            if not _is_atom(body):
                body = f"({body})"
            if factors:
                body += "*" + "*".join(factors)
    else:
        text = format_poly(num)
        if compound or not factors:
            text = f"({text})" if factors or den.degree > 0 or (neg and compound) else text
        body = text + ("*" + "*".join(factors) if factors else "")
    if den.degree > 0:
        d = wrap_compound(format_factored_den(den))
        body = f"{body}/{d}"
    return neg, body


def format_hexpr(e) -> str:
    if e.is_zero():
        return "0"
    out = []
    for key, coeff in e.items():
        neg, body = _format_term(key, coeff, e.var)
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)

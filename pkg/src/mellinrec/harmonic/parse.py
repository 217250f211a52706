"""Parser for the expression surface syntax.

    S[1,-2](N)   S[3](N-2)   z(3)   (-1)^N   (-1)^(N-1)   eps   n
    integers, a/b rationals, + - * / ^, parentheses

Text is first parsed into a small tree of :class:`Node` objects and then
reduced by :func:`normalize` to a canonical :class:`HExpr`.  Names other than
the built-ins may be supplied as ``defines`` (e.g. an inhomogeneity ``X``),
which are then usable as ``X(N-1)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..arith import RatFunc
from .expr import HExpr

__all__ = ["ParseError", "Node", "parse", "normalize", "parse_hexpr"]


class ParseError(ValueError):
    """Syntax or evaluation error with a 1-based line/column position."""

    def __init__(self, msg: str, line: int = 1, col: int = 1, unresolved: str | None = None):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col
        self.unresolved = unresolved


@dataclass(frozen=True)
class Node:
    op: str  # num, var, eps, n, sum, zeta, call, neg, add, sub, mul, div, pow
    args: tuple
    pos: int = 0


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()\[\],]))"
)


def _tokenize(text: str):
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            if text[i:].strip() == "":
                break
            j = i
            while j < len(text) and text[j].isspace():
                j += 1
            raise _error(text, j, f"unexpected character {text[j]!r}")
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        i = m.end()
    toks.append(("end", "", len(text)))
    return toks


def _linecol(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _error(text: str, pos: int, msg: str, unresolved=None) -> ParseError:
    line, col = _linecol(text, pos)
    return ParseError(msg, line, col, unresolved)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.next()
        if t[1] != value:
            got = "end of input" if t[0] == "end" else repr(t[1])
            raise _error(self.text, t[2], f"expected {value!r}, got {got}")
        return t

    def parse(self) -> Node:
        node = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise _error(self.text, t[2], f"unexpected {t[1]!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            t = self.next()
            rhs = self.term()
            node = Node("add" if t[1] == "+" else "sub", (node, rhs), t[2])
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            t = self.next()
            rhs = self.unary()
            node = Node("mul" if t[1] == "*" else "div", (node, rhs), t[2])
        return node

    def unary(self) -> Node:
        t = self.peek()
        if t[0] == "op" and t[1] in ("-", "+"):
            self.next()
            inner = self.unary()
            return Node("neg", (inner,), t[2]) if t[1] == "-" else inner
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.next()
            exp = self.unary()
            return Node("pow", (base, exp), t[2])
        return base

    def atom(self) -> Node:
        t = self.next()
        kind, val, pos = t
        if kind == "num":
            return Node("num", (int(val),), pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "name":
            if val == "S" and self.peek()[1] == "[":
                return self.harmonic(pos)
            if val == "z" and self.peek()[1] == "(":
                self.next()
                k = self.signed_int()
                self.expect(")")
                if k < 2:
                    raise _error(self.text, pos, f"z({k}) is not a zeta value; need argument >= 2")
                return Node("zeta", (k,), pos)
            if self.peek()[1] == "(":
                self.next()
                arg = self.expr()
                self.expect(")")
                return Node("call", (val, arg), pos)
            return Node("name", (val,), pos)
        got = "end of input" if kind == "end" else repr(val)
        raise _error(self.text, pos, f"unexpected {got}")

    def signed_int(self) -> int:
        sign = 1
        if self.peek()[1] == "-":
            self.next()
            sign = -1
        t = self.next()
        if t[0] != "num":
            raise _error(self.text, t[2], "expected an integer")
        return sign * int(t[1])

    def harmonic(self, pos: int) -> Node:
        self.expect("[")
        idx = [self.signed_int()]
        while self.peek()[1] == ",":
            self.next()
            idx.append(self.signed_int())
        self.expect("]")
        if any(m == 0 for m in idx):
            raise _error(self.text, pos, "harmonic sum index entries must be nonzero")
        self.expect("(")
        arg = self.expr()
        self.expect(")")
        return Node("sum", (tuple(idx), arg), pos)


def parse(text: str) -> Node:
    """Parse text into an unevaluated expression tree."""
    return _Parser(text).parse()


class _Reducer:
    def __init__(self, text: str, var: str, defines: dict, params: tuple):
        self.text = text
        self.var = var
        self.defines = defines or {}
        self.params = params

    def err(self, node: Node, msg: str, unresolved=None):
        return _error(self.text, node.pos, msg, unresolved)

    def shift_of(self, node: Node) -> int:
        """Integer j for an argument of the form var + j."""
        v = self.reduce(node)
        if v.is_rational():
            f = v.as_ratfunc()
            if f.is_polynomial() and f.num.degree == 1 and f.num.lc == 1:
                j = f.num.coeff(0)
                if isinstance(j, Fraction) and j.denominator == 1:
                    return int(j)
        raise self.err(node, f"argument must be {self.var} plus an integer offset")

    def reduce(self, node: Node) -> HExpr:
        op, a = node.op, node.args
        var = self.var
        if op == "num":
            return HExpr.const(a[0], var)
        if op == "name":
            name = a[0]
            if name == var:
                return HExpr.rational(RatFunc.gen(var), var)
            if name in self.params:
                return HExpr.const(RatFunc.gen(name), var)
            if name in self.defines:
                raise self.err(node, f"{name} must be applied to an argument, e.g. {name}({var})")
            raise self.err(node, f"unresolved symbol {name!r}", unresolved=name)
        if op == "sum":
            idx, arg = a
            return HExpr.S(idx, var).shift(self.shift_of(arg))
        if op == "zeta":
            return HExpr.zeta(a[0], var)
        if op == "call":
            name, arg = a
            if name not in self.defines:
                raise self.err(node, f"unresolved symbol {name!r}", unresolved=name)
            return self.defines[name].shift(self.shift_of(arg))
        if op == "neg":
            return -self.reduce(a[0])
        if op in ("add", "sub", "mul"):
            x, y = self.reduce(a[0]), self.reduce(a[1])
            return x + y if op == "add" else x - y if op == "sub" else x * y
        if op == "div":
            x, y = self.reduce(a[0]), self.reduce(a[1])
            if not y.is_rational():
                raise self.err(node, "division by a non-rational expression")
            if y.is_zero():
                raise self.err(node, "division by zero")
            return x / y
        if op == "pow":
            return self.power(node)
        raise self.err(node, f"unknown node {op}")

    def power(self, node: Node) -> HExpr:
        base_node, exp_node = node.args
        var = self.var
        exp = self.reduce(exp_node)
        if not exp.is_rational():
            raise self.err(exp_node, "exponent must be an integer or an integer shift of " + var)
        f = exp.as_ratfunc()
        if f.is_constant():
            e = f.constant_value()
            if not (isinstance(e, Fraction) and e.denominator == 1):
                raise self.err(exp_node, "exponent must be an integer")
            base = self.reduce(base_node)
            e = int(e)
            if e < 0 and (base.is_zero() or not base.is_rational()):
                raise self.err(node, "negative power of zero or of a non-rational expression"
                               if not base.is_zero() else "division by zero")
            return base ** e
        # (-1)^(N + j)
        j = self.shift_of(exp_node)
        base = self.reduce(base_node)
        if base != HExpr.const(-1, var):
            raise self.err(node, f"only (-1) may be raised to a power involving {var}")
        out = HExpr.alternating(var)
        return -out if j % 2 else out


def normalize(e, *, var: str = "N", defines: dict | None = None, params=("eps", "n"), text: str = "") -> HExpr:
    """Reduce an expression tree (or text, or an HExpr) to canonical form."""
    if isinstance(e, HExpr):
        return e
    if isinstance(e, str):
        return parse_hexpr(e, var=var, defines=defines, params=params)
    return _Reducer(text, var, defines, tuple(params)).reduce(e)


def parse_hexpr(text: str, *, var: str = "N", defines: dict | None = None, params=("eps", "n"), line_offset: int = 0) -> HExpr:
    try:
        tree = parse(text)
        return _Reducer(text, var, defines, tuple(p for p in params if p != var)).reduce(tree)
    except ParseError as exc:
        if line_offset:
            raise ParseError(exc.msg, exc.line + line_offset, exc.col, exc.unresolved) from None
        raise

"""Recurrence files.

    # comment
    var N
    order 2
    field Q | eps | n
    eps-order 2                  (optional)
    coeff[0] = <expr>
    coeff[1] = <expr>
    define X(N) =                (optional; continuation lines are indented)
        <expr>
    rhs = <expr>                 (may use defines and named external terms)
    ics {                        (optional)
        1: <expr>
    }

The rhs is kept as a linear form: a harmonic part plus coefficients of named
terms such as X(N) or R1(N-2).  Named terms are resolved by the defines of
the file or by definitions supplied later (``RecurrenceFile.recurrence``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from dataclasses import field as dc_field

from ..harmonic import HExpr, ParseError, parse, parse_hexpr
from ..harmonic.parse import Node, _Reducer
from ..recurrence import InitialConditions, Recurrence, as_zeta_value

__all__ = [
    "LinearRhs",
    "RecurrenceFile",
    "UnresolvedSymbol",
    "parse_recurrence_file",
    "format_recurrence_file",
    "parse_ics_text",
    "format_ics",
    "split_terms",
]

FIELD_PARAMS = {"Q": (), "eps": ("eps",), "n": ("n",)}


class UnresolvedSymbol(ValueError):
    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__("rhs references undefined term(s): " + ", ".join(self.names))


@dataclass(frozen=True)
class LinearRhs:
    """base + sum coeff * name(var + shift)."""

    base: HExpr
    named: tuple = ()  # ((name, shift, HExpr coefficient), ...) sorted

    @classmethod
    def make(cls, base: HExpr, named: dict) -> "LinearRhs":
        items = tuple(sorted(((n, j, c) for (n, j), c in named.items() if c), key=lambda t: (t[0], -t[1])))
        return cls(base, items)

    @property
    def names(self) -> set:
        return {n for n, _, _ in self.named}

    def resolve(self, defines: dict) -> HExpr:
        missing = self.names - set(defines)
        if missing:
            raise UnresolvedSymbol(missing)
        out = self.base
        for name, j, c in self.named:
            out = out + c * defines[name].shift(j)
        return out

    def text(self) -> str:
        var = self.base.var
        parts = [] if self.base.is_zero() else [str(self.base)]
        for name, j, c in self.named:
            arg = var if j == 0 else f"{var}{j:+d}"
            call = f"{name}({arg})"
            if c == 1:
                parts.append(call)
            elif c == -1:
                parts.append("-" + call)
            else:
                parts.append(f"({c})*{call}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


class _LinearReducer(_Reducer):
    """Reduces an rhs tree to (base, {(name, shift): coeff})."""

    builtin = frozenset({"S", "z"})

    def linear(self, node: Node):
        op, a = node.op, node.args
        var = self.var
        if not _has_call(node, self.builtin):
            return self.reduce(node), {}
        if op == "call":
            name, arg = a
            return HExpr.zero(var), {(name, self.shift_of(arg)): HExpr.const(1, var)}
        if op == "neg":
            b, n = self.linear(a[0])
            return -b, {k: -v for k, v in n.items()}
        if op in ("add", "sub"):
            b1, n1 = self.linear(a[0])
            b2, n2 = self.linear(a[1])
            sign = 1 if op == "add" else -1
            out = dict(n1)
            for k, v in n2.items():
                v = v if sign == 1 else -v
                out[k] = out[k] + v if k in out else v
            return (b1 + b2 if sign == 1 else b1 - b2), out
        if op == "mul":
            left, right = a
            if _has_call(left, self.builtin) and _has_call(right, self.builtin):
                raise self.err(node, "the rhs must be linear in the named terms")
            if _has_call(left, self.builtin):
                left, right = right, left
            c = self.reduce(left)
            b, n = self.linear(right)
            return c * b, {k: c * v for k, v in n.items()}
        if op == "div":
            if _has_call(a[1], self.builtin):
                raise self.err(node, "named terms cannot appear in a denominator")
            d = self.reduce(a[1])
            if not d.is_rational() or d.is_zero():
                raise self.err(node, "division by zero" if d.is_zero() else "division by a non-rational expression")
            b, n = self.linear(a[0])
            return b / d, {k: v / d for k, v in n.items()}
        raise self.err(node, "named terms may only be added and scaled")


def _has_call(node, builtin) -> bool:
    if not isinstance(node, Node):
        return False
    if node.op == "call" and node.args[0] not in builtin:
        return True
    return any(_has_call(x, builtin) for x in node.args)


@dataclass
class RecurrenceFile:
    var: str = "N"
    order: int = 1
    field: str = "Q"
    eps_order: int | None = None
    coeffs: list = dc_field(default_factory=list)
    defines: dict = dc_field(default_factory=dict)
    rhs: LinearRhs | None = None
    ics: InitialConditions = dc_field(default_factory=InitialConditions)

    def recurrence(self, extra: dict | None = None) -> Recurrence:
        """The recurrence; named rhs terms must be resolvable."""
        defines = dict(self.defines)
        defines.update(extra or {})
        rhs = self.rhs.resolve(defines) if self.rhs else None
        return Recurrence(self.coeffs, rhs, self.var)

    def shape(self):
        """Structural identity used for round-trip comparison."""
        return (self.var, self.order, self.field, self.eps_order, tuple(self.coeffs),
                tuple(sorted(self.defines.items())), self.rhs, tuple(sorted(self.ics.items())))

    def __eq__(self, other):
        if not isinstance(other, RecurrenceFile):
            return NotImplemented
        return self.shape() == other.shape()


_HEADER = re.compile(r"^(var|order|field|eps-order)\s+(\S+)\s*$")
_COEFF = re.compile(r"^coeff\[(\d+)\]\s*=")
_DEFINE = re.compile(r"^define\s+([A-Za-z_]\w*)\s*\(\s*([A-Za-z_]\w*)\s*\)\s*=")
_RHS = re.compile(r"^rhs\s*=")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_recurrence_file(text: str) -> RecurrenceFile:
    """Parse a recurrence file; errors carry line and column."""
    lines = [_strip_comment(l).rstrip() for l in text.splitlines()]
    rf = RecurrenceFile()
    coeff_src: dict[int, tuple] = {}
    define_src: list[tuple] = []
    rhs_src = None
    ics_src: list[tuple] = []
    seen_header = set()
    i = 0
    while i < len(lines):
        line = lines[i]
        lineno = i + 1
        stripped = line.strip()
        if not stripped:
            i += 1
            continue
        if line[0].isspace():
            raise ParseError("unexpected indented line", lineno, 1)
        m = _HEADER.match(stripped)
        if m:
            key, val = m.groups()
            if key in seen_header:
                raise ParseError(f"duplicate header {key!r}", lineno, 1)
            seen_header.add(key)
            _set_header(rf, key, val, lineno)
            i += 1
            continue
        if stripped.startswith("ics"):
            if not re.match(r"^ics\s*\{\s*$", stripped):
                raise ParseError("expected 'ics {'", lineno, 1)
            i += 1
            while i < len(lines) and lines[i].strip() != "}":
                if lines[i].strip():
                    ics_src.append((lines[i], i + 1))
                i += 1
            if i == len(lines):
                raise ParseError("unterminated ics block", lineno, 1)
            i += 1
            continue
        for pat in (_COEFF, _DEFINE, _RHS):
            m = pat.match(line)
            if m:
                break
        else:
            raise ParseError(f"unrecognized line: {stripped}", lineno, 1)
        # expression: rest of the line plus indented continuation lines
        body = [" " * m.end() + line[m.end():]]
        j = i + 1
        while j < len(lines) and (not lines[j].strip() or lines[j][0].isspace()):
            body.append(lines[j])
            j += 1
        src = ("\n".join(body), lineno)
        if pat is _COEFF:
            k = int(m.group(1))
            if k in coeff_src:
                raise ParseError(f"coeff[{k}] given twice", lineno, 1)
            coeff_src[k] = src
        elif pat is _DEFINE:
            define_src.append((m.group(1), m.group(2), src))
        else:
            if rhs_src is not None:
                raise ParseError("rhs given twice", lineno, 1)
            rhs_src = src
        i = j
    params = FIELD_PARAMS[rf.field]
    var = rf.var
    expected = list(range(rf.order + 1))
    if sorted(coeff_src) != expected:
        missing = sorted(set(expected) - set(coeff_src))
        extra = sorted(set(coeff_src) - set(expected))
        what = f"missing coeff{missing}" if missing else f"coeff{extra} beyond order {rf.order}"
        raise ParseError(f"coefficients do not match the order: {what}", 1, 1)
    for k in expected:
        body, lineno = coeff_src[k]
        e = parse_hexpr(body, var=var, params=params, line_offset=lineno - 1)
        if not e.is_rational():
            raise ParseError(f"coeff[{k}] must be a rational function of {var}", lineno, 1)
        rf.coeffs.append(e.as_ratfunc())
    for name, arg, (body, lineno) in define_src:
        if arg != var:
            raise ParseError(f"define {name} must take {var} as its argument", lineno, 1)
        if name in _LinearReducer.builtin or name == var or name in params:
            raise ParseError(f"{name!r} is reserved", lineno, 1)
        rf.defines[name] = parse_hexpr(body, var=var, defines=rf.defines, params=params, line_offset=lineno - 1)
    if rhs_src is None:
        rf.rhs = LinearRhs.make(HExpr.zero(var), {})
    else:
        body, lineno = rhs_src
        rf.rhs = _parse_linear(body, var, params, lineno)
    rf.ics = parse_ics_lines(ics_src, var, params)
    return rf


def _parse_linear(body: str, var: str, params, lineno: int) -> LinearRhs:
    try:
        tree = parse(body)
        base, named = _LinearReducer(body, var, {}, tuple(params)).linear(tree)
    except ParseError as exc:
        raise ParseError(exc.msg, exc.line + lineno - 1, exc.col, exc.unresolved) from None
    return LinearRhs.make(base, named)


def _set_header(rf: RecurrenceFile, key: str, val: str, lineno: int):
    if key == "var":
        if not re.fullmatch(r"[A-Za-z]\w*", val) or val in ("eps", "n", "S", "z"):
            raise ParseError(f"invalid variable name {val!r}", lineno, 5)
        rf.var = val
    elif key == "field":
        if val not in FIELD_PARAMS:
            raise ParseError(f"field must be one of {', '.join(FIELD_PARAMS)}", lineno, 7)
        rf.field = val
    else:
        try:
            v = int(val)
        except ValueError:
            raise ParseError(f"{key} must be an integer", lineno, len(key) + 2) from None
        if key == "order":
            if v < 1:
                raise ParseError("order must be at least 1", lineno, 7)
            rf.order = v
        else:
            rf.eps_order = v


def parse_ics_lines(src: list, var: str, params=()) -> InitialConditions:
    ics = InitialConditions()
    for line, lineno in src:
        m = re.match(r"^\s*(-?\d+)\s*:", line)
        if not m:
            raise ParseError("initial condition lines look like '<integer>: <expr>'", lineno, 1)
        n = int(m.group(1))
        if n in ics:
            raise ParseError(f"initial value at {n} given twice", lineno, 1)
        body = " " * m.end() + line[m.end():]
        e = parse_hexpr(body, var=var, params=params, line_offset=lineno - 1)
        try:
            ics[n] = as_zeta_value(e)
        except ValueError as exc:
            raise ParseError(str(exc), lineno, m.end() + 1) from None
    return ics


def parse_ics_text(text: str, var: str = "N", params=("eps",)) -> InitialConditions:
    """'n: value' lines (comments and blank lines allowed)."""
    src = [(_strip_comment(l), i + 1) for i, l in enumerate(text.splitlines())]
    return parse_ics_lines([(l, n) for l, n in src if l.strip()], var, params)


def format_ics(ics: dict, indent: str = "") -> str:
    return "\n".join(f"{indent}{n}: {as_zeta_value(v)}" for n, v in sorted(ics.items()))


def split_terms(text: str) -> list[str]:
    """Split printed output at top-level ' + ' / ' - ' into signed pieces."""
    parts = []
    depth = 0
    start = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif depth == 0 and text.startswith((" + ", " - "), i):
            parts.append(text[start:i])
            start = i + 1
            i += 3
            continue
        i += 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def _block(text: str, indent: str = "    ") -> str:
    terms = split_terms(text)
    if len(terms) <= 1:
        return " " + text
    lines = [indent + "  " + terms[0]]
    lines += [indent + t for t in terms[1:]]
    return "\n" + "\n".join(lines)


def format_recurrence_file(rf: RecurrenceFile) -> str:
    out = [f"var {rf.var}", f"order {rf.order}", f"field {rf.field}"]
    if rf.eps_order is not None:
        out.append(f"eps-order {rf.eps_order}")
    var = rf.var
    for k, c in enumerate(rf.coeffs):
        out.append(f"coeff[{k}] = {HExpr.rational(c, var)}")
    for name, e in rf.defines.items():
        out.append(f"define {name}({var}) ={_block(str(e))}")
    if rf.rhs is not None:
        out.append(f"rhs ={_block(rf.rhs.text())}")
    if rf.ics:
        out.append("ics {")
        out.append(format_ics(rf.ics, "    "))
        out.append("}")
    return "\n".join(out) + "\n"

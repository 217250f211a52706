"""Exact linear algebra over Q, Q(eps) or Q(n).

Rows are sparse dicts column -> value.  Elimination is Gauss-Jordan with
exact field arithmetic; pivots are chosen deterministically.
"""
from __future__ import annotations

from fractions import Fraction

__all__ = ["IncrementalRREF", "solve_linear", "nullspace", "Inconsistent"]


class Inconsistent(ValueError):
    """A linear system has no solution."""

    def __init__(self, msg="inconsistent linear system", tag=None):
        super().__init__(msg)
        self.tag = tag


def _axpy(row: dict, coef, other: dict) -> None:
    """row += coef * other, dropping zeros."""
    for c, v in other.items():
        w = row.get(c)
        w = coef * v if w is None else w + coef * v
        if w:
            row[c] = w
        else:
            row.pop(c, None)


class IncrementalRREF:
    """Reduced row echelon form grown one equation at a time.

    Each equation is ``sum row[c] * x_c = const``.  By default the pivot of a
    new row is its largest column, so unknowns introduced later are solved
    for in terms of earlier ones; ``pivot_key`` overrides the choice.
    Constants may be any values supporting + and scalar *, e.g. Fraction.
    """

    def __init__(self, pivot_key=None):
        self.rows: dict = {}  # pivot col -> (row dict incl. pivot with coef 1, const)
        self.col_rows: dict = {}  # col -> set of pivot cols whose row mentions col
        self.pivot_key = pivot_key or (lambda c: c)

    def _reduce(self, row: dict, const):
        row = dict(row)
        changed = True
        while changed:
            changed = False
            for c in [c for c in row if c in self.rows]:
                coef = row.get(c)
                if not coef:
                    continue
                prow, pconst = self.rows[c]
                _axpy(row, -coef, prow)
                const = const - coef * pconst
                changed = True
        return row, const

    def add(self, row: dict, const=Fraction(0), tag=None):
        """Add an equation; returns the new pivot column or None if redundant.

        Raises Inconsistent (carrying ``tag``) if the equation contradicts
        the system.
        """
        row = {c: v for c, v in row.items() if v}
        row, const = self._reduce(row, const)
        if not row:
            if const:
                raise Inconsistent(tag=tag)
            return None
        piv = max(row, key=self.pivot_key)
        inv = 1 / row[piv] if not isinstance(row[piv], Fraction) else Fraction(1) / row[piv]
        if inv != 1:
            row = {c: v * inv for c, v in row.items()}
            const = const * inv
        row[piv] = Fraction(1) if isinstance(row[piv], Fraction) else row[piv]
        # eliminate the new pivot from existing rows
        for p in list(self.col_rows.get(piv, ())):
            prow, pconst = self.rows[p]
            coef = prow.get(piv)
            if not coef:
                continue
            prow = dict(prow)
            _axpy(prow, -coef, row)
            self._set(p, prow, pconst - coef * const)
        self._set(piv, row, const)
        return piv

    def _set(self, piv, row, const):
        old = self.rows.get(piv)
        if old is not None:
            for c in old[0]:
                s = self.col_rows.get(c)
                if s is not None:
                    s.discard(piv)
        self.rows[piv] = (row, const)
        for c in row:
            if c != piv:
                self.col_rows.setdefault(c, set()).add(piv)

    def is_pivot(self, col) -> bool:
        return col in self.rows

    def expression(self, col):
        """col as (const, {free col: coef}) in terms of the free columns."""
        if col not in self.rows:
            return Fraction(0), {col: Fraction(1)}
        row, const = self.rows[col]
        return const, {c: -v for c, v in row.items() if c != col}

    def free_columns(self, columns) -> list:
        return [c for c in columns if c not in self.rows]

    def value(self, col, free_values: dict | None = None):
        const, lin = self.expression(col)
        out = const
        for c, v in lin.items():
            fv = (free_values or {}).get(c, 0)
            if fv:
                out = out + v * fv
        return out


def solve_linear(rows, consts, ncols: int):
    """Solve A x = b exactly.

    Returns (particular, basis) where particular is a list (free variables
    zero) and basis spans the nullspace, or None if inconsistent.
    """
    sys = IncrementalRREF(pivot_key=lambda c: -c)
    try:
        for r, b in zip(rows, consts):
            if isinstance(r, dict):
                sys.add(r, b)
            else:
                sys.add({i: v for i, v in enumerate(r) if v}, b)
    except Inconsistent:
        return None
    free = sys.free_columns(range(ncols))
    particular = [sys.value(c) for c in range(ncols)]
    basis = []
    for f in free:
        basis.append([sys.value(c, {f: 1}) - particular[c] for c in range(ncols)])
    return particular, basis


def nullspace(rows, ncols: int) -> list[list]:
    out = solve_linear(rows, [Fraction(0)] * len(rows), ncols)
    return out[1] if out else []

"""Harmonic-sum ansatz for linear recurrences.

The unknown solution is a linear combination of keys (alt, zeta, index) with
rational coefficients c_K(N) = P_K(N) / D(N), D a fixed product of powers of
(N + j).  Applying the operator and comparing coefficients of every key gives
one rational-function identity per key.  A key only receives contributions
from itself and from keys whose index has it as a proper suffix (shifting a
sum produces suffixes), so keys are solved from the deepest down.  Each
identity is cleared of denominators and its polynomial coefficients are
compared exactly.

Unknowns left free by a key become global parameters; later identities may
pin them down, in which case the substitution is applied everywhere.
Whatever remains free spans the homogeneous solutions inside the basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..arith import LaurentSeries, Poly, RatFunc, poly_lcm
from ..harmonic import HExpr, PoleError, ZetaValue
from ..harmonic.expr import _shift_sum_terms, signed_compositions, term_sort_key, zeta_weight
from ..recurrence import Recurrence, ResidualReport, as_zeta_value
from .ics import match_initial_conditions
from .linalg import IncrementalRREF, Inconsistent
from .types import NoSolution, SolutionSet

__all__ = ["AnsatzConfig", "AnsatzEngine", "solve_ansatz", "ansatz_general", "eps_series", "key_text"]


@dataclass(frozen=True)
class AnsatzConfig:
    max_weight: int = 5
    pole_offsets: tuple = (-3, -2, -1, 0, 1)
    pole_degree: int = 3
    alt: bool = True
    zeta: tuple = ((3,), (5,))
    eps_order: int | None = None
    poly_degree: int = 0

    def describe(self) -> dict:
        return {
            "weight": self.max_weight,
            "poles": [min(self.pole_offsets), max(self.pole_offsets)] if self.pole_offsets else [],
            "pole_degree": self.pole_degree,
            "alt": self.alt,
            "zeta": [list(z) for z in self.zeta],
            "eps_order": self.eps_order,
        }


def key_text(key, var: str = "N") -> str:
    alt, zeta, index = key
    parts = []
    if alt:
        parts.append(f"(-1)^{var}")
    for z in zeta:
        parts.append(f"z({z})")
    if index:
        parts.append(f"S[{','.join(map(str, index))}]")
    return "*".join(parts) if parts else "1"


def _envelope_keys(cfg: AnsatzConfig) -> list:
    zetas = [()] + sorted({tuple(sorted(z)) for z in cfg.zeta if z})
    out = []
    for a in ((False, True) if cfg.alt else (False,)):
        for z in zetas:
            zw = zeta_weight(z)
            for w in range(0, cfg.max_weight - zw + 1):
                for idx in signed_compositions(w):
                    out.append((a, z, idx))
    return out


class AnsatzEngine:
    """Solver for sum_i a_i(N) I(N-i) = rhs over Q inside a fixed basis."""

    def __init__(self, coeffs, cfg: AnsatzConfig, var: str = "N", extra_keys=()):
        self.var = var
        self.cfg = cfg
        polys = []
        den = Poly((1,), var)
        rfs = [c if isinstance(c, RatFunc) else RatFunc(c) if isinstance(c, Poly) else RatFunc.const(c, var) for c in coeffs]
        for c in rfs:
            den = poly_lcm(den, c.den)
        self.scale = RatFunc(den)
        for c in rfs:
            polys.append((c * self.scale).num)
        if any(not p.is_rational() for p in polys):
            raise ValueError("the ansatz engine works over Q; expand in eps first")
        self.a = polys
        self.order = len(polys) - 1
        x = Poly.gen(var)
        d = Poly((1,), var)
        for j in cfg.pole_offsets:
            d = d * (x + j) ** cfg.pole_degree
        self.D = d
        self.nu = d.degree + 1 + cfg.poly_degree
        self.keys = _envelope_keys(cfg) + [k for k in extra_keys]
        self.keyset = set(self.keys)
        self._own = {}

    # operator applied to the skeleton numerators of one key
    def _own_images(self, alt: bool):
        if alt in self._own:
            return self._own[alt]
        var = self.var
        x = Poly.gen(var)
        lown = Poly((1,), var)
        dsh = [self.D.shift(-i) for i in range(self.order + 1)]
        for p in dsh:
            lown = poly_lcm(lown, p)
        mult = [lown.exquo(p) for p in dsh]
        images = []
        for dgr in range(self.nu):
            tot = Poly((), var)
            for i, a in enumerate(self.a):
                if not a:
                    continue
                t = a * (x - i) ** dgr * mult[i]
                if alt and i % 2:
                    t = -t
                tot = tot + t
            images.append(tot)
        self._own[alt] = (lown, images)
        return self._own[alt]

    def solve(self, rhs: HExpr) -> tuple[HExpr, list[HExpr]]:
        """Particular solution (free parameters zero) and homogeneous basis."""
        return _Run(self, rhs.scale(self.scale)).run()


class _Run:
    def __init__(self, eng: AnsatzEngine, rhs: HExpr):
        self.eng = eng
        self.rhs = rhs
        self.forms: dict = {}  # key -> {param|None: RatFunc}
        self.uses: dict = {}  # param -> set(keys)
        self.by_suffix: dict = {}  # (zeta, suffix) -> [keys]
        self.nparams = 0
        self.alive: set = set()
        self._shift_cache: dict = {}

    def run(self):
        eng = self.eng
        keys = set(eng.keys) | set(self.rhs.keys())
        # shifting S[-m,...] emits (-1)^N on suffixes even when alt is off
        for _, zeta, idx in list(keys):
            for s in range(len(idx) + 1):
                keys |= {(False, zeta, idx[s:]), (True, zeta, idx[s:])}
        order = sorted(keys, key=lambda k: (-len(k[2]), term_sort_key(k)))
        for key in order:
            self._process(key)
        var = eng.var
        part = {}
        homs = {p: {} for p in sorted(self.alive)}
        for key, form in self.forms.items():
            for p, c in form.items():
                if p is None:
                    part[key] = c
                else:
                    homs[p][key] = c
        particular = HExpr(part, var)
        basis = [HExpr(h, var) for h in homs.values()]
        basis = [b for b in basis if b]
        return particular, basis

    # contributions of already solved keys to ``key``
    def _incoming(self, key) -> dict:
        alt_t, zeta, idx = key
        eng = self.eng
        acc: dict = {}
        for parent in self.by_suffix.get((zeta, idx), ()):
            form = self.forms.get(parent)
            if not form:
                continue
            alt_k, _, pidx = parent
            for i in range(1, eng.order + 1):
                a = eng.a[i]
                if not a:
                    continue
                pieces = [c2 for alt2, idx2, c2 in _shift_sum_terms(pidx, -i, eng.var) if idx2 == idx and (alt_k ^ alt2) == alt_t]
                if not pieces:
                    continue
                c2 = pieces[0]
                for extra in pieces[1:]:
                    c2 = c2 + extra
                mult = RatFunc(a) * c2
                if alt_k and i % 2:
                    mult = -mult
                for p, c in form.items():
                    v = c.shift(-i) * mult
                    acc[p] = acc[p] + v if p in acc else v
        return {p: c for p, c in acc.items() if c}

    def _process(self, key):
        eng = self.eng
        var = eng.var
        inc = self._incoming(key)
        target = self.rhs.coeff(key)
        # R = rhs_T - incoming, as affine form in parameters
        r_form = {p: -c for p, c in inc.items()}
        if target:
            r_form[None] = r_form[None] + target if None in r_form else target
        r_form = {p: c for p, c in r_form.items() if c}
        has_own = key in eng.keyset
        if not has_own and not r_form:
            return
        common = Poly((1,), var)
        if has_own:
            lown, images = eng._own_images(key[0])
            common = lown
        for c in r_form.values():
            common = poly_lcm(common, c.den)
        rows: dict = {}

        def put(col, poly, sign=1):
            for e, v in enumerate(poly.coeffs):
                if v:
                    rows.setdefault(e, {})
                    rows[e][col] = rows[e].get(col, 0) + sign * v

        consts: dict = {}
        if has_own:
            mult = common.exquo(lown)
            for d, img in enumerate(images):
                put(("u", d), img * mult if mult.degree > 0 or mult.lc != 1 else img)
        for p, c in r_form.items():
            poly = c.num * common.exquo(c.den)
            if p is None:
                for e, v in enumerate(poly.coeffs):
                    if v:
                        consts[e] = v
            else:
                put(("p", p), poly, -1)
        sys = IncrementalRREF(pivot_key=lambda col: (1, col[1]) if col[0] == "u" else (0, col[1]))
        for e in sorted(set(rows) | set(consts)):
            row = {c: v for c, v in rows.get(e, {}).items() if v}
            try:
                sys.add(row, consts.get(e, Fraction(0)), tag=key)
            except Inconsistent:
                raise _KeyFailure(key) from None
        # constraints on existing parameters
        for col in sorted((c for c in sys.rows if c[0] == "p"), key=lambda c: -c[1]):
            const, lin = sys.expression(col)
            self._substitute(col[1], const, {c[1]: v for c, v in lin.items()})
        if not has_own:
            return
        new_params = {}
        for d in range(eng.nu):
            col = ("u", d)
            if not sys.is_pivot(col):
                new_params[col] = self._new_param()
        num_forms: dict = {}
        for d in range(eng.nu):
            col = ("u", d)
            if col in new_params:
                num_forms.setdefault(new_params[col], {})[d] = Fraction(1)
                continue
            const, lin = sys.expression(col)
            if const:
                num_forms.setdefault(None, {})[d] = const
            for c, v in lin.items():
                p = new_params[c] if c[0] == "u" else c[1]
                if p not in self.alive:
                    # pinned by a constraint found in this very key
                    raise AssertionError("parameter eliminated while still referenced")
                num_forms.setdefault(p, {})
                num_forms[p][d] = num_forms[p].get(d, 0) + v
        form = {}
        for p, coeffs in num_forms.items():
            poly = Poly([coeffs.get(d, 0) for d in range(eng.nu)], var)
            if poly:
                form[p] = RatFunc(poly, eng.D)
        if form:
            self.forms[key] = form
            for p in form:
                if p is not None:
                    self.uses.setdefault(p, set()).add(key)
            alt, zeta, idx = key
            for s in range(1, len(idx) + 1):
                self.by_suffix.setdefault((zeta, idx[s:]), []).append(key)

    def _new_param(self) -> int:
        p = self.nparams
        self.nparams += 1
        self.alive.add(p)
        return p

    def _substitute(self, p: int, const, lin: dict):
        """Replace parameter p by const + sum lin[q] * q everywhere."""
        self.alive.discard(p)
        for key in self.uses.pop(p, ()):
            form = self.forms[key]
            c = form.pop(p, None)
            if c is None:
                continue
            if const:
                v = c * const
                form[None] = form[None] + v if None in form else v
                if not form[None]:
                    del form[None]
            for q, w in lin.items():
                v = c * w
                form[q] = form[q] + v if q in form else v
                if not form[q]:
                    del form[q]
                    self.uses.get(q, set()).discard(key)
                else:
                    self.uses.setdefault(q, set()).add(key)
            if not form:
                del self.forms[key]


class _KeyFailure(Exception):
    def __init__(self, key):
        super().__init__(key)
        self.key = key


def _diagnose(coeffs, cfg, var, rhs, key) -> list:
    """Keys whose addition to the basis would resolve the failing key."""
    alt_t, zeta, idx = key
    found = []
    for w in range(1, 3):
        for first in (w, -w):
            for a in (False, True):
                cand = (a, zeta, (first,) + idx)
                try:
                    AnsatzEngine(coeffs, cfg, var, extra_keys=[cand]).solve(rhs)
                except _KeyFailure:
                    continue
                found.append(cand)
        if found:
            break
    return found


def ansatz_general(rec: Recurrence, cfg: AnsatzConfig, rhs: HExpr | None = None) -> SolutionSet:
    """General solution inside the basis of a recurrence over Q."""
    rhs = rec.rhs if rhs is None else rhs
    eng = AnsatzEngine(rec.coeffs, cfg, rec.var)
    try:
        part, basis = eng.solve(rhs)
    except _KeyFailure as exc:
        missing = _diagnose(rec.coeffs, cfg, rec.var, rhs, exc.key)
        names = [key_text(k, rec.var) for k in missing]
        msg = f"no solution in the basis: coefficient of {key_text(exc.key, rec.var)} cannot be matched"
        if names:
            msg += "; unmatched key " + ", ".join(names) + " (not in the basis)"
        raise NoSolution(msg, keys=missing or [exc.key]) from None
    return SolutionSet(particular=part, homogeneous=[_monic(b) for b in basis])


def _monic(e: HExpr) -> HExpr:
    """Scale so that the first term has a monic numerator."""
    for _, c in e.items():
        lc = c.num.lc
        if lc and lc != 1 and not isinstance(lc, RatFunc):
            return e.scale(RatFunc.const(1 / lc, e.var))
        return e
    return e


# -- eps expansions -----------------------------------------------------------


def _eps_expand_const(c, order: int) -> dict:
    """Laurent coefficients of an element of Q(eps) up to eps^order."""
    if not isinstance(c, RatFunc):
        return {0: Fraction(c)} if c else {}
    num = LaurentSeries.from_dict(dict(enumerate(c.num.coeffs)), order + 64)
    den = LaurentSeries.from_dict(dict(enumerate(c.den.coeffs)), order + 64)
    s = num / den
    return {e: v for e, v in s.terms() if e <= order}


def eps_series(f: RatFunc, order: int) -> dict:
    """f(N, eps) as {e: RatFunc in N} for exponents up to ``order``."""
    var = f.var

    def split(p: Poly) -> dict:
        out: dict = {}
        for dgr, c in enumerate(p.coeffs):
            for e, v in _eps_expand_const(c, order + 64).items():
                out.setdefault(e, [Fraction(0)] * (len(p.coeffs)))
                out[e][dgr] = v
        return {e: RatFunc(Poly(cs, var)) for e, cs in out.items()}

    num = split(f.num)
    den = split(f.den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    span = order - min(num, default=0) + max(0, -min(den)) + 2
    ns = LaurentSeries.from_dict(num, order + span)
    ds = LaurentSeries.from_dict(den, order + span)
    s = ns / ds
    return {e: v for e, v in s.terms() if e <= order}


def _hexpr_eps_series(e: HExpr, order: int) -> dict:
    out: dict = {}
    for key, c in e.items():
        for p, v in eps_series(c, order).items():
            out.setdefault(p, {})[key] = v
    return {p: HExpr(d, e.var) for p, d in out.items()}


def _zeta_eps_series(v: ZetaValue, order: int) -> dict:
    out: dict = {}
    for z, c in v.terms.items():
        for p, w in _eps_expand_const(c, order).items():
            out.setdefault(p, {})[z] = w
    return {p: ZetaValue(d) for p, d in out.items()}


def solve_ansatz(rec: Recurrence, cfg: AnsatzConfig, ics=None):
    """Unique solution inside the basis fixed by the initial conditions.

    Over Q(eps) the result is a LaurentSeries of HExpr coefficients (orders
    up to ``cfg.eps_order``), otherwise an HExpr.
    """
    ics = {n: as_zeta_value(v) for n, v in (ics or {}).items()}
    if rec.field.generator_name == "eps":
        return _solve_eps(rec, cfg, ics)
    if rec.field.generator_name is not None:
        raise ValueError("the ansatz route supports Q and Q(eps) constants")
    general = ansatz_general(rec, cfg)
    return match_initial_conditions(general, ics, rec=rec)


def _solve_eps(rec: Recurrence, cfg: AnsatzConfig, ics: dict):
    order = 2 if cfg.eps_order is None else cfg.eps_order
    rec = rec.cleared()
    var = rec.var
    ops = [eps_series(c, order + 8) for c in rec.coeffs]
    low = min(min(s) for s in ops if s)
    shift = -low
    ops = [{e + shift: v for e, v in s.items()} for s in ops]
    rhs_s = _hexpr_eps_series(rec.rhs, order + shift)
    rhs_s = {e + shift: v for e, v in rhs_s.items()}
    ic_s = {n: _zeta_eps_series(v, order) for n, v in ics.items()}
    leads = [e - 0 for e in rhs_s if rhs_s[e]] + [e for s in ic_s.values() for e in s]
    lead = min(leads) if leads else 0
    zero = RatFunc.const(0, var)

    def op_at(e):
        return [s.get(e, zero) for s in ops]

    l0 = op_at(0)
    if not l0[0]:
        raise ValueError("leading eps-order operator has a vanishing leading coefficient")
    # drop trailing zero coefficients of the eps^0 operator
    while not l0[-1]:
        l0 = l0[:-1]
    rec0 = Recurrence(l0, None, var)
    solved: dict = {}
    for j in range(lead, order + 1):
        rj = rhs_s.get(j, HExpr.zero(var))
        for e in range(1, j - lead + 1):
            prev = solved.get(j - e)
            cs = op_at(e)
            if prev is None or not any(cs):
                continue
            rj = rj - _apply_coeffs(cs, prev)
        general = ansatz_general(rec0, cfg, rj)
        ics_j = {n: s.get(j, ZetaValue()) for n, s in ic_s.items()}
        rec_j = rec0.with_rhs(rj)
        solved[j] = match_initial_conditions(general, ics_j, rec=rec_j)
    return LaurentSeries.from_dict(solved, order)


def verify_eps_solution(rec: Recurrence, series: LaurentSeries, ics=None, rng=range(1, 51)) -> ResidualReport:
    """Exact residual check of a truncated eps-series solution.

    The residual is expanded in eps at every point; every order that the
    truncation determines (up to ``series.order`` plus the leading eps-order
    of the coefficients) must vanish.
    """
    rec = rec.cleared()
    low = min(min(eps_series(c, 0) or {0: 0}) for c in rec.coeffs if c)
    top = series.order + low
    report = ResidualReport(var_name=rec.var)

    def expand(v: ZetaValue) -> dict:
        return _zeta_eps_series(v, top)

    values: dict = {}

    def value(n):
        if n not in values:
            acc: dict = {}
            for e, c in series.terms():
                acc[e] = c.eval_exact(n)
            values[n] = acc
        return values[n]

    for n in rng:
        try:
            if n - rec.order < 0:
                raise ValueError(f"{rec.var}={n} reaches a negative argument")
            total: dict = {e: -v for e, v in expand(rec.rhs.eval_exact(n)).items()}
            for i, a in enumerate(rec.coeffs):
                try:
                    ai = a(Fraction(n))
                except ZeroDivisionError:
                    raise PoleError(a, n) from None
                for ea, ca in _eps_expand_const(ai, top).items():
                    for ev, cv in value(n - i).items():
                        if ea + ev <= top:
                            total[ea + ev] = total.get(ea + ev, ZetaValue()) + cv * ca
        except (PoleError, ValueError) as exc:
            report.failures[n] = f"pole or invalid point: {exc}"
            continue
        bad = {e: v for e, v in total.items() if v}
        report.residuals[n] = ZetaValue() if not bad else bad[min(bad)]
        if bad:
            e = min(bad)
            report.failures[n] = f"nonzero residual {bad[e]} at eps^{e}"
    report.checked = tuple(rng)
    for n, expected in (ics or {}).items():
        want = _zeta_eps_series(as_zeta_value(expected), series.order)
        try:
            got = value(n)
        except (PoleError, ValueError) as exc:
            report.ic_failures[n] = (expected, f"<{exc}>")
            continue
        if any(want.get(e, ZetaValue()) != got.get(e, ZetaValue()) for e in set(want) | set(got)):
            report.ic_failures[n] = (expected, " + ".join(f"({v})*eps^{e}" for e, v in sorted(got.items())))
    return report


def _apply_coeffs(cs, expr: HExpr) -> HExpr:
    out = HExpr.zero(expr.var)
    for i, a in enumerate(cs):
        if a:
            out = out + expr.shift(-i).scale(a)
    return out


def laurent_to_hexpr(series: LaurentSeries, var: str = "N") -> HExpr:
    """Collapse an eps-series of HExpr into one HExpr with eps coefficients."""
    eps = RatFunc.gen("eps")
    out = HExpr.zero(var)
    for e, c in series.terms():
        out = out + (c if e == 0 else c.scale(RatFunc.const(eps ** e, var)))
    return out


__all__ += ["laurent_to_hexpr", "verify_eps_solution"]

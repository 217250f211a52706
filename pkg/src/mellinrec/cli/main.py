"""mellinrec command line: solve, verify, telescope, eval, simplify.

Exit codes: 0 solved / verified, 1 no solution in the searched class (or a
failed check), 2 parse or usage error, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from importlib import resources
from pathlib import Path

from ..arith import integer_roots
from ..harmonic import HExpr, ParseError, PoleError, parse_hexpr
from ..recurrence import ResidualReport, verify_solution
from ..solver import (
    AnsatzConfig,
    InconsistentConditions,
    Layer,
    NestedSumExpr,
    NoSolution,
    Underdetermined,
    ansatz_general,
    delta_check,
    match_initial_conditions,
    solve_ansatz,
    solve_dalembertian,
    solve_hypergeometric,
    solve_rational,
    telescope,
    verify_eps_solution,
)
from ..solver.ansatz import key_text, laurent_to_hexpr
from .recfile import FIELD_PARAMS, UnresolvedSymbol, parse_ics_text, parse_recurrence_file

EXIT_OK, EXIT_NO_SOLUTION, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
MIN_VERIFY_POINTS = 30


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


# -- inputs ------------------------------------------------------------------


def fixtures_dir() -> Path:
    return Path(str(resources.files("mellinrec.cli") / "fixtures"))


def resolve_path(arg: str) -> Path:
    """A path as given, or the bundled fixture of that name."""
    p = Path(arg)
    if p.is_file():
        return p
    bundled = fixtures_dir() / p.name
    if bundled.is_file() and (len(p.parts) == 1 or p.parent.name == "fixtures"):
        return bundled
    raise UsageError(f"no such file: {arg}")


def read_source(arg: str) -> str:
    """Contents of a file (or bundled fixture); anything else is inline text."""
    if arg == "-":
        return sys.stdin.read()
    try:
        return resolve_path(arg).read_text()
    except UsageError:
        if re.search(r"\.(rec|expr|txt)$", arg):
            raise
        return arg


def expression_text(text: str) -> str:
    lines = []
    for line in text.splitlines():
        i = line.find("#")
        lines.append(line if i < 0 else line[:i])
    return "\n".join(lines)


def guess_var(text: str) -> str:
    body = re.sub(r"S\[[^\]]*\]", "", text)
    return "k" if re.search(r"\bk\b", body) and not re.search(r"\bN\b", body) else "N"


def parse_range(text: str) -> range:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise UsageError(f"expected a range a..b, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if b < a:
        raise UsageError(f"empty range {text}")
    return range(a, b + 1)


def parse_zeta(text: str) -> tuple:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        try:
            mono = tuple(sorted(int(x) for x in part.split("*")))
        except ValueError:
            raise UsageError(f"bad zeta list entry {part!r}") from None
        if any(k < 2 for k in mono):
            raise UsageError("zeta arguments must be at least 2")
        out.append(mono)
    return tuple(sorted(set(out), key=lambda z: (len(z), z)))


def load_recurrence(args):
    rf = parse_recurrence_file(read_source(args.file))
    params = FIELD_PARAMS[rf.field]
    extra = {}
    for item in args.define or []:
        if "=" not in item:
            raise UsageError(f"--define expects NAME=FILE, got {item!r}")
        name, path = item.split("=", 1)
        extra[name.strip()] = parse_hexpr(expression_text(read_source(path)), var=rf.var,
                                          defines={**rf.defines, **extra}, params=params)
    rec = rf.recurrence(extra)
    ics = rf.ics
    if getattr(args, "ics", None):
        ics = parse_ics_text(read_source(args.ics), rf.var, params)
    return rf, rec, ics


def build_config(args, rf) -> AnsatzConfig:
    cfg = AnsatzConfig()
    eps_order = rf.eps_order if args.eps_order is None else args.eps_order
    poles = cfg.pole_offsets
    if args.poles:
        r = parse_range(args.poles)
        poles = tuple(r)
    return AnsatzConfig(
        max_weight=cfg.max_weight if args.weight is None else args.weight,
        pole_offsets=poles,
        pole_degree=cfg.pole_degree if args.pole_degree is None else args.pole_degree,
        alt=cfg.alt if args.alt is None else args.alt,
        zeta=cfg.zeta if args.zeta is None else parse_zeta(args.zeta),
        eps_order=eps_order,
    )


# -- verification ------------------------------------------------------------


def _int_poles(polys) -> list[int]:
    out = []
    for p in polys:
        if p.is_rational() and p.degree > 0:
            out += [int(r) for r in integer_roots(p)]
    return out


def verify_start(rec, cand=None) -> int:
    """First point from which every coefficient, the rhs and cand(N-i) are defined."""
    start = rec.order
    bad = _int_poles([c.den for c in rec.coeffs]) + [int(p) for p in rec.rhs.poles()]
    if bad:
        start = max(start, max(bad) + 1)
    if isinstance(cand, HExpr):
        cp = cand.poles()
        if cp:
            start = max(start, max(cp) + rec.order + 1)
    elif isinstance(cand, NestedSumExpr):
        start = max(start, cand.lo + rec.order)
    return start


def default_range(rec, cands) -> range:
    start = max([verify_start(rec, c) for c in cands] or [verify_start(rec)])
    return range(start, start + 50)


def _is_eps_series(x) -> bool:
    return hasattr(x, "order") and hasattr(x, "terms") and not isinstance(x, (HExpr, NestedSumExpr))


def check(rec, cand, ics, rng) -> ResidualReport:
    if _is_eps_series(cand):
        return verify_eps_solution(rec, cand, ics, rng)
    return verify_solution(rec, cand, ics, rng)


def _report_json(rep: ResidualReport) -> dict:
    pts = list(rep.checked)
    return {
        "passed": rep.passed,
        "from": pts[0] if pts else None,
        "to": pts[-1] if pts else None,
        "points": len(pts),
        "first_failure": rep.first_failure,
        "summary": rep.summary(),
    }


def _combine_reports(reps: list) -> ResidualReport:
    out = ResidualReport(var_name=reps[0].var_name)
    out.checked = reps[0].checked
    for r in reps:
        for n, why in r.failures.items():
            out.failures.setdefault(n, why)
        out.ic_failures.update(r.ic_failures)
    return out


# -- solve -------------------------------------------------------------------


def _text(x) -> str:
    if _is_eps_series(x):
        return str(laurent_to_hexpr(x))
    return str(x)


def _run_strategy(args, rec, ics, cfg):
    """(pinned solution or None, SolutionSet or None, extra report fields)."""
    strategy = args.strategy
    if strategy == "ansatz":
        if rec.field.generator_name == "eps":
            if not ics:
                raise Underdetermined("the eps-expanded ansatz needs initial conditions", free=0)
            return solve_ansatz(rec, cfg, ics), None, {}
        if ics:
            return solve_ansatz(rec, cfg, ics), None, {}
        return None, ansatz_general(rec, cfg), {}
    if strategy == "rational":
        general = solve_rational(rec, args.max_degree)
        if general.particular is None and not rec.is_homogeneous():
            raise NoSolution("no rational solution of the inhomogeneous equation")
    elif strategy == "hypergeom":
        certs = solve_hypergeometric(rec)
        if not certs:
            raise NoSolution("no product solution")
        return None, None, {"ratios": certs}
    else:
        general = solve_dalembertian(rec)
        if general.particular is None and not rec.is_homogeneous():
            raise NoSolution("operator does not factor completely; " + "; ".join(general.notes))
    if ics:
        return match_initial_conditions(general, ics, rec=rec), None, {}
    return None, general, {}


def product_solution(rec, r) -> NestedSumExpr:
    """prod_{j=lo}^{k-1} r(j), started past every integer zero and pole."""
    roots = _int_poles([r.num, r.den] + [c.num for c in rec.cleared().coeffs])
    lo = max([0] + [x + 1 for x in roots])
    return NestedSumExpr(Layer(r, HExpr.const(1, rec.var)), (), lo, rec.var)


def cmd_solve(args) -> tuple[int, dict, list]:
    rf, rec, ics = load_recurrence(args)
    cfg = build_config(args, rf)
    config = {"strategy": args.strategy, **cfg.describe(), "max_degree": args.max_degree}
    report = {"command": "solve", "file": args.file, "config": config}
    lines = []
    pinned, general, extra = _run_strategy(args, rec, ics, cfg)
    if "ratios" in extra:
        ratios = [c.ratio for c in extra["ratios"]]
        report["ratios"] = [str(r) for r in ratios]
        prods = [product_solution(rec, r) for r in ratios]
        rng = parse_range(args.range) if args.range else default_range(rec, prods)
        hom = rec.homogeneous()
        rep = _combine_reports([check(hom, p, None, rng) for p in prods])
        lines += ["status: solved", f"product solutions, ratio y({rec.var}+1)/y({rec.var}):"]
        lines += [f"  {r}" for r in report["ratios"]]
    elif pinned is not None:
        rng = parse_range(args.range) if args.range else default_range(rec, [pinned])
        rep = check(rec, pinned, ics, rng)
        report["solution"] = _text(pinned)
        lines += ["status: solved", f"solution: {_text(pinned)}"]
    else:
        cands = [general.particular] if general.particular is not None else []
        rng = parse_range(args.range) if args.range else default_range(rec, cands + general.homogeneous)
        reps = []
        if general.particular is not None:
            reps.append(check(rec, general.particular, None, rng))
        hom = rec.homogeneous()
        reps += [check(hom, b, None, rng) for b in general.homogeneous]
        rep = _combine_reports(reps) if reps else ResidualReport(var_name=rec.var, checked=tuple(rng))
        part = _text(general.particular) if general.particular is not None else "0"
        basis = [_text(b) for b in general.homogeneous]
        report.update(particular=part, homogeneous=basis, free_constants=general.free_constants)
        sol = part
        for c, b in zip(general.free_constants, basis):
            sol += f" + {c}*({b})"
        report["solution"] = sol
        lines += ["status: solved", f"particular: {part}"]
        if basis:
            lines.append("homogeneous basis:")
            lines += [f"  {c}: {b}" for c, b in zip(general.free_constants, basis)]
        lines += [f"note: {n}" for n in general.notes]
    report["verification"] = _report_json(rep)
    if len(rep.checked) < MIN_VERIFY_POINTS and not args.range:
        raise InvariantViolation("verification covered too few points")
    if not rep.passed:
        raise InvariantViolation(f"computed solution fails verification: {rep.summary()}")
    report["status"] = "solved"
    lines.append(f"verification: {rep.summary()}")
    return EXIT_OK, report, lines


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> tuple[int, dict, list]:
    rf, rec, ics = load_recurrence(args)
    params = FIELD_PARAMS[rf.field]
    cand = parse_hexpr(expression_text(read_source(args.solution)), var=rf.var, params=params)
    rng = parse_range(args.range) if args.range else default_range(rec, [cand])
    use_ics = ics if args.ics else None
    rep = verify_solution(rec, cand, use_ics, rng)
    report = {"command": "verify", "file": args.file, "solution": str(cand), "verification": _report_json(rep)}
    if rep.passed:
        report["status"] = "verified"
        return EXIT_OK, report, ["status: verified", rep.summary()]
    report["status"] = "failed"
    n = rep.first_failure
    report["failure"] = {"at": n, "residual": str(rep.residuals.get(n, "")), "reason": rep.failures.get(n) or str(rep.ic_failures.get(n))}
    return EXIT_NO_SOLUTION, report, ["status: failed", rep.summary()]


# -- telescope ---------------------------------------------------------------


def cmd_telescope(args) -> tuple[int, dict, list]:
    text = expression_text(read_source(args.expr))
    var = args.var or guess_var(text)
    f = parse_hexpr(text, var=var)
    report = {"command": "telescope", "summand": str(f), "config": {"class": args.cls, "max_degree": args.max_degree}}
    g = telescope(f, args.cls, max_degree=args.max_degree)
    ks = range(1, 31)
    ok = delta_check(g, f, ks)
    if not ok:
        raise InvariantViolation("certificate fails its difference check")
    report.update(status="solved", certificate=str(g),
                  verification={"passed": True, "from": 1, "to": 30, "points": 30, "first_failure": None,
                                "summary": f"g({var}+1) - g({var}) = f({var}) exactly for {var}=1..30"})
    lines = ["status: solved", f"certificate: {g}", report["verification"]["summary"]]
    return EXIT_OK, report, lines


# -- eval / simplify ---------------------------------------------------------


def _points(args, var) -> list[int]:
    pts = []
    for item in args.at or []:
        m = re.fullmatch(r"\s*(?:(\w+)\s*=)?\s*(-?\d+)\s*", item)
        if not m or (m.group(1) and m.group(1) != var):
            raise UsageError(f"--at expects {var}=value, got {item!r}")
        pts.append(int(m.group(2)))
    if args.range:
        pts += list(parse_range(args.range))
    if not pts:
        raise UsageError("give --at N=v or --range a..b")
    return pts


def cmd_eval(args) -> tuple[int, dict, list]:
    text = expression_text(read_source(args.expr))
    var = args.var or guess_var(text)
    e = parse_hexpr(text, var=var)
    values, lines = [], []
    for n in _points(args, var):
        try:
            v = e.eval_exact(n)
        except PoleError as exc:
            raise UsageError(f"pole at {var}={n}: coefficient {exc.coeff} is singular there") from None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        values.append({"at": n, "value": str(v)})
        lines.append(f"{var}={n}: {v}")
    return EXIT_OK, {"command": "eval", "status": "solved", "expression": str(e), "values": values}, lines


def cmd_simplify(args) -> tuple[int, dict, list]:
    text = expression_text(read_source(args.expr))
    var = args.var or guess_var(text)
    e = parse_hexpr(text, var=var)
    return EXIT_OK, {"command": "simplify", "status": "solved", "expression": str(e)}, [str(e)]


# -- driver ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mellinrec", description="Solve linear difference equations in harmonic sums.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", nargs="?", const="-", metavar="FILE",
                        help="write the JSON report to FILE (default: standard output, replacing the text)")

    def rec_inputs(sp):
        sp.add_argument("file", help="recurrence file (or the name of a bundled fixture)")
        sp.add_argument("--ics", metavar="FILE", help="initial conditions, one 'n: value' per line")
        sp.add_argument("--define", action="append", metavar="NAME=FILE",
                        help="expression for a named term of the rhs, e.g. R1=r1.expr")

    s = sub.add_parser("solve", help="solve a recurrence file")
    rec_inputs(s)
    s.add_argument("--strategy", choices=["ansatz", "rational", "hypergeom", "dalembert"], default="ansatz")
    s.add_argument("--weight", type=int)
    s.add_argument("--poles", metavar="a..b")
    s.add_argument("--pole-degree", type=int)
    s.add_argument("--alt", action=argparse.BooleanOptionalAction, default=None)
    s.add_argument("--zeta", metavar="LIST", help="zeta-values of the basis, e.g. 3,5 (products as 3*5)")
    s.add_argument("--eps-order", type=int)
    s.add_argument("--max-degree", type=int)
    s.add_argument("--range", metavar="a..b", help="verification range")
    common(s)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a candidate solution exactly")
    rec_inputs(v)
    v.add_argument("solution", help="expression file with the candidate")
    v.add_argument("--range", metavar="a..b")
    common(v)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("telescope", help="find g with g(k+1) - g(k) = f(k)")
    t.add_argument("expr", help="expression file or inline expression")
    t.add_argument("--class", dest="cls", choices=["rational", "harmonic"], default="rational")
    t.add_argument("--max-degree", type=int)
    t.add_argument("--var")
    common(t)
    t.set_defaults(func=cmd_telescope)

    e = sub.add_parser("eval", help="exact values of an expression")
    e.add_argument("expr")
    e.add_argument("--at", action="append", metavar="N=v")
    e.add_argument("--range", metavar="a..b")
    e.add_argument("--var")
    common(e)
    e.set_defaults(func=cmd_eval)

    m = sub.add_parser("simplify", help="canonical form of an expression")
    m.add_argument("expr")
    m.add_argument("--var")
    common(m)
    m.set_defaults(func=cmd_simplify)
    return p


def _glue_negative_ranges(argv: list) -> list:
    """--poles -3..1 would look like an option to argparse; make it --poles=-3..1."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in ("--poles", "--range") and i + 1 < len(argv) and re.fullmatch(r"-\d+\.\..*", argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def parse_args(argv=None) -> argparse.Namespace:
    argv = sys.argv[1:] if argv is None else list(argv)
    return build_parser().parse_args(_glue_negative_ranges(argv))


def run(argv=None) -> tuple[int, dict, list]:
    """(exit code, JSON report, text lines) without printing."""
    return execute(parse_args(argv))


def execute(args: argparse.Namespace) -> tuple[int, dict, list]:
    t0 = time.perf_counter()
    try:
        code, report, lines = args.func(args)
    except ParseError as exc:
        code, lines = EXIT_USAGE, [f"error: {exc}"]
        report = {"status": "error", "error": {"message": exc.msg, "line": exc.line, "col": exc.col,
                                               "unresolved": exc.unresolved}}
    except (UsageError, UnresolvedSymbol, FileNotFoundError) as exc:
        code, lines = EXIT_USAGE, [f"error: {exc}"]
        report = {"status": "error", "error": {"message": str(exc)}}
        if isinstance(exc, UnresolvedSymbol):
            report["error"]["unresolved"] = list(exc.names)
    except NoSolution as exc:
        code = EXIT_NO_SOLUTION
        lines = ["status: no-solution-in-class", f"diagnosis: {exc}"]
        report = {"status": "no-solution-in-class", "diagnosis": str(exc),
                  "unmatched_keys": [key_text(k) if isinstance(k, tuple) else str(k) for k in exc.keys]}
        if exc.hint:
            report["hint"] = exc.hint
            lines.append(f"hint: {exc.hint}")
    except Underdetermined as exc:
        code, lines = EXIT_NO_SOLUTION, ["status: underdetermined", f"diagnosis: {exc}"]
        report = {"status": "underdetermined", "diagnosis": str(exc), "free": exc.free}
    except InconsistentConditions as exc:
        code, lines = EXIT_NO_SOLUTION, ["status: no-solution-in-class", f"diagnosis: {exc}"]
        report = {"status": "no-solution-in-class", "diagnosis": str(exc)}
    except InvariantViolation as exc:
        code, lines = EXIT_INTERNAL, [f"internal error: {exc}"]
        report = {"status": "error", "error": {"message": str(exc)}}
    except ValueError as exc:
        code, lines = EXIT_USAGE, [f"error: {exc}"]
        report = {"status": "error", "error": {"message": str(exc)}}
    except Exception as exc:  # noqa: BLE001 - anything else is our bug
        code, lines = EXIT_INTERNAL, [f"internal error: {type(exc).__name__}: {exc}"]
        report = {"status": "error", "error": {"message": f"{type(exc).__name__}: {exc}"}}
    report.setdefault("command", args.command)
    report["exit_code"] = code
    report["timing_seconds"] = round(time.perf_counter() - t0, 3)
    return code, report, lines


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2 already
        return int(exc.code or 0)
    code, report, lines = execute(args)
    dest = args.json
    if dest == "-":
        print(json.dumps(report, indent=2))
    else:
        stream = sys.stdout if code in (EXIT_OK, EXIT_NO_SOLUTION) else sys.stderr
        for line in lines:
            print(line, file=stream)
        if dest:
            Path(dest).write_text(json.dumps(report, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

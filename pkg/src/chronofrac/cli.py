"""Command-line front end.

    chronofrac deriv --scale Z --fn "t^2" --order 1/2 --at 4
    chronofrac integ --scale Z --fn t --order 1/2 --from 1 --to 10
    chronofrac chain --scale Z --fn "t^2" --g "2*t" --order 1/2 --at 4
    chronofrac laws --seed 1 --n 200
    chronofrac info --scale cantor:3 --at 1/3

Functions come either from an expression (``--fn``) or from a two-column
CSV signal (``--csv``); a CSV also fixes the time scale to its timestamps.
Output is JSON (17 significant digits) or CSV (shortest round-trip floats).

Exit codes: 0 success, 1 a law check failed, 2 evaluation or data error,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Sequence

from . import expr as ex
from .errors import (
    ChronofracError,
    DuplicateTimestampConflict,
    ExpressionSyntaxError,
    ParseError,
)
from .fracderiv import chain_rule_witness, frac_derivative, higher_frac_derivative
from .functions import ExprFn, FnOnScale, TableFn
from .integral import cauchy_frac_integral
from .laws import LAW_IDS, run_randomized_suite
from .limits import DerivResult, LimitOptions
from .serialize import dumps, exact_str, fmt17, fmt_short
from .timescale import FiniteUnion, TimeScale, parse_number, parse_scale

EXIT_OK = 0
EXIT_LAWS_FAILED = 1
EXIT_EVAL = 2
EXIT_USAGE = 64

EVAL_ERRORS = (ChronofracError, ArithmeticError, ValueError, OSError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ ingestion


def ingest_csv(path: str) -> tuple[FiniteUnion, TableFn]:
    """Read ``t,value`` rows into a scale of isolated points and a table.

    A first row that does not parse as numbers is taken as a header.  Equal
    duplicates collapse; conflicting ones raise DuplicateTimestampConflict.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    table: dict[Fraction, float] = {}
    for lineno, row in enumerate(rows, start=1):
        cells = [c.strip() for c in row]
        if not any(cells) or cells[0].startswith("#"):
            continue
        if len(cells) != 2:
            raise ParseError(f"expected 2 columns, got {len(cells)}", lineno)
        try:
            t = parse_number(cells[0])
            v = float(parse_number(cells[1]))
        except ParseError:
            if lineno == 1 and not table:
                continue
            raise ParseError(f"not a number pair: {row!r}", lineno) from None
        if t in table and table[t] != v:
            raise DuplicateTimestampConflict(t)
        table[t] = v
    if not table:
        raise ParseError(f"no data rows in {path}")
    fn = TableFn(table)
    return fn.scale(), fn


# ------------------------------------------------------------------- helpers


def _number(text: str) -> Fraction:
    try:
        return parse_number(text)
    except ParseError as exc:
        raise UsageError(str(exc)) from None


def _order(text: str, upper: Fraction | None = None) -> Fraction:
    q = _number(text)
    if q < 0 or (upper is not None and q > upper):
        bound = f"[0, {upper}]" if upper is not None else ">= 0"
        raise UsageError(f"order {text} must lie in {bound}")
    return q


def _window(text: str | None) -> tuple[Fraction, Fraction] | None:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"window must be 'a,b', got {text!r}")
    lo, hi = (_number(p) for p in parts)
    if hi < lo:
        raise UsageError(f"empty window {text!r}")
    return lo, hi


def _expr_fn(text: str) -> ExprFn:
    try:
        return ExprFn(ex.parse(text))
    except ExpressionSyntaxError as exc:
        raise UsageError(f"bad expression {text!r}: {exc}") from None


def _source(args) -> tuple[TimeScale, FnOnScale]:
    """Resolve exactly one function source and the scale that goes with it."""
    if (args.fn is None) == (args.csv is None):
        raise UsageError("give exactly one of --fn and --csv")
    if args.csv is not None:
        if args.scale is not None:
            raise UsageError("--scale cannot be combined with --csv (the CSV defines the scale)")
        return ingest_csv(args.csv)
    return _scale(args.scale), _expr_fn(args.fn)


def _scale(text: str | None) -> TimeScale:
    if text is None:
        raise UsageError("--scale is required")
    try:
        return parse_scale(text)
    except ParseError as exc:
        raise UsageError(str(exc)) from None


def grid_points(T: TimeScale, window: tuple[Fraction, Fraction], n: int) -> list:
    """Every scattered point of ``T`` in the window plus ``n`` equispaced
    points on each dense segment, in increasing order."""
    out = set()
    for a, b in T.segments(*window):
        if a == b:
            out.add(a)
            continue
        if n == 1:
            out.add(a)
        else:
            out.update(a + (b - a) * Fraction(k, n - 1) for k in range(n))
        for end in (a, b):
            if T.sigma(end) > end or T.rho(end) < end:
                out.add(end)
    return sorted(out)


def _points(args, T: TimeScale) -> list:
    if (args.at is None) == (args.grid is None):
        raise UsageError("give exactly one of --at and --grid")
    if args.at is not None:
        return [_number(args.at)]
    if args.grid < 1:
        raise UsageError("--grid needs a positive count")
    window = _window(args.window)
    if window is None:
        if T.min is None or T.max is None:
            raise UsageError(f"scale {T} is unbounded; pass --window a,b")
        window = (T.min, T.max)
    # points without a derivative (a left-scattered maximum) are not grid points
    return [p for p in grid_points(T, window, args.grid) if T.in_kappa(p)]


def _options(args) -> LimitOptions:
    opts = LimitOptions.from_env()
    if getattr(args, "tol", None) is not None:
        if args.tol <= 0:
            raise UsageError("--tol must be positive")
        opts = opts.with_tol(args.tol)
    return opts


# -------------------------------------------------------------------- output


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_short(v)
    if isinstance(v, Fraction):
        return exact_str(v)
    return "" if v is None else str(v)


def render(command: str, columns: Sequence[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return dumps({"command": command, "rows": [{c: r.get(c) for c in columns} for r in rows]}) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _error_row(t, exc: BaseException) -> dict:
    return {"t": float(t), "value": float("nan"), "method": "error", "error_estimate": float("nan"),
            "error": f"{type(exc).__name__}: {exc}"}


# ------------------------------------------------------------------ commands


DERIV_COLUMNS = ("t", "value", "method", "error_estimate", "error")


def cmd_deriv(args) -> tuple[int, str]:
    T, f = _source(args)
    order = _order(args.order)
    points = _points(args, T)
    opts = _options(args)
    rows, status = [], EXIT_OK
    for t in points:
        try:
            if 0 < order <= 1:
                res: DerivResult = frac_derivative(f, T, t, order, opts)
            else:
                res = higher_frac_derivative(f, T, t, order, opts)
            rows.append({"t": float(T.snap(t)), "value": res.value, "method": res.method.value,
                         "error_estimate": res.error_estimate, "error": None})
        except EVAL_ERRORS as exc:
            rows.append(_error_row(t, exc))
            status = EXIT_EVAL
    return status, render("deriv", DERIV_COLUMNS, rows, args.format)


def cmd_integ(args) -> tuple[int, str]:
    if args.start is None or args.stop is None:
        raise UsageError("integ needs --from and --to")
    T, f = _source(args)
    beta = _order(args.order, Fraction(1))
    a, b = _number(args.start), _number(args.stop)
    value = cauchy_frac_integral(f, T, a, b, beta, _window(args.window), None, _options(args))
    row = {"from": float(a), "to": float(b), "order": exact_str(beta), "value": value}
    return EXIT_OK, render("integ", ("from", "to", "order", "value"), [row], args.format)


def cmd_chain(args) -> tuple[int, str]:
    if args.fn is None or args.g is None:
        raise UsageError("chain needs --fn (outer) and --g (inner)")
    T = _scale(args.scale)
    f, g = _expr_fn(args.fn), _expr_fn(args.g)
    alpha = _order(args.order, Fraction(1))
    if args.at is None:
        raise UsageError("chain needs --at")
    t = _number(args.at)
    c = chain_rule_witness(f, g, T, t, alpha, _options(args))
    row = {"t": float(T.snap(t)), "order": exact_str(alpha), "c": c}
    return EXIT_OK, render("chain", ("t", "order", "c"), [row], args.format)


LAW_COLUMNS = ("law_id", "cases_run", "max_residual", "threshold", "errors", "passed")


def _faulty(f, T, t, alpha, options):
    res = frac_derivative(f, T, t, alpha, options)
    return replace(res, value=res.value * (1 + 1e-3) + 1e-3)


def cmd_laws(args) -> tuple[int, str]:
    if args.n < 1:
        raise UsageError("--n must be a positive number of cases")
    laws = tuple(args.law) if args.law else LAW_IDS
    for law in laws:
        if law not in LAW_IDS:
            raise UsageError(f"unknown law {law!r}; choose from {', '.join(LAW_IDS)}")
    kwargs = {"derivative": _faulty} if args.inject_fault else {}
    reports = run_randomized_suite(args.seed, args.n, laws=laws, options=_options(args), **kwargs)
    rows = [r.as_dict() for r in reports]
    columns = LAW_COLUMNS + (("worst_case",) if args.format == "json" else ())
    status = EXIT_OK if all(r.passed for r in reports) else EXIT_LAWS_FAILED
    return status, render("laws", columns, rows, args.format)


INFO_COLUMNS = (
    "t", "sigma", "rho", "mu", "kind", "right_scattered", "left_scattered", "in_kappa",
    "sigma_exact", "mu_exact",
)


def _kind(cls) -> str:
    if cls.isolated:
        return "isolated"
    if cls.right_scattered:
        return "right_scattered"
    if cls.left_scattered:
        return "left_scattered"
    return "dense"


def cmd_info(args) -> tuple[int, str]:
    T = _scale(args.scale)
    if args.at is None:
        raise UsageError("info needs --at")
    t = _number(args.at)
    if not T.contains(t):
        # PointNotInScale is an evaluation error, reported with exit 2
        T.snap(t)
    p = T.snap(t)
    cls = T.classify(p)
    sig, mu = T.sigma(p), T.graininess(p)
    row = {
        "t": float(p), "sigma": float(sig), "rho": float(T.rho(p)), "mu": float(mu),
        "kind": _kind(cls), "right_scattered": cls.right_scattered,
        "left_scattered": cls.left_scattered, "in_kappa": T.in_kappa(p),
        "sigma_exact": exact_str(sig), "mu_exact": exact_str(mu),
    }
    return EXIT_OK, render("info", INFO_COLUMNS, [row], args.format)


COMMANDS = {"deriv": cmd_deriv, "integ": cmd_integ, "chain": cmd_chain, "laws": cmd_laws, "info": cmd_info}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chronofrac", description="Fractional calculus on time scales.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, source=True):
        p.add_argument("--scale", help="time scale: R, R[a,b], Z, hZ:h, hZ:h@a, cantor:d, union:{...}")
        if source:
            p.add_argument("--fn", help="expression in t, e.g. 't^2 - 3*t'")
            p.add_argument("--csv", help="two-column t,value file (defines the scale)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--tol", type=float, help="limit tolerance (default 1e-9 or $CHRONOFRAC_TOL)")

    p = sub.add_parser("deriv", help="fractional derivative at a point or over a grid")
    common(p)
    p.add_argument("--order", required=True, help="order beta >= 0, e.g. 1/2 or 1.3")
    p.add_argument("--at", help="evaluation point")
    p.add_argument("--grid", type=int, help="evaluate on all scattered points plus N per dense segment")
    p.add_argument("--window", help="a,b (required with --grid on unbounded scales)")

    p = sub.add_parser("integ", help="Cauchy fractional integral")
    common(p)
    p.add_argument("--order", required=True, help="order beta in [0, 1]")
    p.add_argument("--from", dest="start")
    p.add_argument("--to", dest="stop")
    p.add_argument("--window", help="a,b window for the antiderivative")

    p = sub.add_parser("chain", help="chain-rule witness c in [t, sigma(t)]")
    common(p, source=False)
    p.add_argument("--fn", help="outer function f")
    p.add_argument("--g", "--gfn", dest="g", help="inner function g")
    p.add_argument("--order", required=True, help="order alpha in ]0, 1[")
    p.add_argument("--at")

    p = sub.add_parser("laws", help="randomized residual checks of the calculus rules")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--n", type=int, default=200, help="cases per law")
    p.add_argument("--law", action="append", help="restrict to one law (repeatable)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--tol", type=float)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("info", help="jump operators and point class")
    common(p, source=False)
    p.add_argument("--at")
    return parser


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status, text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"chronofrac {args.command}: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except EVAL_ERRORS as exc:
        print(f"chronofrac {args.command}: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_EVAL
    stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

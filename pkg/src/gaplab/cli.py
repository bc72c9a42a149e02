"""Command-line interface: ``gaplab <command> [options]``.

Exit codes: 0 pass, 1 reproduction failure, 2 input or domain error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, arith, explicit, threshold, zeros
from .bounds import DEFAULT_PARAMS
from .errors import GaplabError, NoSolution, NoThreshold
from .report import FAIL, MPOWER_TABLE, L_TABLE, SENSITIVITY, RunReport, reports_to_csv, suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


# ------------------------------------------------------------ parsing

@dataclass(frozen=True)
class XArg:
    """A value of x given either directly or as e^y."""

    log: float
    value: Optional[float]  # None when x overflows a double

    @property
    def text(self) -> str:
        return f"e^{self.log:g}" if self.value is None else f"{self.value:g}"


def parse_number(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not a finite number: {s!r}")
    return v


def parse_int(s: str) -> int:
    v = parse_number(s)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    return int(v)


def parse_x(s: str) -> XArg:
    """Accept plain numbers (``1e6``, ``1000000.5``) or ``e^60``."""
    s = s.strip()
    if s.startswith("e^"):
        y = parse_number(s[2:])
        return XArg(y, math.exp(y) if y < 709 else None)
    v = parse_number(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("x must be positive")
    return XArg(math.log(v), v)


def _zeros_path(arg: Optional[str]) -> Optional[str]:
    return arg or os.environ.get(zeros.ZEROS_ENV) or None


def _timestamp(args) -> None:
    if not args.no_timestamp:
        print(f"# gaplab {__version__} run at {_dt.datetime.now().isoformat(timespec='seconds')}")


def _write_csv(args, header: Sequence[str], rows: Sequence[Sequence], plot: tuple[int, int] | None = None) -> None:
    if not args.csv:
        return
    with open(args.csv, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    if args.gnuplot_stub and plot:
        a, b = plot
        Path(args.gnuplot_stub).write_text(
            "set datafile separator ','\n"
            "set key autotitle columnhead\n"
            f"plot '{args.csv}' using {a}:{b} with linespoints\n"
        )


def _num(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


# ------------------------------------------------------------ commands

def _chebyshev_cmd(args, name: str) -> int:
    x = args.x
    if x.value is None or x.value > arith.SIEVE_CEILING:
        raise arith.CeilingExceeded(f"x={x.text} above sieve ceiling {arith.SIEVE_CEILING:.0e}")
    v = arith.psi(x.value) if name == "psi" else arith.theta(x.value)
    print(f"{v:.12g}")
    _write_csv(args, ["x", name], [[_num(x.value), _num(v)]])
    return EXIT_OK


def cmd_psi(args) -> int:
    return _chebyshev_cmd(args, "psi")


def cmd_theta(args) -> int:
    return _chebyshev_cmd(args, "theta")


def cmd_ef_verify(args) -> int:
    path = _zeros_path(args.zeros)
    if path is None:
        print(f"error: no zero table (pass --zeros or set {zeros.ZEROS_ENV})", file=sys.stderr)
        return EXIT_INPUT
    table = zeros.load_zeros_file(path)
    x = args.x.value
    if x is None or x > arith.SIEVE_CEILING:
        raise arith.CeilingExceeded(f"x={args.x.text} above sieve ceiling")
    if not explicit.is_half_odd(x):
        if args.half_odd_adjust:
            print(f"warning: x={x:.12g} is not half an odd integer; using {math.floor(x) + 0.5:.12g}", file=sys.stderr)
            x = math.floor(x) + 0.5
        else:
            print(f"warning: x={x:.12g} is not half an odd integer; the error bound assumes it is "
                  "(use --half-odd-adjust)", file=sys.stderr)
    T = explicit.usable_height(table) if args.T == "max" else parse_number(args.T)
    res = explicit.truncated_psi(x, T, table, precise_phase=args.precise_phase)
    exact = arith.psi(x)
    dev = abs(res.psi_estimate - exact)
    report = RunReport.check("ef-verify", dev < res.error_bound, {"x": x, "T": T, "zeros": len(table)},
                             psi=exact, estimate=res.psi_estimate, deviation=dev, bound=res.error_bound,
                             ratio=dev / res.error_bound)
    _timestamp(args)
    print(f"x          {x:.12g}")
    print(f"T          {T:.12g}  ({res.n_zeros} zeros)")
    print(f"psi(x)     {exact:.12g}")
    print(f"estimate   {res.psi_estimate:.12g}")
    print(f"|diff|     {dev:.6g}")
    print(f"bound      {res.error_bound:.6g}")
    print(f"ratio      {dev / res.error_bound:.6g}")
    print(f"verdict    {report.verdict}")
    _write_csv(args, ["x", "T", "n_zeros", "psi", "estimate", "deviation", "bound", "ratio", "verdict"],
               [[_num(x), _num(T), res.n_zeros, _num(exact), _num(res.psi_estimate), _num(dev),
                 _num(res.error_bound), _num(dev / res.error_bound), report.verdict]])
    return EXIT_FAIL if report.verdict == FAIL else EXIT_OK


def cmd_reproduce(args) -> int:
    path = _zeros_path(args.zeros)
    table = zeros.load_zeros_file(path) if path else None
    _timestamp(args)
    reports = []
    for r in suite(table, quick=args.quick):
        print(r.line(), flush=True)
        reports.append(r)
    n_fail = sum(r.verdict == FAIL for r in reports)
    print(f"{len(reports)} rows, {n_fail} failed")
    if args.csv:
        Path(args.csv).write_text(reports_to_csv(reports))
    return EXIT_FAIL if n_fail else EXIT_OK


def cmd_scan(args) -> int:
    certs = arith.cube_gap_scan(args.n_from, args.n_to, args.m)
    header = ["n", "interval_lo", "interval_hi", "witness", "status"]
    rows = [[c.n, c.n**args.m, (c.n + 1) ** args.m, "" if c.witness is None else c.witness, c.status]
            for c in certs]
    if args.csv:
        _write_csv(args, header, rows, plot=(1, 4))
        print(f"{len(rows)} intervals, {sum(c.found for c in certs)} with a prime")
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return EXIT_OK if all(c.found for c in certs) else EXIT_FAIL


def _params_from(args):
    changes = {k: v for k, v in (("A", args.A), ("c_ford", args.c_ford), ("L", args.L)) if v is not None}
    return DEFAULT_PARAMS.with_(**changes), changes


def cmd_tables(args) -> int:
    params, changes = _params_from(args)
    _timestamp(args)
    try:
        if args.which == "L":
            header = ["L", "published_loglog_n0", "loglog_n0", "k", "y0"]
            rows = [[r.params.L, L_TABLE.get(int(r.params.L), ("",))[0], r.loglog_n0, r.k_best, r.y0]
                    for r in threshold.l_sensitivity_table(params, args.L_values)]
            plot = (1, 3)
        elif args.which == "mpower":
            header = ["m", "published_k", "k", "published_loglog_n0", "loglog_n0", "y0"]
            rows = []
            for m, k, sol in threshold.mpower_table(args.m_values, params):
                pk, pll = MPOWER_TABLE.get(m, ("", ""))
                rows.append([m, pk, k, pll, sol.loglog_n0, sol.y0])
            plot = (1, 5)
        else:
            header = ["label", "published_loglog_n0", "loglog_n0", "k", "y0"]
            if changes:
                cases = [(",".join(f"{k}={v:g}" for k, v in changes.items()), params, "")]
            else:
                cases = [(label, DEFAULT_PARAMS.with_(**ch), exp[0]) for label, ch, exp in SENSITIVITY]
            rows = []
            for label, p, pub in cases:
                r = threshold.sensitivity_row(label, p)
                rows.append([label, pub, r.loglog_n0, r.k_best, r.y0])
            plot = None
    except (NoThreshold, NoSolution) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    widths = [max(len(h), 12) for h in header]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("  ".join((f"{v:.6g}" if isinstance(v, float) else str(v)).ljust(w) for v, w in zip(row, widths)))
    _write_csv(args, header, [[_num(v) for v in row] for row in rows], plot=plot)
    return EXIT_OK


# ------------------------------------------------------------ wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", metavar="PATH", help="also write results as CSV")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp line")
    common.add_argument("--gnuplot-stub", metavar="PATH", help="write a gnuplot script that plots the CSV")

    ap = argparse.ArgumentParser(prog="gaplab", description="Prime gaps between powers: numerics and reproduction.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (("psi", cmd_psi, "Chebyshev psi(x)"), ("theta", cmd_theta, "Chebyshev theta(x)")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--x", type=parse_x, required=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("ef-verify", parents=[common], help="truncated explicit formula vs sieve psi(x)")
    p.add_argument("--x", type=parse_x, required=True)
    p.add_argument("--T", required=True, help="truncation height, or 'max' for the table's usable height")
    p.add_argument("--zeros", help=f"zero table (default: ${zeros.ZEROS_ENV})")
    p.add_argument("--half-odd-adjust", action="store_true", help="move x to floor(x) + 1/2")
    p.add_argument("--precise-phase", action="store_true", help="reduce gamma log x in extended precision")
    p.set_defaults(func=cmd_ef_verify)

    p = sub.add_parser("reproduce", parents=[common], help="run the full reproduction suite")
    p.add_argument("--zeros", help=f"zero table (default: ${zeros.ZEROS_ENV}); rows needing it are n/a without")
    p.add_argument("--quick", action="store_true", help="skip sieve work above 1e7")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("scan", parents=[common], help="look for a prime in every (n^m, (n+1)^m)")
    p.add_argument("--m", type=parse_int, default=3)
    p.add_argument("--from", dest="n_from", type=parse_int, required=True)
    p.add_argument("--to", dest="n_to", type=parse_int, required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("tables", parents=[common], help="regenerate the threshold tables")
    p.add_argument("--which", choices=("L", "mpower", "sensitivity"), required=True)
    p.add_argument("--A", type=parse_number)
    p.add_argument("--c-ford", type=parse_number)
    p.add_argument("--L", type=parse_number, help="log exponent base (sensitivity/mpower)")
    p.add_argument("--L-values", type=parse_number, nargs="+", default=[5, 4, 3, 2])
    p.add_argument("--m-values", type=parse_int, nargs="+", default=list(MPOWER_TABLE))
    p.set_defaults(func=cmd_tables)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GaplabError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

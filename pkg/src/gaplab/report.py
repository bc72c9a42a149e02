"""Run reports and the reproduction suite behind ``gaplab reproduce``."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from . import arith, bounds, explicit, threshold, zeros
from .errors import GaplabError

PASS, FAIL, NA = "pass", "fail", "n/a"

# published values the suite compares against
CUBE_LOGLOG = (33.217, 0.01)
CUBE_K = (0.9359, 0.002)
CUBE_Y0 = 8e14
L_TABLE = {5: (33.217, 0.01), 4: (31.8, 0.1), 3: (29.8, 0.1), 2: (22.19, 0.05)}
SENSITIVITY = [
    ("c_ford=40", {"c_ford": 40.0}, (31.88, 0.05)),
    ("c_ford=20", {"c_ford": 20.0}, (29.6, 0.1)),
    ("A=1e-4", {"A": 1e-4}, (32.7, 0.1)),
]
MPOWER_TABLE = {4: (0.9635, 29.240), 5: (0.9741, 27.820), 6: (0.9796, 27.230),
                7: (0.983, 26.427), 1000: (0.9998, 19.807)}
MPOWER_LOGLOG_TOL = 0.05
MPOWER_K_TOL = 0.003
UNCONDITIONAL_M = (4.971e9, 0.01e9)
BIG_SUM_WINDOW = (2.5, 2.8)
BIG_SUM_ALPHA = 1.194
EF_XS = (1e3 + 0.5, 1e5 + 0.5, 1e6 + 0.5, 1e7 + 0.5)
QUICK_SIEVE_LIMIT = 10**7


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    expectation: Optional[tuple[float, float]] = None
    verdict: str = NA

    @classmethod
    def compare(cls, command: str, value: float, expectation: tuple[float, float],
                inputs: dict | None = None, **outputs) -> "RunReport":
        target, tol = expectation
        ok = math.isfinite(value) and abs(value - target) <= tol
        return cls(command, inputs or {}, {"value": value, **outputs}, expectation, PASS if ok else FAIL)

    @classmethod
    def check(cls, command: str, ok: bool, inputs: dict | None = None, **outputs) -> "RunReport":
        return cls(command, inputs or {}, dict(outputs), None, PASS if ok else FAIL)

    @classmethod
    def skipped(cls, command: str, reason: str) -> "RunReport":
        return cls(command, {}, {"reason": reason}, None, NA)

    def line(self) -> str:
        if self.expectation is not None:
            t, tol = self.expectation
            return f"{self.command}: {_fmt(t)} ± {_fmt(tol)} -> {_fmt(self.outputs['value'])} {self.verdict}"
        shown = ", ".join(f"{k}={_fmt(v)}" for k, v in self.outputs.items())
        return f"{self.command}: {shown} {self.verdict}"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _kv(d: dict) -> str:
    return ";".join(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}" for k, v in d.items())


REPORT_FIELDS = ["command", "inputs", "outputs", "expected", "tolerance", "verdict"]


def reports_to_csv(reports: Iterable[RunReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_FIELDS)
    for r in reports:
        exp = r.expectation or ("", "")
        w.writerow([r.command, _kv(r.inputs), _kv(r.outputs),
                    repr(float(exp[0])) if exp[0] != "" else "",
                    repr(float(exp[1])) if exp[1] != "" else "", r.verdict])
    return buf.getvalue()


# ------------------------------------------------------------ suite rows

def cube_rows() -> list[RunReport]:
    k, sol = threshold.optimize_k(3)
    ratio = sol.y0 / CUBE_Y0
    return [
        RunReport.compare("cube threshold loglog_n0", sol.loglog_n0, CUBE_LOGLOG, {"m": 3}, k=k, y0=sol.y0),
        RunReport.compare("cube threshold k", k, CUBE_K, {"m": 3}),
        RunReport.check("cube threshold y0 within 1.2x of 8e14", 1 / 1.2 <= ratio <= 1.2, {"m": 3},
                        y0=sol.y0, ratio=ratio),
    ]


def l_table_rows() -> list[RunReport]:
    rows = threshold.l_sensitivity_table(L_values=sorted(L_TABLE, reverse=True))
    out = [RunReport.compare(f"L-table {r.label}", r.loglog_n0, L_TABLE[int(r.params.L)],
                             {"L": r.params.L}, k=r.k_best, y0=r.y0) for r in rows]
    for label, changes, exp in SENSITIVITY:
        r = threshold.sensitivity_row(label, bounds.DEFAULT_PARAMS.with_(**changes))
        out.append(RunReport.compare(f"sensitivity {label}", r.loglog_n0, exp, changes, k=r.k_best, y0=r.y0))
    return out


def mpower_rows() -> list[RunReport]:
    out = []
    for m, k, sol in threshold.mpower_table(MPOWER_TABLE):
        k_pub, ll_pub = MPOWER_TABLE[m]
        out.append(RunReport.compare(f"m-power m={m} loglog_n0", sol.loglog_n0, (ll_pub, MPOWER_LOGLOG_TOL),
                                     {"m": m}, k=k, y0=sol.y0))
        out.append(RunReport.compare(f"m-power m={m} k", k, (k_pub, MPOWER_K_TOL), {"m": m}))
    return out


def unconditional_rows() -> list[RunReport]:
    res = threshold.mpower_unconditional()
    return [
        RunReport.compare("unconditional m-power bound", res.m, UNCONDITIONAL_M, {"anchor": res.anchor_loglog}),
        RunReport.compare("unconditional m-power consistency", res.consistency, (1.0, 0.01)),
    ]


def ef_rows(table: zeros.ZeroTable | None, xs=EF_XS) -> list[RunReport]:
    if table is None:
        return [RunReport.skipped("explicit formula", "no zero table")]
    Ts = [1e3, 1e4, explicit.usable_height(table)]
    Ts = [T for T in Ts if T <= table.height]
    psis = dict(zip(xs, (c.psi for c in arith.chebyshev_many(list(xs)))))
    out = []
    for x in xs:
        devs = []
        for T in Ts:
            r = explicit.truncated_psi(x, T, table)
            dev = abs(r.psi_estimate - psis[x])
            devs.append(dev)
            out.append(RunReport.check(f"explicit formula x={x:g} T={T:g}", dev < r.error_bound,
                                       {"x": x, "T": T}, deviation=dev, bound=r.error_bound,
                                       ratio=dev / r.error_bound))
        mono = all(b < a for a, b in zip(devs, devs[1:]))
        out.append(RunReport.check(f"explicit formula x={x:g} deviation decreasing in T", mono, {"x": x},
                                   deviations=" > ".join(f"{d:.4g}" for d in devs)))
    return out


def error_budget_rows() -> list[RunReport]:
    out = []
    for y in (60.0, 80.0, 100.0):
        for T_log in (math.log(51.0), y / 2, y - 1e-6):
            b = explicit.error_budget(y, T_log)
            out.append(RunReport.check(f"error budget x=e^{y:g} log T={T_log:.4g}", b.ratio < 1,
                                       {"x_log": y, "T_log": T_log}, ratio=b.ratio))
    return out


def big_sum_rows() -> list[RunReport]:
    lo, hi = BIG_SUM_WINDOW
    b = explicit.big_sum_bound(BIG_SUM_ALPHA, 60.0, corrected_s4=True)
    v = explicit.big_sum_bound(BIG_SUM_ALPHA, 60.0, corrected_s4=False)
    return [
        RunReport.check("big sum ratio (corrected S4)", lo < b.ratio < hi, {"alpha": BIG_SUM_ALPHA, "x_log": 60.0},
                        ratio=b.ratio),
        RunReport("big sum ratio (printed S4)", {"alpha": BIG_SUM_ALPHA, "x_log": 60.0}, {"ratio": v.ratio}),
    ]


def zero_table_rows(table: zeros.ZeroTable | None, seed: int = 0) -> list[RunReport]:
    if table is None:
        return [RunReport.skipped("zero table checks", "no zero table")]
    out = []
    if table.height >= 100:
        out.append(RunReport.compare("N(100)", float(zeros.count_zeros(table, 100.0)), (29.0, 0.0)))
    rng = np.random.default_rng(seed)
    Ts = np.sort(rng.uniform(15.0, table.height, 200))
    Ts[-1] = table.height
    counts = zeros.count_zeros_many(table, Ts)
    bad = [T for T, n in zip(Ts, counts) if not n < bounds.n_upper(T)]
    out.append(RunReport.check("N(T) < T log T/(2 pi), 200 samples", not bad, failures=len(bad)))
    t, c, ok = zeros.window_count_sweep(table, 250000)
    out.append(RunReport.check(f"zero window count < log t, t in (50, {t[-1]:g}]", bool(ok.all()),
                               checked=len(t), failures=int((~ok).sum())))
    return out


def dusart_rows(quick: bool = False, samples: int = 10_000, seed: int = 0) -> list[RunReport]:
    top = QUICK_SIEVE_LIMIT if quick else 10**8
    xs = np.sort(np.random.default_rng(seed).uniform(121.0, top, samples))
    res = arith.psi_theta_gap_many(list(xs))
    bad = sum(1 for r in res if not (r.lower_ok and r.upper_ok))
    return [RunReport.check(f"psi - theta bounds, {samples} x in [121, {top:.0e}]", bad == 0, failures=bad)]


def cube_scan_rows(quick: bool = False) -> list[RunReport]:
    n_hi = arith.iroot(QUICK_SIEVE_LIMIT, 3) if quick else 10**5
    certs = arith.cube_gap_scan(1, n_hi, 3)
    missing = [c.n for c in certs if not c.found]
    return [RunReport.check(f"prime between n^3 and (n+1)^3, n <= {n_hi}", not missing, {"n_hi": n_hi},
                            failures=len(missing))]


def suite(table: zeros.ZeroTable | None, quick: bool = False) -> Iterator[RunReport]:
    """Every reproduction row, in a fixed order."""
    groups: list[Callable[[], list[RunReport]]] = [
        cube_rows, l_table_rows, mpower_rows, unconditional_rows,
        lambda: ef_rows(table), error_budget_rows, big_sum_rows,
        lambda: zero_table_rows(table), lambda: dusart_rows(quick), lambda: cube_scan_rows(quick),
    ]
    for g in groups:
        try:
            yield from g()
        except GaplabError as exc:
            yield RunReport.check(getattr(g, "__name__", "row"), False, error=str(exc))

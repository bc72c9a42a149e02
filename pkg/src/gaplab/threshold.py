"""Threshold solver for primes between consecutive m-th powers.

All arithmetic runs in y = log x; x itself (about e^(8e14) in the cube case)
is never formed. A threshold y0 is the point beyond which both reduced
inequalities hold:

    (1)  log(27A/256) + (L-1-k) log y - 4/(3^(2/3) c) y^(k-2/3) / log^(1/3) y
             < log((1 - eps)/2)
    (2)  (11/4) log y + (3/8) y^k - (3/8 - 1/m) y < log((m/12)(1 - eps))

and log log n0 = log(y0 / m) converts it to a bound on n in (n^m, (n+1)^m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

import mpmath

from .bounds import DEFAULT_PARAMS, BoundParams
from .errors import DomainError, NoSolution, NoThreshold

EPS_SLACK = 1e-3
WORK_DPS = 30
Y_BRACKET = (math.exp(2.0), 1e20)
K_MARGIN = 1e-4
PUBLISHED_ANCHOR = (1000, 19.807)
GAP_COUNT_CONST = 111.0

_TWO_THIRDS = 2.0 / 3.0
_CBRT9 = 3.0 ** (2.0 / 3.0)


@dataclass(frozen=True)
class ThresholdProblem:
    m: int = 3
    k: float = 0.9359
    params: BoundParams = field(default=DEFAULT_PARAMS)
    eps: float = EPS_SLACK

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 3:
            raise DomainError("m must be an integer >= 3")
        if not _TWO_THIRDS < self.k < 1:
            raise DomainError("k must lie strictly between 2/3 and 1")

    def with_k(self, k: float) -> "ThresholdProblem":
        return ThresholdProblem(self.m, k, self.params, self.eps)


@dataclass(frozen=True)
class ThresholdSolution:
    y0: float
    k_used: float
    loglog_n0: float
    ineq1_margin_at_y0: float
    ineq2_margin_at_y0: float
    y_ineq1: float
    y_ineq2: float
    m: int


# ------------------------------------------------------------- T(x)

def solve_log_T(x_log: float, k: float) -> float:
    """log T for T with x / ((3T)^(8/3) log^2 T) = exp(log^k x), x = exp(x_log)."""
    if not x_log > 0:
        raise DomainError("need log x > 0")
    if not _TWO_THIRDS < k < 1:
        raise DomainError("k must lie strictly between 2/3 and 1")
    rhs = x_log - x_log**k
    if rhs <= (8.0 / 3.0) * math.log(3.0):
        raise NoSolution(f"log x - log^k x = {rhs:.4g} leaves no T > 1")

    def lhs(u: float) -> float:  # u = log T
        return (8.0 / 3.0) * (math.log(3.0) + u) + 2.0 * math.log(u)

    lo, hi = 1e-300, 1.0
    while lhs(hi) < rhs:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if lhs(mid) < rhs:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)


def solve_T(x_log: float, k: float) -> float:
    """T itself; inf once it overflows a double."""
    u = solve_log_T(x_log, k)
    return math.exp(u) if u < 709 else math.inf


# ------------------------------------------------------ zero-sum bound

class ZeroSumBound(NamedTuple):
    term1: float  # log of the e^(-(3/8) log^k x) term
    term2: float  # log of the (27A/256) log^(4-k) x term


def zero_sum_bound(x_log: float, k: float, params: BoundParams = DEFAULT_PARAMS) -> ZeroSumBound:
    """Logs of the two terms bounding S/h (S = |sum over zeros of ((x+h)^rho - x^rho)/rho|)."""
    if not x_log > math.e:
        raise DomainError("zero-sum bound needs log x > e")
    if not _TWO_THIRDS < k < 1:
        raise DomainError("k must lie strictly between 2/3 and 1")
    y = x_log
    ly = math.log(y)
    t1 = 0.25 * ly - 0.375 * y**k - math.log(3.0**0.75 * 8.0**0.25 * math.pi)
    t2 = (math.log(27.0 * params.A / 256.0) + (params.L - 1.0 - k) * ly
          - 4.0 / (_CBRT9 * params.c_ford) * y ** (k - _TWO_THIRDS) / math.log(y) ** (1.0 / 3.0))
    return ZeroSumBound(t1, t2)


class DominanceCheck(NamedTuple):
    kept_log: float     # log of (27A/256) y^(4-k) e^(-(3/8) y^k)
    dropped_log: float  # log of (927A/32) y^2 (e^(-nu(T) y) - e^(-3y/8))
    negative: bool      # dropped < kept, i.e. the discarded combination is negative
    retained_log: float  # log of (27A/256) y^(4-k) e^(-nu(T) y^k), the term kept in the final bound
    absorbed: bool      # dropped < retained


def dominance_check(x_log: float, k: float, params: BoundParams = DEFAULT_PARAMS) -> DominanceCheck:
    """Compare the cross terms discarded when simplifying the zero-sum bound."""
    y = x_log
    lt = solve_log_T(y, k)
    if lt < math.log(3.0):
        raise DomainError("T(x) falls below 3; no zero-free width")
    nu = 1.0 / (params.c_ford * lt ** (2.0 / 3.0) * math.log(lt) ** (1.0 / 3.0))
    lead = math.log(27.0 * params.A / 256.0) + (4.0 - k) * math.log(y)
    kept = lead - 0.375 * y**k
    a, b = -nu * y, -0.375 * y
    diff = a + math.log(-math.expm1(b - a)) if b < a else -math.inf
    dropped = math.log(927.0 * params.A / 32.0) + 2 * math.log(y) + diff
    retained = lead - nu * y**k
    return DominanceCheck(kept, dropped, dropped < kept, retained, dropped < retained)


# ------------------------------------------------------ inequalities

def ineq1_margin(y: float, problem: ThresholdProblem) -> float:
    """LHS - RHS of the zero-density inequality (negative: satisfied)."""
    if not y > math.e:
        raise DomainError("inequality (1) needs y > e")
    p = problem.params
    ly = math.log(y)
    lhs = (math.log(27.0 * p.A / 256.0) + (p.L - 1.0 - problem.k) * ly
           - 4.0 / (_CBRT9 * p.c_ford) * math.exp((problem.k - _TWO_THIRDS) * ly) / ly ** (1.0 / 3.0))
    return lhs - math.log(0.5 * (1.0 - problem.eps))


def ineq2_margin(y: float, problem: ThresholdProblem, dps: int = WORK_DPS) -> float:
    """LHS - RHS of the second inequality for h = m x^(1-1/m) (negative: satisfied).

    (3/8) y^k and (3/8 - 1/m) y nearly cancel at the threshold, so the
    evaluation runs in ``dps``-digit arithmetic.
    """
    if not y > math.e:
        raise DomainError("inequality (2) needs y > e")
    with mpmath.workdps(dps):
        Y = mpmath.mpf(y)
        k = mpmath.mpf(problem.k)
        m = mpmath.mpf(problem.m)
        three8 = mpmath.mpf(3) / 8
        lhs = mpmath.mpf(11) / 4 * mpmath.log(Y) + three8 * Y**k - (three8 - 1 / m) * Y
        rhs = mpmath.log(m / 12 * (1 - mpmath.mpf(problem.eps)))
        return float(lhs - rhs)


def interval_stretch_factor(delta: float) -> float:
    """1 / (1 - 1/Delta): bound on (x + h)/x from a prime in every (x(1 - 1/Delta), x]."""
    if not delta > 1:
        raise DomainError("Delta must exceed 1")
    return 1.0 / (1.0 - 1.0 / delta)


def g_over_h_margin_source(delta: float = DEFAULT_PARAMS.delta_rs) -> float:
    """The constant 2 in g/h < 2 log^(11/4) x x^(-1/24) exp((3/8) log^k x).

    g/h carries 12 (3/8)^(3/4) (x + h)/(3x) = 4 (3/8)^(3/4) (1 + h/x); with
    (1 + h/x) <= 1/(1 - 1/Delta) this stays below 2.
    """
    lead = 4.0 * 0.375**0.75 * interval_stretch_factor(delta)
    if not lead < 2.0:
        raise DomainError(f"Delta={delta} gives leading factor {lead:.6f} >= 2")
    return 2.0


def error_term_margin(x_log: float, m: int = 3) -> float:
    """Net adverse error |E(x, h, 2/3)| / h for h = m x^(1-1/m), in log-space.

    Sums the small zero-sum term and the psi - theta correction terms
    (1.00007 (x+h)^(1/2) + 1.78 (x+h)^(1/3) - 0.9999 x^(1/2)), each divided by h.
    """
    if not x_log >= 60:
        raise DomainError("error term bound is stated for log x >= 60")
    y = x_log
    k = _TWO_THIRDS
    log_h = math.log(m) + (1.0 - 1.0 / m) * y
    log_xh = y + math.log1p(math.exp(log_h - y))
    zs = 0.25 * math.log(y) - 0.375 * y**k - math.log(6.0**0.75 * math.pi)
    terms = [
        math.exp(zs),
        1.00007 * math.exp(0.5 * log_xh - log_h),
        1.78 * math.exp(log_xh / 3.0 - log_h),
        -0.9999 * math.exp(0.5 * y - log_h),
    ]
    return math.fsum(terms)


# ------------------------------------------------------------- roots

def _last_root(f: Callable[[float], float], lo: float, hi: float, n_grid: int = 256,
               rel_tol: float = 1e-13) -> float:
    """Smallest y0 in [lo, hi] with f < 0 on (y0, hi]; grid scan in log y, then bisection."""
    a, b = math.log(lo), math.log(hi)
    us = [a + (b - a) * i / (n_grid - 1) for i in range(n_grid)]
    vals = [f(math.exp(u)) for u in us]
    if vals[-1] >= 0:
        raise NoThreshold(f"margin is nonnegative at the top of the bracket (y={hi:.3g})")
    last = max((i for i, v in enumerate(vals) if v >= 0), default=None)
    if last is None:
        raise NoThreshold("margin never changes sign in the bracket")
    u0, u1 = us[last], us[last + 1]
    while u1 - u0 > rel_tol * max(1.0, abs(u1)):
        mid = 0.5 * (u0 + u1)
        if not u0 < mid < u1:
            break
        if f(math.exp(mid)) >= 0:
            u0 = mid
        else:
            u1 = mid
    return math.exp(u1)


def solve_threshold(problem: ThresholdProblem, bracket: tuple[float, float] = Y_BRACKET) -> ThresholdSolution:
    """Threshold y0 beyond which inequality (1) and the m-power inequality (2) both hold."""
    y1 = _last_root(lambda y: ineq1_margin(y, problem), *bracket)
    y2 = _last_root(lambda y: ineq2_margin(y, problem), *bracket)
    y0 = max(y1, y2)
    return ThresholdSolution(
        y0=y0, k_used=problem.k, loglog_n0=math.log(y0) - math.log(problem.m),
        ineq1_margin_at_y0=ineq1_margin(y0, problem), ineq2_margin_at_y0=ineq2_margin(y0, problem),
        y_ineq1=y1, y_ineq2=y2, m=problem.m,
    )


# --------------------------------------------------------- optimizing k

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _gss(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Golden-section search for the minimizer of a unimodal f on [a, b]."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return c if fc <= fd else d


def optimize_k(m: int = 3, params: BoundParams = DEFAULT_PARAMS, grid: int = 48,
               tol: float = 1e-7) -> tuple[float, ThresholdSolution]:
    """k minimizing the threshold: coarse grid on (2/3 + 1e-4, 1 - 1e-4), then golden section."""
    if m < 3:
        raise DomainError("m must be >= 3")
    lo, hi = _TWO_THIRDS + K_MARGIN, 1.0 - K_MARGIN
    base = ThresholdProblem(m=m, k=0.9, params=params)
    cache: dict[float, float] = {}

    def objective(k: float) -> float:
        if k not in cache:
            try:
                cache[k] = math.log(solve_threshold(base.with_k(k)).y0)
            except NoThreshold:
                cache[k] = math.inf
        return cache[k]

    ks = [lo + (hi - lo) * i / (grid - 1) for i in range(grid)]
    vals = [objective(k) for k in ks]
    best = min(range(grid), key=lambda i: (vals[i], i))
    if vals[best] == math.inf:
        raise NoThreshold(f"no k in ({lo:.4f}, {hi:.4f}) yields a threshold for m={m}")
    a, b = ks[max(best - 1, 0)], ks[min(best + 1, grid - 1)]
    k_star = _gss(objective, a, b, tol)
    candidates = sorted({a, b, k_star, ks[best]})
    k_best = min(candidates, key=lambda k: (objective(k), k))
    return k_best, solve_threshold(base.with_k(k_best))


class SensitivityRow(NamedTuple):
    label: str
    params: BoundParams
    k_best: float
    y0: float
    loglog_n0: float


def l_sensitivity_table(params: BoundParams = DEFAULT_PARAMS,
                        L_values: Iterable[float] = (5, 4, 3, 2), m: int = 3) -> list[SensitivityRow]:
    """Rerun optimize_k with log^(L - 2 sigma) in the density estimate, one row per L."""
    rows = []
    for L in L_values:
        p = params.with_(L=float(L))
        k, sol = optimize_k(m, p)
        rows.append(SensitivityRow(f"L={L:g}", p, k, sol.y0, sol.loglog_n0))
    return rows


def sensitivity_row(label: str, params: BoundParams, m: int = 3) -> SensitivityRow:
    k, sol = optimize_k(m, params)
    return SensitivityRow(label, params, k, sol.y0, sol.loglog_n0)


def mpower_table(ms: Iterable[int] = (4, 5, 6, 7, 1000),
                 params: BoundParams = DEFAULT_PARAMS) -> list[tuple[int, float, ThresholdSolution]]:
    out = []
    for m in ms:
        k, sol = optimize_k(m, params)
        out.append((m, k, sol))
    return out


# -------------------------------------------------- unconditional m bound

@dataclass(frozen=True)
class MPowerResult:
    m: float
    anchor_m: int
    anchor_loglog: float
    anchor_source: str  # "published" | "recomputed"
    log_n: float        # log n at the crossing, equal to C/m
    consistency: float  # (n / log^2 n) / (111 m^3) at the crossing
    published_anchor_loglog: float


def mpower_unconditional(params: BoundParams = DEFAULT_PARAMS, anchor: tuple[int, float] | None = None,
                         recompute_anchor: bool = False) -> MPowerResult:
    """Smallest m for which (n^m, (n+1)^m) holds a prime for every n >= 1.

    Crossing of n >= exp(C/m), C = m_a exp(loglog_a), with n / log^2 n < 111 m^3,
    i.e. the root of C/m = log(111 C^2 m), found by bisection in log m.
    """
    source = "published"
    if anchor is None:
        anchor = PUBLISHED_ANCHOR
    if recompute_anchor:
        _, sol = optimize_k(anchor[0], params)
        anchor = (anchor[0], sol.loglog_n0)
        source = "recomputed"
    m_a, ll_a = anchor
    log_C = math.log(m_a) + ll_a
    C = math.exp(log_C)

    def f(log_m: float) -> float:
        return math.exp(log_C - log_m) - (math.log(GAP_COUNT_CONST) + 2.0 * log_C + log_m)

    a, b = math.log(1e6), math.log(1e12)
    if not (f(a) > 0 > f(b)):
        raise NoSolution("crossing is not bracketed by m in (1e6, 1e12)")
    for _ in range(100):
        mid = 0.5 * (a + b)
        if not a < mid < b:
            break
        if f(mid) > 0:
            a = mid
        else:
            b = mid
    m = math.exp(b)
    log_n = C / m
    lhs = log_n - 2.0 * math.log(log_n)
    rhs = math.log(GAP_COUNT_CONST) + 3.0 * math.log(m)
    return MPowerResult(m, m_a, ll_a, source, log_n, math.exp(lhs - rhs), PUBLISHED_ANCHOR[1])

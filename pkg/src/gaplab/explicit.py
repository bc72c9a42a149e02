"""Explicit formula for psi(x) over a table of zeta zeros, and its error budget.

``truncated_psi`` evaluates x - sum_{|gamma|<T} x^rho/rho + trivial terms with
zeros paired with their conjugates, so each ordinate contributes the real
number 2 Re(x^rho / rho).

``error_budget`` and ``big_sum_bound`` evaluate the closed-form bounds behind
the O*(2 x log^2 x / T) error term. Their natural domain is x > e^60, so both
take log x as input and never form x itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from . import arith
from .errors import DomainError, HeightExceeded, NearZeroOrdinate
from .summation import fsum_array
from .zeros import ZeroTable, _require_anchored

LOG_TWO_PI = math.log(2 * math.pi)
EULER_GAMMA = 0.5772156649
NEAR_ZERO_GAP = 1e-6


# ------------------------------------------------------------ zero sums

def paired_terms(x: float, gammas: np.ndarray, precise_phase: bool = False) -> np.ndarray:
    """2 Re(x^rho / rho) for rho = 1/2 + i gamma, one entry per ordinate."""
    g = np.asarray(gammas, dtype=float)
    if precise_phase:
        with mpmath.workdps(40):
            lx = mpmath.log(mpmath.mpf(x))
            two_pi = 2 * mpmath.pi
            ph = np.array([float(mpmath.fmod(mpmath.mpf(v) * lx, two_pi)) for v in g])
    else:
        ph = g * math.log(x)
    return 2.0 * math.sqrt(x) * (0.5 * np.cos(ph) + g * np.sin(ph)) / (0.25 + g * g)


def trivial_terms(x: float) -> float:
    """-log(2 pi) - log(1 - x^-2)/2."""
    return -LOG_TWO_PI - 0.5 * math.log1p(-(x ** -2.0))


def usable_height(table: ZeroTable) -> float:
    """Largest truncation height that keeps every ordinate but the last clear of T."""
    o = table.ordinates
    return 0.5 * (float(o[-2]) + float(o[-1])) if len(o) > 1 else 0.5 * float(o[0])


@dataclass(frozen=True)
class ExplicitFormulaResult:
    x: float
    T: float
    main_term: float
    zero_sum: float
    trivial_terms: float
    psi_estimate: float
    error_bound: float
    n_zeros: int


def _check_T(table: ZeroTable, T: float) -> None:
    _require_anchored(table)
    if T > table.height:
        raise HeightExceeded(f"T={T} above table height {table.height}")
    o = table.ordinates
    i = int(np.searchsorted(o, T))
    near = [abs(o[j] - T) for j in (i - 1, i) if 0 <= j < len(o)]
    if near and min(near) < NEAR_ZERO_GAP:
        raise NearZeroOrdinate(f"T={T} is within {NEAR_ZERO_GAP} of a zero ordinate")


def truncated_psi(x: float, T: float, table: ZeroTable, precise_phase: bool = False) -> ExplicitFormulaResult:
    """psi(x) estimated from the zeros with 0 < gamma < T, plus the 2 x log^2 x / T error bound."""
    if not x > 1:
        raise DomainError("explicit formula needs x > 1")
    _check_T(table, T)
    g = table.below(T)
    zs = fsum_array(paired_terms(x, g, precise_phase)) if len(g) else 0.0
    tt = trivial_terms(x)
    lx = math.log(x)
    return ExplicitFormulaResult(
        x=x, T=T, main_term=x, zero_sum=zs, trivial_terms=tt,
        psi_estimate=x - zs + tt, error_bound=2.0 * x * lx * lx / T, n_zeros=len(g),
    )


def is_half_odd(x: float) -> bool:
    return (2 * x) % 2 == 1


def untruncated_convergence(x: float, table: ZeroTable, T_grid: Sequence[float],
                            psi_value: float | None = None) -> list[tuple[float, float]]:
    """|partial explicit formula - psi(x)| for each truncation height in T_grid."""
    if not (x >= 2.5 and is_half_odd(x)):
        raise DomainError("convergence harness needs x = n + 1/2 >= 2.5")
    T_grid = list(T_grid)
    if any(b <= a for a, b in zip(T_grid, T_grid[1:])):
        raise DomainError("T_grid must be ascending")
    for T in T_grid:
        _check_T(table, T)
    exact = arith.psi(x) if psi_value is None else psi_value
    g = table.below(T_grid[-1]) if T_grid else table.ordinates[:0]
    terms = paired_terms(x, g)
    tt = trivial_terms(x)
    out = []
    for T in T_grid:
        k = int(np.searchsorted(g, T))
        est = x - fsum_array(terms[:k]) + tt
        out.append((T, abs(est - exact)))
    return out


# ------------------------------------------------------- log-space helpers

def _logsumexp(values: Sequence[float]) -> float:
    finite = [v for v in values if v != -math.inf]
    if not finite:
        return -math.inf
    m = max(finite)
    return m + math.log(math.fsum(math.exp(v - m) for v in finite))


def _log_minus_one(t_log: float) -> float:
    """log(T - 1) from log T."""
    return t_log + math.log1p(-math.exp(-t_log))


def _log_plus_one(t_log: float) -> float:
    return t_log + math.log1p(math.exp(-t_log))


# ------------------------------------------------------------ big sum

@dataclass(frozen=True)
class BigSumBound:
    """Bound on sum Lambda(n) (x/n)^c / |log(x/n)| split into its pieces.

    Component fields (s1_s5, s3, s2, s4, total) are in units of x log^2 x,
    so ``ratio`` equals ``total``; ``log_scale`` = log(x log^2 x) recovers
    absolute values.
    """

    alpha: float
    x_log: float
    c: float
    s1_s5: float
    s3: float
    s2: float
    s4: float
    total: float
    ratio: float
    log_scale: float
    corrected_s4: bool
    in_domain: bool


def big_sum_bound(alpha: float, x_log: float, corrected_s4: bool = True,
                  s4_alpha_power: bool = False) -> BigSumBound:
    """Evaluate the five-way split of the big sum at x = exp(x_log).

    The printed S4 bound lacks the factor x carried by its S2 twin.
    ``corrected_s4`` restores it; ``s4_alpha_power`` additionally multiplies
    by alpha^c (kept only for comparison, since (x/n)^c < 1 on the S4 range).
    """
    if not 1 < alpha < 2:
        raise DomainError("alpha must lie in (1, 2)")
    if not x_log > 1:
        raise DomainError("big sum bound needs x > e")
    y = x_log
    c = 1.0 + 1.0 / y
    la = math.log(alpha)
    ac = math.exp(c * la)
    inv_x = math.exp(-y)
    s1_s5 = math.e / (la * y)
    s3 = 5.0 / y
    near_lo = 1.0 - 1.0 / alpha  # (x - x/alpha)/x
    s2 = ac * (y + math.log(near_lo) + EULER_GAMMA + inv_x / near_lo) / y
    near_hi = alpha - 1.0  # (alpha x - x)/x
    s4_core = 2.0 * (y + la) / (3.0 - alpha) * (y + math.log(near_hi) + EULER_GAMMA + inv_x / near_hi) / (y * y)
    if corrected_s4:
        s4 = s4_core * (ac if s4_alpha_power else 1.0)
    else:
        s4 = s4_core * inv_x
    total = s1_s5 + s3 + s2 + s4
    return BigSumBound(alpha, x_log, c, s1_s5, s3, s2, s4, total, total,
                       y + 2.0 * math.log(y), corrected_s4, x_log > 60)


# ------------------------------------------------------------ error budget

@dataclass(frozen=True)
class ErrorBudget:
    """Itemized error bound of the truncated explicit formula, in log-space.

    Every ``log_*`` field is the natural log of a nonnegative component;
    ``log_abs_log_term`` is log |log(1 - x^-2)/2|.
    """

    x_log: float
    T_log: float
    U_log: float
    log_perron_term: float
    log_i3: float
    log_zero_window: float
    log_i5: float
    log_i6: float
    log_i7: float
    log_i8: float
    log_trivial_const: float
    log_abs_log_term: float
    log_total: float
    log_reference: float
    ratio: float

    @property
    def trivial_const(self) -> float:
        return math.exp(self.log_trivial_const)

    def component(self, name: str) -> float:
        """Absolute value of a component (may overflow to inf for huge x)."""
        v = getattr(self, "log_" + name)
        try:
            return math.exp(v)
        except OverflowError:
            return math.inf

    def recomputed_log_total(self) -> float:
        ln2 = math.log(2.0)
        return _logsumexp([
            self.log_trivial_const, self.log_abs_log_term,
            ln2 + self.log_zero_window, ln2 + self.log_i5, ln2 + self.log_i6,
            ln2 + self.log_i7, ln2 + self.log_i8, self.log_i3, self.log_perron_term,
        ])


def _log_U_times_xlog(U_log: float, x_log: float) -> float:
    """U * log x, returned as a float (inf when it overflows)."""
    try:
        return math.exp(U_log + math.log(x_log))
    except OverflowError:
        return math.inf


def error_budget(x_log: float, T_log: float) -> ErrorBudget:
    """Error budget at x = exp(x_log), T = exp(T_log), for 50 < T < x."""
    if not (math.log(50.0) < T_log < x_log):
        raise DomainError("error budget needs 50 < T < x")
    y = x_log
    # U: even integer nearest x
    if y < 36:
        xv = math.exp(y)
        U = 2 * round(xv / 2)
        U_log = math.log(max(U, 2))
    else:
        U_log = y
    log_tm1 = _log_minus_one(T_log)
    log_tp1 = _log_plus_one(T_log)
    log_pi = math.log(math.pi)
    log_2pi = LOG_TWO_PI
    Ux = _log_U_times_xlog(U_log, y)  # log of x^U
    half_log_UT = 0.5 * np.logaddexp(2 * U_log, 2 * T_log)
    half_log_UT1 = 0.5 * np.logaddexp(2 * U_log, 2 * log_tp1)
    log_log_tp1 = math.log(log_tp1)

    perron = math.log(2.8) + y + 2 * math.log(y) - log_pi - T_log
    i3 = math.log(18 + 2 * half_log_UT) - log_2pi - Ux
    zero_window = math.log(2.0) + y + math.log(T_log) - log_tm1
    i5 = math.log(18 + 2 * half_log_UT1) - log_2pi - Ux - T_log
    i6 = math.log(9 + half_log_UT1) - log_2pi - y - log_tm1
    i7 = 1.0 - log_2pi - log_tm1 + np.logaddexp(2 * log_log_tp1, log_log_tp1)
    i8 = 1.0 + y + math.log(y) - log_pi - log_tm1
    trivial = math.log(LOG_TWO_PI)
    # |log(1 - x^-2)|/2 ~ x^-2/2
    abs_log_term = -math.log(2.0) + math.log(-math.log1p(-math.exp(-2 * y))) if y < 350 else -math.log(2.0) - 2 * y
    parts = ErrorBudget(
        x_log=y, T_log=T_log, U_log=U_log,
        log_perron_term=perron, log_i3=float(i3), log_zero_window=zero_window, log_i5=float(i5),
        log_i6=float(i6), log_i7=float(i7), log_i8=i8, log_trivial_const=trivial,
        log_abs_log_term=abs_log_term, log_total=0.0, log_reference=0.0, ratio=0.0,
    )
    total = parts.recomputed_log_total()
    ref = reference_bound_log(y, T_log)
    return ErrorBudget(**{**parts.__dict__, "log_total": total, "log_reference": ref,
                          "ratio": math.exp(total - ref)})


def reference_bound_log(x_log: float, T_log: float) -> float:
    """log of 2 x log^2 x / T."""
    return math.log(2.0) + x_log + 2 * math.log(x_log) - T_log

import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from gaplab import threshold as th
from gaplab.bounds import DEFAULT_PARAMS
from gaplab.errors import DomainError, NoSolution, NoThreshold

K0 = 0.9359


def ineq1_oracle(y, k, A=9.7, c=57.54, L=5.0, eps=1e-3):
    with mpmath.workdps(40):
        y = mpmath.mpf(y)
        lhs = (mpmath.log(27 * mpmath.mpf(A) / 256) + (L - 1 - k) * mpmath.log(y)
               - 4 / (mpmath.cbrt(9) * c) * y ** (k - mpmath.mpf(2) / 3) / mpmath.cbrt(mpmath.log(y)))
        return float(lhs - mpmath.log((1 - mpmath.mpf(eps)) / 2))


@settings(deadline=None)
@given(st.floats(min_value=10, max_value=1e19), st.floats(min_value=0.67, max_value=0.999))
def test_ineq1_matches_oracle(y, k):
    p = th.ThresholdProblem(3, k)
    assert th.ineq1_margin(y, p) == pytest.approx(ineq1_oracle(y, k), abs=1e-9 * max(1.0, abs(ineq1_oracle(y, k))))


@settings(deadline=None, max_examples=40)
@given(st.floats(min_value=10, max_value=1e19), st.floats(min_value=0.67, max_value=0.999),
       st.sampled_from([3, 4, 7, 1000]))
def test_ineq2_precision_guard(y, k, m):
    # 30 digits and 60 digits agree to double precision
    p = th.ThresholdProblem(m, k)
    a = th.ineq2_margin(y, p)
    b = th.ineq2_margin(y, p, dps=60)
    assert a == pytest.approx(b, rel=1e-14, abs=1e-12)


def test_margins_reference_points():
    p = th.ThresholdProblem()
    # inequality (2) is deeply satisfied at y = 8e14; (1) is within a few hundredths of tight
    assert th.ineq2_margin(8e14, p) == pytest.approx(-8.0153e10, rel=1e-3)
    assert abs(th.ineq1_margin(8e14, p)) < 0.05
    with pytest.raises(DomainError):
        th.ineq1_margin(2.0, p)


def test_problem_validation():
    with pytest.raises(DomainError):
        th.ThresholdProblem(m=2)
    with pytest.raises(DomainError):
        th.ThresholdProblem(k=2 / 3)


@given(st.floats(min_value=10, max_value=1e15), st.floats(min_value=0.7, max_value=0.99))
def test_solve_T_satisfies_equation(y, k):
    try:
        u = th.solve_log_T(y, k)
    except NoSolution:
        assert y - y**k <= 8 / 3 * math.log(3)
        return
    assert (8 / 3) * (math.log(3) + u) + 2 * math.log(u) == pytest.approx(y - y**k, rel=1e-12)


def test_solve_T_no_solution():
    with pytest.raises(NoSolution):
        th.solve_T(2.0, 0.9)


def test_zero_sum_bound_terms():
    t1, t2 = th.zero_sum_bound(8e14, K0)
    assert t2 == pytest.approx(th.ineq1_margin(8e14, th.ThresholdProblem()) + math.log(0.4995), abs=1e-9)
    assert t1 < -1e13


def test_solve_threshold_cube():
    sol = th.solve_threshold(th.ThresholdProblem(3, K0))
    assert sol.ineq1_margin_at_y0 <= 0 and sol.ineq2_margin_at_y0 <= 0
    assert sol.y0 == max(sol.y_ineq1, sol.y_ineq2)
    # just below the threshold the binding inequality fails
    assert th.ineq1_margin(sol.y0 * (1 - 1e-9), th.ThresholdProblem(3, K0)) > 0
    assert sol.loglog_n0 == pytest.approx(math.log(sol.y0 / 3))
    assert 7e14 < sol.y0 < 9e14


def test_no_threshold_when_never_satisfied():
    p = th.ThresholdProblem(3, 0.999, DEFAULT_PARAMS.with_(c_ford=1e6))
    with pytest.raises(NoThreshold):
        th.solve_threshold(p, bracket=(10.0, 1e6))


def test_optimize_k_crossing():
    k, sol = th.optimize_k(3)
    assert k == pytest.approx(K0, abs=2e-3)
    # at the optimum both inequalities bind together
    assert sol.y_ineq1 == pytest.approx(sol.y_ineq2, rel=1e-4)
    for dk in (-0.002, 0.002):
        assert th.solve_threshold(th.ThresholdProblem(3, k + dk)).y0 > sol.y0


def test_dominance_check():
    # the combination the simplification discards is not negative anywhere on this grid
    for y in (60.0, 1e3, 1e6):
        assert not th.dominance_check(y, K0).negative
    # but from moderate x on it is dominated by the retained zero-density term
    assert not th.dominance_check(60.0, K0).absorbed
    assert th.dominance_check(1e3, K0).absorbed and th.dominance_check(1e6, K0).absorbed


def test_g_over_h_and_stretch():
    assert th.g_over_h_margin_source() == 2.0
    assert 4 * 0.375**0.75 * th.interval_stretch_factor(DEFAULT_PARAMS.delta_rs) < 2
    with pytest.raises(DomainError):
        th.g_over_h_margin_source(1.01)


def test_error_term_margin():
    assert 0 < th.error_term_margin(60.0, 3) < 1e-3
    assert th.error_term_margin(100.0, 3) < th.error_term_margin(60.0, 3)
    with pytest.raises(DomainError):
        th.error_term_margin(59.0)


def test_mpower_unconditional():
    r = th.mpower_unconditional()
    assert r.m == pytest.approx(4.971e9, abs=0.01e9)
    C = 1000 * math.exp(19.807)
    assert C / r.m == pytest.approx(math.log(111 * C * C * r.m), rel=1e-12)
    assert r.consistency == pytest.approx(1.0, abs=0.01)
    rec = th.mpower_unconditional(recompute_anchor=True)
    assert rec.anchor_source == "recomputed" and rec.anchor_loglog < 19.807
    assert rec.m < r.m

from __future__ import annotations

import math

import numpy as np
import pytest

from cpmm.errors import CapabilityError, DomainError, NonConvergence, TailNotSummable
from cpmm.eigensolve import (
    ExpSumEntries, TableEntries, classify_phase_space, eigendirection, eigenvalues, lambda_min,
    m_matrix, nonexistence_s10, power_iteration, propagate_s8, propagate_s9, recurrence_model,
    residual_check, s8_entries, s8_params, s12_sqrt_lambda, solve, solve_closed_form_s8,
    solve_s11, solve_s12, spectral_case, total_sum, truncation_perron,
)
from cpmm.eigensolve.closed_forms import tribonacci_root
from cpmm.mapspec.gallery import load
from cpmm.mapspec.model import BasicIntervalId as B
from cpmm.mapspec.transitions import compile_transitions

SHEAR = 2 + math.sqrt(5)


def real_root(coeffs):
    r = np.roots(coeffs)
    return float(max(x.real for x in r if abs(x.imag) < 1e-9))


LAM_MIN = real_root([1, -2, -1, -2])


# -- entries ------------------------------------------------------------------

def test_expsum_range_sum_matches_brute_force():
    e = ExpSumEntries({"A": (((2.0, 0.5), (1.0, 1.5)), ((3.0, 0.7),))}, {"A": 2})
    brute = sum(e(B("A", i)) for i in range(-7, 12))
    assert e.range_sum("A", -7, 11) == pytest.approx(brute, rel=1e-13)


def test_expsum_infinite_tails():
    e = ExpSumEntries({"A": (((1.0, 0.5),),)}, {"A": 1})
    assert e.range_sum("A", 0, math.inf) == pytest.approx(2.0)
    with pytest.raises(TailNotSummable):
        e.range_sum("A", -math.inf, 0)


def test_table_entries_reject_infinite_ranges():
    t = TableEntries({B("A", 0): 1.0, B("A", 1): 2.0})
    assert t.range_sum("A", 0, 5) == 3.0
    with pytest.raises(TailNotSummable):
        t.range_sum("A", 0, math.inf)


# -- s8 -------------------------------------------------------------------------

def test_lambda_min_matches_numpy_roots():
    assert lambda_min() == pytest.approx(LAM_MIN, abs=1e-12)
    assert 2.65 < lambda_min() < 2.67


def test_s8_at_lambda_min_alpha_vanishes():
    out = solve_closed_form_s8(lambda_min())
    assert out.status == "exists_unique"
    assert out.witness["alpha"] == 0
    lam = lambda_min()
    for i in range(10):
        assert out.entries(B("A", i)) == pytest.approx((lam ** 2 + 1) * lam ** -i, rel=1e-12)
    assert out.summability == "summable"


def test_s8_lambda_3_residual():
    out = solve_closed_form_s8(3.0)
    assert out.status == "exists_unique"
    assert out.residual < 1e-9


def test_s8_lambda_2_has_negativity_witness():
    out = solve_closed_form_s8(2.0)
    assert out.status == "none"
    assert out.witness["value"] < 0
    i = out.witness["index"]
    p = s8_params(2.0)
    assert p.alpha * p.x ** i + 5 * 2.0 ** -i < 0


@pytest.mark.parametrize("lam", [1.3, 1.7, 2.2, 2.6])
def test_s8_below_lambda_min_is_none(lam):
    assert solve_closed_form_s8(lam).status == "none"


def test_s8_domain():
    with pytest.raises(DomainError):
        solve_closed_form_s8(1.0)


@pytest.mark.parametrize("lam", [LAM_MIN, 3.0, 4.5])
def test_s8_closed_form_agrees_with_numeric_propagation(lam):
    e = s8_entries(s8_params(lam))
    p = propagate_s8(lam, n=26)
    for fam in "ABC":
        got = np.array([e(B(fam, i)) for i in range(26)])
        assert np.max(np.abs(got - p[fam])) < 1e-8


def test_s8_total_is_lambda_d():
    lam = lambda_min()
    e = s8_entries(s8_params(lam))
    assert total_sum(load("s8"), e) == pytest.approx(lam * e.singles["D"], rel=1e-12)


@pytest.mark.parametrize("lam", [1.7, 1.8, 1.9, 2.0])
def test_x_plus_vs_inverse_lambda(lam):
    x = s8_params(lam).x
    k = lam ** 3 - lam ** 2 - lam - 1
    assert (x > 1 / lam) == (k > 0)
    assert 1.7 < tribonacci_root() < 1.9


# -- s9 -------------------------------------------------------------------------

@pytest.mark.parametrize("lam", [2.0, 3.0, SHEAR, 5.0, 10.0])
def test_det_is_one(lam):
    assert np.linalg.det(m_matrix(lam)) == pytest.approx(1.0, abs=1e-12)


def test_spectral_cases():
    assert spectral_case(3.0) == "rotation"
    assert np.all(np.abs(np.linalg.eigvals(m_matrix(3.0)).imag) > 0)
    assert spectral_case(SHEAR) == "shear"
    assert np.allclose(np.linalg.eigvals(m_matrix(SHEAR)), 1.0, atol=1e-6)
    assert spectral_case(6.0) == "saddle"
    mp, mm = eigenvalues(6.0)
    assert mp > 1 > mm > 0 and mp * mm == pytest.approx(1.0)
    assert sorted(np.linalg.eigvals(m_matrix(6.0)).real) == pytest.approx([mm, mp])
    assert recurrence_model(5.0).det == pytest.approx(1.0)


def test_s9_shear_entries():
    out = propagate_s9(SHEAR)
    assert out.status == "exists_unique"
    for k in range(-20, 21):
        assert out.entries(B("I", 2 * k)) == pytest.approx(2.0, abs=1e-12)
        assert out.entries(B("I", 2 * k + 1)) == pytest.approx(math.sqrt(5) - 1, abs=1e-12)
    assert out.residual < 1e-12


def test_s9_rotation_sign_violation():
    out = propagate_s9(4.0, (1.0, 1.0), k_range=4)
    assert out.status == "none"
    assert out.witness["interval"] in ("I_4", "I_-1")
    assert out.witness["value"] < 0


def test_s9_propagation_matches_matrix_powers():
    out = propagate_s9(4.0, (1.0, 1.0), k_range=6)
    M = m_matrix(4.0)
    p = np.linalg.matrix_power(M, 3) @ np.array([1.0, 1.0])
    assert out.table[B("I", 7)] == pytest.approx(p[0])
    q = np.linalg.inv(np.linalg.matrix_power(M, 2)) @ np.array([1.0, 1.0])
    assert out.table[B("I", -2)] == pytest.approx(q[1])


def _between(lam):
    mp, mm = eigenvalues(lam)
    return eigendirection(lam, mp) + 0.5 * eigendirection(lam, mm)


def test_s9_saddle_between_eigendirections():
    out = propagate_s9(6.0, _between(6.0))
    assert out.status == "exists_family" and out.dim == 2
    assert out.summability == "both_divergent"
    assert out.residual < 1e-9
    assert all(out.entries(B("I", i)) > 0 for i in range(-100, 101))
    ph = classify_phase_space(load("s9"), out.entries, B("I", 0))
    assert ph.verdict == "full_extended_line"


def test_s9_saddle_on_one_eigendirection_is_half_line():
    mp, _ = eigenvalues(6.0)
    out = propagate_s9(6.0, eigendirection(6.0, mp))
    ph = classify_phase_space(load("s9"), out.entries, B("I", 0))
    assert ph.verdict.startswith("half_line")


def test_s9_saddle_outside_cone():
    assert propagate_s9(6.0, (1.0, -0.1)).status == "none"


def test_s9_errors():
    with pytest.raises(DomainError):
        propagate_s9(0.5)
    with pytest.raises(DomainError):
        propagate_s9(3.0, (0.0, 0.0))


# -- s10, s11, s12 ------------------------------------------------------------------

def _pi(n):
    members = {2 + m * (m + 1) // 2 for m in range(40)}
    return sum(1 for j in range(1, n + 1) if j in members)


def test_s10_sum_contradiction_at_3():
    out = nonexistence_s10(3.0)
    assert out.status == "none"
    oracle = sum(3.0 ** -_pi(n) for n in range(201))
    assert out.witness["partial_sum"] == pytest.approx(oracle, rel=1e-12)
    assert out.witness["sum_bound"] == pytest.approx(2.75, abs=1e-12)


def test_s10_lambda_8_same_contradiction():
    out = nonexistence_s10(8.0)
    assert out.status == "none" and out.witness["sum_bound"] < 3


@pytest.mark.parametrize("lam,n", [(1.5, 33), (2.0, 64), (2.5, 191)])
def test_s10_divergence_witness(lam, n):
    out = nonexistence_s10(lam)
    assert out.witness["index"] == n
    first = next(k for k in range(400) if 3.0 ** (k - _pi(k)) / lam ** k > 1e6)
    assert first == n


def test_s10_inconclusive_when_window_small():
    from cpmm.errors import InconclusiveError
    with pytest.raises(InconclusiveError):
        nonexistence_s10(2.0, n_max=10)


def test_s11():
    out = solve_s11(2.0)
    assert out.entries(B("A", 3)) == 9
    assert out.entries(B("B", 7)) == 1
    assert out.entries(B("A", 0)) == 2
    assert out.residual < 1e-12
    with pytest.raises(CapabilityError):
        solve_s11(3.0)


def test_s12():
    s = s12_sqrt_lambda()
    out = solve_s12(s)
    assert out.entries(B("J", 0)) == pytest.approx(2 / math.sqrt(SHEAR))
    assert out.residual < 1e-12
    for k in range(-10, 11):
        assert s * out.entries(B("J", k)) == pytest.approx(out.entries(B("I", k)))
    with pytest.raises(CapabilityError):
        solve_s12(2.0)


# -- truncation oracle ----------------------------------------------------------------

def test_truncation_self_loop():
    T = compile_transitions(load("s8"))
    assert truncation_perron(T, [[B("D")]]).estimates == [pytest.approx(1.0)]


def test_truncation_s8_window_300():
    T = compile_transitions(load("s8"))
    r = truncation_perron(T, [30, 100, 300])
    assert abs(r.final - LAM_MIN) < 1e-2
    assert r.nondecreasing
    assert len(r.left) == len(r.right) == r.sizes[-1]


def test_power_iteration_budget():
    A = np.array([[0, 1], [1, 0]])
    assert power_iteration(A).value == pytest.approx(1.0)
    rng = np.random.default_rng(0)
    M = rng.random((40, 40))
    with pytest.raises(NonConvergence):
        power_iteration(M, tol=0.0, budget=3)


# -- dispatcher ---------------------------------------------------------------------

def test_solve_dispatch():
    assert solve(load("s8"), 3.0).phase.verdict == "finite_interval"
    assert solve(load("tent"), 2.0).status == "exists_unique"
    assert solve(load("tent"), 3.0).status == "none"
    with pytest.raises(CapabilityError):
        solve(load("s11g"), 2.0)


def test_residual_check_scaled():
    out = solve_closed_form_s8(3.0)
    T = compile_transitions(load("s8"))
    assert residual_check(T, 3.0, out.entries, 10) < 1e-12
    assert residual_check(T, 3.1, out.entries, 10) > 1e-3

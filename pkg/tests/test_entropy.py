from __future__ import annotations

import math

import numpy as np
import pytest

from cpmm.eigensolve import truncation_perron
from cpmm.entropy import (
    FirstReturnSeries, count_loops, first_returns, perron_from_generating_function,
    phi_estimate, rabbit_counts, renewal_defect, spr_test, tribonacci_constant,
)
from cpmm.errors import InsufficientData, NoBracket, UnboundedDrift
from cpmm.mapspec.gallery import load
from cpmm.mapspec.model import BasicIntervalId as B
from cpmm.mapspec.transitions import TransitionRuleSet, compile_transitions

from oracles import s8_dfs as _dfs

D = B("D")
LAM_MIN = float(max(r.real for r in np.roots([1, -2, -1, -2]) if abs(r.imag) < 1e-9))
X1 = float(max(r.real for r in np.roots([1, -1, -1, -1]) if abs(r.imag) < 1e-9))


@pytest.fixture(scope="module")
def s8():
    return compile_transitions(load("s8"))


def test_self_loop_at_d(s8):
    assert count_loops(s8, D, 3).p[0] == 1
    assert first_returns(s8, D, 3).f[0] == 1


def test_empty_counts(s8):
    assert count_loops(s8, D, 0).p == []
    assert first_returns(s8, D, 0).f == []


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_loops_match_dfs(s8, n):
    assert count_loops(s8, D, n).at(n) == _dfs(n, first_only=False)


@pytest.mark.parametrize("n", [1, 4, 7, 9])
def test_first_returns_match_dfs(s8, n):
    assert first_returns(s8, D, n).at(n) == _dfs(n, first_only=True)


def test_first_returns_equal_rabbits(s8):
    assert first_returns(s8, D, 18).f == rabbit_counts(18).f
    assert first_returns(s8, D, 18).f == [1, 1, 3, 5, 9, 17, 31, 57, 105, 193, 355, 653, 1201,
                                          2209, 4063, 7473, 13745, 25281]


def test_renewal_identity(s8):
    loops, fr = count_loops(s8, D, 15), first_returns(s8, D, 15)
    assert renewal_defect(loops, fr) == [0] * 15
    assert all(f <= p for f, p in zip(fr.f, loops.p))


def test_supermultiplicative(s8):
    p = count_loops(s8, D, 12)
    for m in range(1, 7):
        for n in range(1, 7):
            assert p.at(m + n) >= p.at(m) * p.at(n)


def test_exact_big_integers(s8):
    f = first_returns(s8, D, 90).f
    assert f[-1] > 2 ** 63 and isinstance(f[-1], int)
    assert f[-1] == rabbit_counts(90).f[-1]


def test_rabbit_model():
    r = rabbit_counts(30)
    assert r.w[3] == 4 and r.f[2] == 3
    assert abs(r.growth_ratio(30) - X1) < 1e-6
    assert tribonacci_constant() == pytest.approx(X1, abs=1e-12)
    with pytest.raises(ValueError):
        rabbit_counts(2)


def test_phi_estimate(s8):
    est = phi_estimate(first_returns(s8, D, 30))
    assert abs(est.value - 1.839) < 0.02 and abs(est.value - X1) < 1e-6
    assert est.nth_root < est.value
    assert phi_estimate([1] * 20).value == pytest.approx(1.0)
    assert phi_estimate([2 ** n for n in range(1, 21)]).value == pytest.approx(2.0)
    with pytest.raises(InsufficientData):
        phi_estimate([1, 2, 3])


def test_spr_s8(s8):
    fr = first_returns(s8, D, 40)
    vj = spr_test(fr, X1)
    assert vj.verdict == "strongly_positive_recurrent"
    assert vj.crossing_index == 3
    lam = 3 * math.sqrt(5) - 5  # any positive constant the terms settle to
    terms = [c * X1 ** -n for n, c in enumerate(fr.f, start=1)]
    assert terms[-1] == pytest.approx(terms[-2], rel=1e-6) and terms[-1] > 0 and lam


def test_spr_single_self_loop():
    vj = spr_test(FirstReturnSeries(None, [1] + [0] * 20), 1.0)
    assert vj.verdict == "recurrent_not_spr"
    assert vj.partial_sum == 1.0


def test_s10_transient():
    T = TransitionRuleSet(load("s10"), "geometry")
    fr = first_returns(T, B("I", 0), 120)
    vj = spr_test(fr, 3.0, perron=3.0)
    assert vj.verdict == "transient"
    assert vj.generating_at_perron == pytest.approx(2.75 / 3, abs=1e-6)


def test_spr_inconclusive_without_perron():
    T = TransitionRuleSet(load("s10"), "geometry")
    assert spr_test(first_returns(T, B("I", 0), 40), 3.0).verdict == "inconclusive"


def test_perron_from_generating_function(s8):
    fr = first_returns(s8, D, 60)
    lam = perron_from_generating_function(fr, (2, 3))
    assert abs(lam - LAM_MIN) < 1e-3
    est = truncation_perron(s8, [300]).final
    assert abs(lam - est) < 2e-2
    assert phi_estimate(first_returns(s8, D, 30)).value < lam
    with pytest.raises(NoBracket):
        perron_from_generating_function(fr, (3, 4))


def test_perron_trivial_fixtures():
    assert perron_from_generating_function(FirstReturnSeries(None, [1]), (0.5, 2)) == pytest.approx(1.0)
    tent = compile_transitions(load("tent"))
    fr = first_returns(tent, B("L"), 60)
    assert fr.f[:4] == [1, 1, 1, 1]
    assert perron_from_generating_function(fr, (1.5, 3)) == pytest.approx(2.0, abs=1e-12)


def test_loop_window_uses_bounded_climb():
    T = compile_transitions(load("s11"))
    assert count_loops(T, B("A", 0), 6).p[0] == 0
    assert first_returns(T, B("A", 0), 6).f[1] == 1  # A_0 -> B_0 -> A_0


def test_unbounded_drift(s8):
    T = compile_transitions(load("s8"))
    T._cache["drift"] = (math.inf, math.inf)
    with pytest.raises(UnboundedDrift):
        count_loops(T, D, 4)

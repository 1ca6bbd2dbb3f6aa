"""Solvers for the ``s10-none``, ``s11-pcws`` and ``s12-nonmixing`` gallery maps."""
from __future__ import annotations

import math

from ..errors import CapabilityError, DomainError, InconclusiveError
from ..mapspec.model import BasicIntervalId
from . import outcome as oc
from .entries import ExpSumEntries
from .recurrence import SHEAR_LAMBDA, constant_entries


def _index_set():
    from ..mapspec.gallery import load
    return load("s10-none").sets["N"]


def s10_log_entries(lam: float, n_max: int) -> list[float]:
    """log v_n = (n - pi(n)) log 3 - n log lam for 0 <= n <= n_max."""
    N = _index_set()
    members = set(N.members_upto(n_max))
    out, pi = [], 0
    for n in range(n_max + 1):
        if n >= 1 and n in members:
            pi += 1
        out.append((n - pi) * math.log(3) - n * math.log(lam))
    return out


def s10_sum_bound(tol: float = 1e-18) -> float:
    """sum_n 3^-pi(n), summed block by block over the gaps of N."""
    N = _index_set()
    total, prev, pi = 0.0, 0, 0
    m = 0
    while True:
        nxt = N.members_upto(prev + 1 + 10 * (m + 1))
        nxt = [x for x in nxt if x > prev and x >= 1]
        if not nxt:
            continue
        cur = nxt[0]
        term = (cur - prev) * 3.0 ** (-pi)  # indices prev..cur-1 share pi
        total += term
        if pi > 0 and term < tol:
            break
        prev, pi, m = cur, pi + 1, m + 1
    return total


def nonexistence_s10(lam: float, n_max: int = 200, bound: float = 1e6) -> oc.EigenOutcome:
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    logs = s10_log_entries(lam, n_max)
    if lam >= 3:
        partial = sum(math.exp(x) for x in logs)
        s_bound = s10_sum_bound()
        return oc.EigenOutcome(
            oc.NONE, lam, scaling="v_0 = 1",
            certificate="sum contradiction: sum v_n <= sum 3^-pi(n) < 3 <= lam v_0",
            witness={"indices": f"0..{n_max}", "partial_sum": partial,
                     "sum_bound": s_bound, "required": lam})
    log_bound = math.log(bound)
    for n, x in enumerate(logs):
        if x > log_bound:
            return oc.EigenOutcome(
                oc.NONE, lam, scaling="v_0 = 1",
                certificate="divergence: v_n is unbounded, so sum v_n = lam v_0 fails",
                witness={"index": n, "value": math.exp(x), "bound": bound})
    raise InconclusiveError(f"no witness for lambda = {lam} within n <= {n_max}")


def solve_s11(lam: float = 2.0, window: int = 30) -> oc.EigenOutcome:
    if lam != 2:
        raise CapabilityError("only lambda = 2 is supported for s11-pcws")
    entries = ExpSumEntries({"A": (((1.0, 2.0), (1.0, 1.0)),), "B": (((1.0, 1.0),),)},
                            {"A": 1, "B": 1})
    from ..mapspec.gallery import load
    from ..mapspec.transitions import compile_transitions
    from .residual import residual_check
    res = residual_check(compile_transitions(load("s11-pcws")), lam, entries, window)
    return oc.EigenOutcome(oc.EXISTS_UNIQUE, lam, entries, summability=oc.RIGHT_DIVERGENT,
                           scaling="b_0 = 1",
                           certificate="2 b_i = a_0 makes b constant; a_{i+1} = 2 a_i - 1",
                           residual=res)


def s12_sqrt_lambda() -> float:
    return math.sqrt(SHEAR_LAMBDA)


def solve_s12(sqrt_lambda: float, window: int = 40) -> oc.EigenOutcome:
    s = s12_sqrt_lambda()
    if abs(sqrt_lambda - s) > 1e-12:
        raise CapabilityError(f"only sqrt(lambda) = sqrt(2+sqrt5) = {s} is supported")
    r5 = math.sqrt(5) - 1
    I = constant_entries(r5, 2.0)
    entries = ExpSumEntries({"I": I.terms["I"], "J": constant_entries(r5 / s, 2.0 / s).terms["I"]},
                            {"I": 2, "J": 2})
    from ..mapspec.gallery import load
    from ..mapspec.transitions import compile_transitions
    from .residual import residual_check
    ids = [BasicIntervalId(f, k) for f in ("I", "J") for k in range(-window, window + 1)]
    res = residual_check(compile_transitions(load("s12-nonmixing")), s, entries, ids)
    return oc.EigenOutcome(oc.EXISTS_UNIQUE, s, entries, summability=oc.BOTH_DIVERGENT,
                           scaling="v_I0 = 2",
                           certificate="sqrt(lam) v_J = v_I reduces to the s9 system at 2+sqrt5",
                           residual=res)


__all__ = ["nonexistence_s10", "s10_sum_bound", "s12_sqrt_lambda", "solve_s11", "solve_s12"]

"""Closed-form eigenvectors for the finite-interval map ``s8-interval``.

Entries (c_0 normalised to lam^3-lam^2-lam-1)::

    a_i = alpha x^i + (lam^2+1) lam^-i      b_i = alpha x^(i+1) + (lam^2-1) lam^-i
    c_i = (lam^3-lam^2-lam-1) lam^-i        d   = (lam^3-lam^2-lam-1) lam

with x the positive root of x^2+(lam+1)x-lam and alpha = x lam (lam^3-2lam^2-lam-2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import DomainError
from ..mapspec.model import BasicIntervalId
from . import outcome as oc
from .entries import ExpSumEntries
from .roots import positive_quadratic_root, scan_root

ALPHA_ZERO = 1e-12


def cubic_min(lam: float) -> float:
    return lam ** 3 - 2 * lam ** 2 - lam - 2


def cubic_k(lam: float) -> float:
    return lam ** 3 - lam ** 2 - lam - 1


@lru_cache(maxsize=None)
def lambda_min() -> float:
    """Real root of lam^3 - 2 lam^2 - lam - 2 (about 2.659)."""
    return scan_root(cubic_min, 1.0, 10.0)


@lru_cache(maxsize=None)
def tribonacci_root() -> float:
    """Root of lam^3 - lam^2 - lam - 1, where x_+ crosses 1/lam."""
    return scan_root(cubic_k, 1.0, 10.0)


@dataclass(frozen=True)
class S8Params:
    lam: float
    x: float
    k: float
    alpha: float

    @property
    def poly(self) -> float:
        return cubic_min(self.lam)


def s8_params(lam: float) -> S8Params:
    x = positive_quadratic_root(lam + 1, -lam)
    poly = cubic_min(lam)
    if abs(poly) <= ALPHA_ZERO:
        poly = 0.0
    return S8Params(lam, x, cubic_k(lam), x * lam * poly)


def s8_entries(p: S8Params) -> ExpSumEntries:
    lam, x, k, al = p.lam, p.x, p.k, p.alpha
    q = 1 / lam
    return ExpSumEntries(
        terms={"A": (((al, x), (lam ** 2 + 1, q)),),
               "B": (((al * x, x), (lam ** 2 - 1, q)),),
               "C": (((k, q),),)},
        period={"A": 1, "B": 1, "C": 1},
        singles={"D": k * lam},
    )


def _negativity_witness(p: S8Params, i_max: int = 100000) -> dict:
    lam = p.lam
    if p.k == 0:
        return {"interval": "D", "index": None, "value": 0.0,
                "reason": "c_i = d = 0, so the D equation forces every entry to vanish"}
    if p.k < 0:
        # rescale by -1 so that c_i > 0; then -a_i -> -(lam^2+1) lam^-i dominates since x < 1/lam
        i = 0
        while i <= i_max and p.alpha * (p.x * lam) ** i + lam ** 2 + 1 <= 0:
            i += 1
        val = -(p.alpha * p.x ** i + (lam ** 2 + 1) * lam ** (-i))
        return {"interval": f"A_{i}", "index": i, "value": val,
                "reason": "lam^3-lam^2-lam-1 < 0: after scaling c_0 > 0 the term "
                          "-(lam^2+1) lam^-i dominates a_i since x < 1/lam"}
    # alpha < 0 and x > 1/lam: a_i = lam^-i (alpha (x lam)^i + lam^2 + 1) turns negative
    i = 0
    while i <= i_max:
        if p.alpha * (p.x * lam) ** i + lam ** 2 + 1 < 0:
            val = p.alpha * p.x ** i + (lam ** 2 + 1) * lam ** (-i)
            return {"interval": f"A_{i}", "index": i, "value": val,
                    "reason": "alpha < 0 while x > 1/lam, so alpha x^i dominates"}
        i += 1
    return {"reason": "alpha < 0 but no negative a_i located", "index": None}


def solve_closed_form_s8(lam: float, window: int = 40) -> oc.EigenOutcome:
    if not lam > 1:
        raise DomainError(f"lambda must exceed 1, got {lam}")
    p = s8_params(lam)
    if p.alpha < 0 or p.k <= 0:
        w = _negativity_witness(p)
        w.update(alpha=p.alpha, x=p.x)
        return oc.EigenOutcome(oc.NONE, lam, witness=w,
                               certificate="closed-form sign analysis of the general solution",
                               scaling="c_0 = lam^3-lam^2-lam-1")
    entries = s8_entries(p)
    from ..mapspec.gallery import load
    from ..mapspec.transitions import compile_transitions
    from .residual import residual_check
    spec = load("s8-interval")
    res = residual_check(compile_transitions(spec), lam, entries, window)
    return oc.EigenOutcome(
        oc.EXISTS_UNIQUE, lam, entries, summability=oc.SUMMABLE,
        scaling="c_0 = lam^3-lam^2-lam-1",
        certificate="closed form; alpha >= 0 and x > 0 give positive entries for every i",
        residual=res, witness={"alpha": p.alpha, "x": p.x})


def propagate_s8(lam: float, n: int = 26, depth: int = 200) -> dict:
    """Entries from a numeric solve of the system, independent of the closed form.

    The three-term recurrence a_{i+2} = lam a_i - (lam+1) a_{i+1} - c_i (1+lam^-2)
    is run backwards from zeros at ``depth`` (suppressing the growing mode), and
    the remaining decaying homogeneous mode is fixed by the D equation.
    """
    k = cubic_k(lam)
    c = k * lam ** -np.arange(depth + 2, dtype=float)
    p = np.zeros(depth + 2)
    for i in range(depth - 1, -1, -1):
        p[i] = (p[i + 2] + (lam + 1) * p[i + 1] + c[i] * (1 + lam ** -2)) / lam
    x = positive_quadratic_root(lam + 1, -lam)
    sum_c = k / (1 - 1 / lam)
    lhs = lam ** 2 * k - lam * k - sum_c - sum_c / lam
    beta = (lhs - (2 * p[:depth].sum() - p[0])) / (2 / (1 - x) - 1)
    a = p + beta * x ** np.arange(depth + 2, dtype=float)
    b = a[1:] + c[:-1] / lam
    return {"A": a[:n], "B": b[:n], "C": c[:n], "D": k * lam}


__all__ = ["S8Params", "lambda_min", "propagate_s8", "s8_entries", "s8_params",
           "solve_closed_form_s8", "tribonacci_root"]

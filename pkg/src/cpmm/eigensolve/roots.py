"""Bracketed bisection for the scalar roots used by the solvers."""
from __future__ import annotations

import math

from scipy.optimize import bisect

from ..errors import NoBracket

XTOL = 1e-12


def scan_bracket(f, start: float, stop: float, step: float = 1.0) -> tuple[float, float]:
    """First [a, a+step] with a sign change of f, scanning from ``start``."""
    a, fa = start, f(start)
    while a < stop:
        b = min(a + step, stop)
        fb = f(b)
        if fa == 0:
            return a, a
        if fa * fb <= 0:
            return a, b
        a, fa = b, fb
    raise NoBracket(f"no sign change of f on [{start}, {stop}]")


def root_in(f, a: float, b: float) -> float:
    if a == b:
        return a
    return bisect(f, a, b, xtol=XTOL * 1e-2, rtol=8.9e-16, maxiter=400)


def scan_root(f, start: float, stop: float, step: float = 1.0) -> float:
    return root_in(f, *scan_bracket(f, start, stop, step))


def positive_quadratic_root(b: float, c: float) -> float:
    """Positive root of x^2 + b x + c with c < 0, by bisection on [0, 1 + |b| + |c|]."""
    f = lambda x: x * x + b * x + c
    return root_in(f, 0.0, 1.0 + abs(b) + abs(c))


def stable_positive_quadratic_root(b: float, c: float) -> float:
    """Same root from the closed form, avoiding cancellation."""
    disc = math.sqrt(b * b - 4 * c)
    return (-2 * c) / (b + disc) if b > 0 else (-b + disc) / 2

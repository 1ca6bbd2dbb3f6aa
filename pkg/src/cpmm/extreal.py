"""Extended real line [-inf, inf] on top of IEEE doubles.

Finite coordinates are plain floats and the two infinities are
``math.inf`` / ``-math.inf``.  The helpers here differ from bare float
arithmetic in one respect: indeterminate forms raise
:class:`~cpmm.errors.IndeterminateForm` instead of quietly producing NaN.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import IndeterminateForm

INF = math.inf
NINF = -math.inf


def ext(x) -> float:
    """Coerce ``x`` (number or the strings 'inf'/'-inf') to an extended real."""
    v = float(x)
    if math.isnan(v):
        raise IndeterminateForm("NaN is not an extended real")
    return v


def is_infinite(x: float) -> bool:
    return math.isinf(x)


def add(x: float, y: float) -> float:
    if math.isinf(x) and math.isinf(y) and (x > 0) != (y > 0):
        raise IndeterminateForm(f"{x} + {y}")
    return x + y


def sub(x: float, y: float) -> float:
    if math.isinf(x) and math.isinf(y) and (x > 0) == (y > 0):
        raise IndeterminateForm(f"{x} - {y}")
    return x - y


def mul(x: float, y: float) -> float:
    if (math.isinf(x) and y == 0) or (math.isinf(y) and x == 0):
        raise IndeterminateForm(f"{x} * {y}")
    return x * y


def apply_affine(slope: float, intercept: float, x: float) -> float:
    """Return ``slope * x + intercept`` with sign-correct infinities."""
    if math.isinf(x):
        if slope == 0:
            raise IndeterminateForm("zero slope applied to an infinite point")
        return x if slope > 0 else -x
    return add(slope * x, intercept)


def invert_affine(slope: float, intercept: float, y: float) -> float:
    """Inverse of :func:`apply_affine` for a nonzero slope."""
    if slope == 0:
        raise IndeterminateForm("zero slope is not invertible")
    if math.isinf(y):
        return y if slope > 0 else -y
    return sub(y, intercept) / slope


def fmt(x: float, digits: int = 12) -> str:
    """Render for file output: 12 significant digits, infinities as inf/-inf."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.{digits}g}"


@dataclass(frozen=True)
class ExtInterval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = ext(self.lo), ext(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> float:
        return length(self)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def __str__(self):
        return f"[{fmt(self.lo)}, {fmt(self.hi)}]"


def length(iv: ExtInterval) -> float:
    if math.isinf(iv.lo) or math.isinf(iv.hi):
        return INF
    return iv.hi - iv.lo

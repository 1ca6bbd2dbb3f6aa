"""Exact nested-intersection lengths for the ``s11-pcws`` map f and its slope-2 twin g."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..mapspec.expr import to_float
from ..mapspec.model import BasicIntervalId, MapSpec


@dataclass
class NestedLengths:
    K: int
    x: list  # x_k, k = 1..K: left end of the f-nested set inside A_0, from the left end of A_0
    y: list  # y_k for g
    x_formula: list
    y_formula: list
    f_lengths: list  # |A_0 ∩ f^-1 A_1 ∩ ... ∩ f^-k A_k|
    g_lengths: list
    products: list  # prod_{j<k} (2^(j+1)+1)

    @property
    def gap(self) -> Fraction:
        return self.x[-1] - self.y[-1]


def _exact(spec: MapSpec, node, i: int) -> Fraction:
    return Fraction(to_float(spec.value(node, i=i))).limit_denominator(1 << 62)


def _pullback(spec: MapSpec, K: int):
    """Left end of {x in A_0 : f^j x in A_j, j <= k} relative to A_0, and its length."""
    geom = spec.geom
    br = lambda i: geom.branch("A", i)
    lengths = lambda i: Fraction(geom.hi(BasicIntervalId("A", i)) - geom.lo(BasicIntervalId("A", i)))
    b_len = lambda i: Fraction(geom.hi(BasicIntervalId("B", i)) - geom.lo(BasicIntervalId("B", i)))
    lefts, sizes = [], []
    for k in range(1, K + 1):
        left, size = Fraction(0), lengths(k)
        for j in range(k - 1, -1, -1):
            s1, s2 = (_exact(spec, s, j) for s in br(j).slopes)
            # second piece of A_j starts after the first piece covers B_j
            left = b_len(j) / s1 + left / s2
            size = size / s2
        lefts.append(left)
        sizes.append(size)
    return lefts, sizes


def lengths_nested_intersection_s11(K: int) -> NestedLengths:
    if K < 1:
        raise ValueError("K must be at least 1")
    from ..mapspec.gallery import load
    xs, f_len = _pullback(load("s11-pcws"), K)
    ys, g_len = _pullback(load("s11-g"), K)
    x_formula, y_formula, products = [], [], []
    prod = Fraction(1)
    for k in range(1, K + 1):
        prod /= 2 ** (k - 1) + 1
        x_formula.append(2 - 2 * prod)
        y_formula.append(2 - Fraction(2 ** k + 1, 2 ** k))
        products.append(1 / prod)
    return NestedLengths(K, xs, ys, x_formula, y_formula, f_len, g_len, products)


__all__ = ["NestedLengths", "lengths_nested_intersection_s11"]

"""Eigenvector entry generators with closed-form range sums."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import TailNotSummable
from ..mapspec.model import INTEGERS, NATURALS, SINGLETON, BasicIntervalId, MapSpec


class Entries:
    """v_I for basic intervals I; subclasses supply ``value`` and ``range_sum``."""

    def value(self, bid: BasicIntervalId) -> float:
        raise NotImplementedError

    def __call__(self, bid: BasicIntervalId) -> float:
        return self.value(bid)

    def values(self, ids) -> np.ndarray:
        return np.array([self.value(b) for b in ids], dtype=float)

    def range_sum(self, family: str, lo, hi) -> float:
        """Sum of v over whole intervals ``family_i`` with lo <= i <= hi (bounds may be infinite)."""
        raise NotImplementedError

    def scaled(self, factor: float) -> "Entries":
        raise NotImplementedError


@dataclass
class ExpSumEntries(Entries):
    """v(F, i) = sum_j c_j * rho_j**i over the terms of i's residue class.

    ``terms[F]`` is a tuple indexed by ``i mod period[F]`` of tuples of
    (c, rho) with rho > 0.  Singletons live in ``singles``.
    """

    terms: dict = field(default_factory=dict)
    period: dict = field(default_factory=dict)
    singles: dict = field(default_factory=dict)

    def value(self, bid: BasicIntervalId) -> float:
        if bid.sub is not None:
            raise KeyError(f"no entry for refined piece {bid}")
        if bid.index is None:
            return float(self.singles[bid.family])
        p = self.period.get(bid.family, 1)
        total = 0.0
        for c, rho in self.terms[bid.family][bid.index % p]:
            if c:
                total += c * _pow(rho, bid.index)
        return total

    def range_sum(self, family: str, lo, hi) -> float:
        if family in self.singles:
            return float(self.singles[family])
        if lo > hi:
            return 0.0
        p = self.period.get(family, 1)
        total = 0.0
        for r in range(p):
            # indices i = first + p*t within [lo, hi]
            for c, rho in self.terms[family][r]:
                if c == 0:
                    continue
                total += c * _geometric_class_sum(rho, p, r, lo, hi, family)
        return total

    def scaled(self, factor: float) -> "ExpSumEntries":
        return ExpSumEntries(
            {f: tuple(tuple((c * factor, rho) for c, rho in cls) for cls in v) for f, v in self.terms.items()},
            dict(self.period),
            {k: v * factor for k, v in self.singles.items()},
        )


def _pow(rho: float, i: int) -> float:
    try:
        return rho ** i
    except OverflowError:
        return math.inf


def _geometric_class_sum(rho, p, r, lo, hi, family) -> float:
    """Sum of rho**i over i = r mod p in [lo, hi]."""
    q = rho ** p
    if math.isinf(lo) and math.isinf(hi):
        raise TailNotSummable(f"two-sided infinite sum over {family}")
    if math.isinf(hi):
        first = lo + ((r - lo) % p)
        if q >= 1:
            raise TailNotSummable(f"right tail of {family} diverges (ratio {rho:.6g})")
        return _pow(rho, first) / (1 - q)
    if math.isinf(lo):
        last = hi - ((hi - r) % p)
        if q <= 1:
            raise TailNotSummable(f"left tail of {family} diverges (ratio {rho:.6g})")
        return _pow(rho, last) / (1 - 1 / q)
    first = lo + ((r - lo) % p)
    if first > hi:
        return 0.0
    n = (hi - first) // p + 1
    if abs(q - 1) < 1e-14:
        return n * _pow(rho, first)
    if q < 1:
        return _pow(rho, first) * (1 - q ** n) / (1 - q)
    last = first + p * (n - 1)
    return _pow(rho, last) * (1 - q ** (-n)) / (1 - 1 / q)


@dataclass
class TableEntries(Entries):
    """Finite table of entries, e.g. from a truncated eigenvector."""

    table: dict = field(default_factory=dict)

    def value(self, bid: BasicIntervalId) -> float:
        return float(self.table[bid])

    def range_sum(self, family: str, lo, hi) -> float:
        if math.isinf(lo) or math.isinf(hi):
            raise TailNotSummable("a finite table cannot sum an infinite tail")
        total = 0.0
        for b, v in self.table.items():
            if b.family == family and (b.index is None or lo <= b.index <= hi):
                total += v
        return total

    def scaled(self, factor: float) -> "TableEntries":
        return TableEntries({k: v * factor for k, v in self.table.items()})


# -- order-aware sums ---------------------------------------------------------

def point_key(spec: MapSpec, bid: BasicIntervalId | None, side: str) -> tuple:
    """Key of a boundary point for :func:`ordered_sum`.

    ``side`` is ``"lo"`` or ``"hi"`` of interval ``bid``.  Whole-interval keys
    end in -1, so offsets of +-0.5 sit strictly between neighbouring keys.
    """
    k = spec.order_key(bid)
    return (k[0], k[1], k[2], k[3] - 0.5 if side == "lo" else k[3] + 0.5)


def star_key(segment: int) -> tuple:
    return (segment, 0, 0, 0)


def family_index_range(spec: MapSpec, family: str, key_lo: tuple, key_hi: tuple):
    """Indices i with key_lo < key(family_i) < key_hi as an inclusive (lo, hi), or None."""
    pos, member, direction = spec.segment_of[family]
    kind = spec.family(family).kind

    def above(bound, t):  # key(t) > bound
        return (pos, t, member, -1) > bound

    def below(bound, t):
        return (pos, t, member, -1) < bound

    if kind == SINGLETON:
        return (None, None) if above(key_lo, 0) and below(key_hi, 0) else None
    # smallest admissible t
    if key_lo[0] < pos:
        t_lo = -math.inf
    elif key_lo[0] > pos:
        return None
    else:
        t_lo = key_lo[1] if above(key_lo, key_lo[1]) else key_lo[1] + 1
    if key_hi[0] > pos:
        t_hi = math.inf
    elif key_hi[0] < pos:
        return None
    else:
        t_hi = key_hi[1] if below(key_hi, key_hi[1]) else key_hi[1] - 1
    if direction > 0:
        lo, hi = t_lo, t_hi
    else:
        lo, hi = -t_hi, -t_lo
    if kind == NATURALS:
        lo = max(lo, 0)
    if lo > hi:
        return None
    return lo, hi


def ordered_sum(spec: MapSpec, entries: Entries, key_lo: tuple, key_hi: tuple,
                radius: float = math.inf) -> float:
    """Sum of v_J over whole intervals J strictly between two keys, |index| <= radius."""
    total = 0.0
    for fam in spec.families:
        rng = family_index_range(spec, fam.name, key_lo, key_hi)
        if rng is None:
            continue
        if fam.kind == SINGLETON:
            total += entries.range_sum(fam.name, 0, 0)
            continue
        lo, hi = rng
        lo, hi = max(lo, -radius), min(hi, radius)
        if lo > hi:
            continue
        total += entries.range_sum(fam.name, lo, hi)
    return total


def total_sum(spec: MapSpec, entries: Entries) -> float:
    return ordered_sum(spec, entries, (-1, 0, 0, 0), (len(spec.order), 0, 0, 0))


__all__ = ["Entries", "ExpSumEntries", "TableEntries", "family_index_range", "ordered_sum",
           "point_key", "star_key", "total_sum"]

"""Residuals of Tv = lambda v evaluated row by row from the transition rules."""
from __future__ import annotations

import math

from ..mapspec.model import BasicIntervalId
from ..mapspec.transitions import TargetSet, TransitionRuleSet
from .entries import Entries, ordered_sum, total_sum


def row_sum(T: TransitionRuleSet, entries: Entries, bid: BasicIntervalId) -> float:
    """(Tv)_I, with infinite rows summed in closed form."""
    spec = T.spec
    ts: TargetSet = T.targets(bid)
    if ts.everything:
        return total_sum(spec, entries)
    total = 0.0
    for fam, lo, hi in ts.ranges:
        if lo is None:
            total += entries.range_sum(fam, 0, 0)
        else:
            total += entries.range_sum(fam, lo, hi)
    for ka, kb in ts.spans:
        lo = (ka[0], ka[1], ka[2], ka[3] - 0.5)
        hi = (kb[0], kb[1], kb[2], kb[3] + 0.5)
        total += ordered_sum(spec, entries, lo, hi)
    return total


def window_ids(spec, window) -> list[BasicIntervalId]:
    ids = spec.geom.ids_by_radius(window) if isinstance(window, int) else window
    return list(dict.fromkeys(b.whole() for b in ids))


def residual_check(T: TransitionRuleSet, lam: float, entries: Entries, window) -> float:
    """max_I |(Tv)_I - lam v_I| / max(1, lam |v_I|) over ``window`` (id list or index radius).

    The scaling keeps the check meaningful for geometrically growing entries and
    is the plain absolute residual wherever lam |v_I| <= 1.
    """
    worst = 0.0
    for bid in window_ids(T.spec, window):
        bid = bid.whole()
        lv = lam * entries(bid)
        r = abs(row_sum(T, entries, bid) - lv) / max(1.0, abs(lv))
        if math.isnan(r):
            return math.inf
        worst = max(worst, r)
    return worst


def min_entry(entries: Entries, ids) -> float:
    return min(entries(b.whole()) for b in ids)


__all__ = ["min_entry", "residual_check", "row_sum", "window_ids"]

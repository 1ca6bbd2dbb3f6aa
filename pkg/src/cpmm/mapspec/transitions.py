"""Rule-level 0-1 transition matrix T(I, J) = 1 iff f(I) contains J."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import UnboundedDrift, ValidationError
from .expr import to_float
from .model import INTEGERS, NATURALS, SINGLETON, BasicIntervalId, MapSpec

_DRIFT_SAMPLES = (32, 64)


@dataclass(frozen=True)
class TargetSet:
    """Union of ``all``, index ranges of families and order-key spans."""

    everything: bool = False
    ranges: tuple = ()  # (family, lo, hi); None index bounds for singletons
    spans: tuple = ()  # (key_lo, key_hi) over whole-interval order keys

    def contains(self, spec: MapSpec, bid: BasicIntervalId) -> bool:
        if self.everything:
            return True
        for fam, lo, hi in self.ranges:
            if fam == bid.family and (bid.index is None or lo <= bid.index <= hi):
                return True
        if self.spans:
            k = spec.order_key(bid.whole())
            return any(a <= k <= b for a, b in self.spans)
        return False


@dataclass
class TransitionRuleSet:
    spec: MapSpec
    source: str = "rules"  # or "geometry" when no transition lines are declared
    _cache: dict = field(default_factory=dict, repr=False)

    def targets(self, bid: BasicIntervalId) -> TargetSet:
        key = (bid.family, bid.index, bid.sub)
        hit = self._cache.get(key)
        if hit is None:
            if self.source == "rules":
                hit = rule_targets(self.spec, bid)
            else:
                hit = geometry_targets(self.spec, bid)
            self._cache[key] = hit
        return hit

    def entry(self, i: BasicIntervalId, j: BasicIntervalId) -> int:
        return int(self.targets(i).contains(self.spec, j))

    def successors(self, bid: BasicIntervalId, window) -> list:
        ts = self.targets(bid)
        return [j for j in window if ts.contains(self.spec, j)]

    @property
    def drift(self) -> tuple[float, float]:
        """(up, down): largest index increase / decrease along a transition
        between indexed intervals; ``inf`` when unbounded."""
        if "drift" not in self._cache:
            self._cache["drift"] = _drift(self)
        return self._cache["drift"]

    @property
    def drift_bound(self) -> float:
        up, down = self.drift
        return max(up, down)

    def loop_window(self, u: BasicIntervalId, n: int) -> list[BasicIntervalId]:
        """A finite id set containing every loop of length <= n through u."""
        spec = self.spec
        up, down = self.drift
        entry_top, entry_bottom = self._cache.get("entries") or _singleton_entries(self)
        self._cache["entries"] = (entry_top, entry_bottom)
        kinds = {f.kind for f in spec.families}
        # every indexed stretch of a loop ends at u or where it enters a singleton
        base_hi = -math.inf if u.index is None else u.index
        base_lo = math.inf if u.index is None else u.index
        if SINGLETON in kinds:
            base_hi = max(base_hi, entry_top)
            base_lo = min(base_lo, entry_bottom)
        if base_hi == -math.inf:
            base_hi, base_lo = 0, 0
        # a loop climbs at most ``up`` per step unless a singleton lets it jump,
        # and must come back down at most ``down`` per step
        climb = down if SINGLETON in kinds else min(up, down)
        if math.isinf(climb) or math.isinf(base_hi):
            raise UnboundedDrift("loops may climb to arbitrarily large indices")
        hi = int(base_hi + climb * n + climb)
        if INTEGERS in kinds:
            fall = up if SINGLETON in kinds else min(up, down)
            if math.isinf(fall) or math.isinf(base_lo):
                raise UnboundedDrift("loops may descend to arbitrarily negative indices")
            lo = int(base_lo - fall * n - fall)
        else:
            lo = 0
        out = []
        for fam in spec.families:
            if fam.kind == SINGLETON:
                out.extend(spec.geom.expand(BasicIntervalId(fam.name)))
                continue
            start = lo if fam.kind == INTEGERS else max(lo, 0)
            for i in range(start, hi + 1):
                out.extend(spec.geom.expand(BasicIntervalId(fam.name, i)))
        out.sort(key=spec.order_key)
        return out


def _bindings(bid):
    return {} if bid.index is None else {"i": bid.index}


def rule_targets(spec: MapSpec, bid: BasicIntervalId) -> TargetSet:
    whole = bid.whole()
    decl = None
    for t in spec.transitions:
        if t.family == whole.family and (t.when is None or spec.value(t.when, **_bindings(whole))):
            decl = t
            break
    if decl is None:
        raise ValidationError("rules", f"no transition rule applies to {whole}")
    everything = False
    ranges = []
    for term in decl.terms:
        if term.kind == "all":
            everything = True
        elif term.kind == "single":
            ranges.append((term.family, None, None))
        else:
            fam = spec.family(term.family)
            if term.lo is None:
                lo = 0 if fam.kind == NATURALS else -math.inf
            else:
                lo = int(round(to_float(spec.value(term.lo, **_bindings(whole)))))
            hi = math.inf if term.hi is None else int(round(to_float(spec.value(term.hi, **_bindings(whole)))))
            if fam.kind == NATURALS and lo < 0:
                raise ValidationError("range", f"rule for {whole} targets {term.family}_{lo}")
            ranges.append((term.family, lo, hi))
    return TargetSet(everything, tuple(ranges))


def geometry_targets(spec: MapSpec, bid: BasicIntervalId) -> TargetSet:
    spans = []
    for p in spec.geom.sub_pieces(bid):
        if p.first is None:
            return TargetSet(everything=True)
        spans.append((spec.order_key(p.first), spec.order_key(p.last)))
    return TargetSet(spans=tuple(spans))


def compile_transitions(spec: MapSpec) -> TransitionRuleSet:
    return TransitionRuleSet(spec, "rules" if spec.transitions else "geometry")


def truncate(T: TransitionRuleSet, window) -> tuple[np.ndarray, list]:
    """Principal submatrix of T on ``window`` with its row/column labels."""
    labels = list(window)
    n = len(labels)
    out = np.zeros((n, n), dtype=np.int8)
    for r, i in enumerate(labels):
        ts = T.targets(i)
        for c, j in enumerate(labels):
            if ts.contains(T.spec, j):
                out[r, c] = 1
    return out, labels


def _sample_sources(spec: MapSpec, radius: int):
    for fam in spec.families:
        if fam.kind == SINGLETON:
            continue
        for i in spec.iter_indices(fam.name, radius):
            yield BasicIntervalId(fam.name, i)


def _index_extent(spec: MapSpec, ts: TargetSet):
    """(min, max) target index over indexed families; None if no indexed target."""
    lo, hi = math.inf, -math.inf
    indexed = [f for f in spec.families if f.kind != SINGLETON]
    if ts.everything:
        if not indexed:
            return None
        return (-math.inf if any(f.kind == INTEGERS for f in indexed) else 0), math.inf
    for fam, a, b in ts.ranges:
        if a is None:
            continue
        lo, hi = min(lo, a), max(hi, b)
    for ka, kb in ts.spans:
        for f in indexed:
            pos, member, direction = spec.segment_of[f.name]
            if not (ka[0] <= pos <= kb[0]):
                continue
            # index bounds implied by the span inside this family's segment
            t_lo = ka[1] if ka[0] == pos else -math.inf
            t_hi = kb[1] if kb[0] == pos else math.inf
            idx = sorted([direction * t_lo, direction * t_hi])
            if f.kind == NATURALS:
                idx[0] = max(idx[0], 0)
            if idx[0] <= idx[1]:
                lo, hi = min(lo, idx[0]), max(hi, idx[1])
    if lo > hi:
        return None
    return lo, hi


def _drift(T: TransitionRuleSet):
    res = []
    for radius in _DRIFT_SAMPLES:
        up = down = -math.inf
        for src in _sample_sources(T.spec, radius):
            for sub in T.spec.geom.expand(src):
                ext = _index_extent(T.spec, T.targets(sub))
                if ext is None:
                    continue
                up = max(up, ext[1] - src.index)
                down = max(down, src.index - ext[0])
        res.append((max(up, 0), max(down, 0)))
    (u1, d1), (u2, d2) = res
    return (u1 if u1 == u2 else math.inf), (d1 if d1 == d2 else math.inf)


def _singleton_entries(T: TransitionRuleSet):
    """Extreme indices of indexed sources whose targets include a singleton."""
    singles = [f.name for f in T.spec.families if f.kind == SINGLETON]
    if not singles:
        return -math.inf, math.inf
    res = []
    for radius in _DRIFT_SAMPLES:
        top, bottom = -math.inf, math.inf
        for src in _sample_sources(T.spec, radius):
            ts = T.targets(src)
            if any(ts.contains(T.spec, BasicIntervalId(s)) for s in singles):
                top, bottom = max(top, src.index), min(bottom, src.index)
        res.append((top, bottom))
    (t1, b1), (t2, b2) = res
    return (t1 if t1 == t2 else math.inf), (b1 if b1 == b2 else -math.inf)

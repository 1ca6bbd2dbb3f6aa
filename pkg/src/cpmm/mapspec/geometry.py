"""Numeric geometry of a MapSpec: endpoints, affine pieces, point location."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DomainError, UndefinedAtPartitionPoint, ValidationError
from .expr import to_float
from .model import INTEGERS, NATURALS, SINGLETON, BasicIntervalId, MapSpec, Target

_SEARCH_CAP = 1 << 20


@dataclass(frozen=True)
class Piece:
    """Affine piece ``y = y0 + slope * (x - x0)`` on ``[x0, x1]``."""

    x0: float
    x1: float
    y0: float
    slope: float
    tlo: float
    thi: float
    first: BasicIntervalId | None  # None means the whole space
    last: BasicIntervalId | None
    group: int

    def __call__(self, x: float) -> float:
        return self.y0 + self.slope * (x - self.x0)

    @property
    def y1(self) -> float:
        return self(self.x1)

    def inverse(self, y: float) -> float:
        return self.x0 + (y - self.y0) / self.slope


def _tol(*vals) -> float:
    scale = max([1.0] + [abs(v) for v in vals if math.isfinite(v)])
    return 1e-9 * scale


class Geometry:
    def __init__(self, spec: MapSpec):
        self.spec = spec
        self._ends: dict = {}
        self._pieces: dict = {}
        self._branch: dict = {}

    # -- endpoints -------------------------------------------------------------
    def endpoints(self, bid: BasicIntervalId) -> tuple[float, float]:
        if bid.sub is not None:
            groups = self.groups(bid.whole())
            ps = groups[bid.sub]
            return ps[0].x0, ps[-1].x1
        key = (bid.family, bid.index)
        hit = self._ends.get(key)
        if hit is None:
            fam = self.spec.family(bid.family)
            b = {} if bid.index is None else {"i": bid.index}
            hit = (to_float(self.spec.value(fam.lo, **b)), to_float(self.spec.value(fam.hi, **b)))
            self._ends[key] = hit
        return hit

    def lo(self, bid):
        return self.endpoints(bid)[0]

    def hi(self, bid):
        return self.endpoints(bid)[1]

    # -- branches --------------------------------------------------------------
    def branch(self, family: str, index):
        key = (family, index)
        if key in self._branch:
            return self._branch[key]
        found = None
        for b in self.spec.branches:
            if b.family != family:
                continue
            if b.when is None or self.spec.value(b.when, **({} if index is None else {"i": index})):
                found = b
                break
        self._branch[key] = found
        return found

    def resolve(self, pattern, index) -> BasicIntervalId:
        if pattern.index is None:
            return BasicIntervalId(pattern.family)
        val = self.spec.value(pattern.index, **({} if index is None else {"i": index}))
        j = int(round(to_float(val)))
        return BasicIntervalId(pattern.family, j)

    def target_ids(self, target: Target, index):
        """(first, last) ids spanned by a branch target, leftmost first."""
        if target.is_all:
            return None, None
        a, b = self.resolve(target.first, index), self.resolve(target.last, index)
        for t in (a, b):
            if t.family not in self.spec.family_names or not self.spec.index_in_range(t.family, t.index):
                raise ValidationError("range", f"target {t} is out of range")
        if self.spec.order_key(a) > self.spec.order_key(b):
            a, b = b, a
        return a, b

    def target_hull(self, target: Target, index) -> tuple[float, float, object, object]:
        first, last = self.target_ids(target, index)
        if first is None:
            lo, hi = self.spec.space_values
        else:
            lo, hi = self.lo(first), self.hi(last)
        return lo, hi, first, last

    def pieces(self, bid: BasicIntervalId) -> list[Piece]:
        """Affine pieces of the branch on a whole basic interval."""
        bid = bid.whole()
        key = (bid.family, bid.index)
        hit = self._pieces.get(key)
        if hit is not None:
            return hit
        br = self.branch(bid.family, bid.index)
        if br is None:
            raise ValidationError("branch", f"no branch declared for {bid}")
        a, b = self.endpoints(bid)
        hulls = [self.target_hull(t, bid.index) for t in br.targets]
        signs, lengths, slopes = [], [], []
        explicit = [not isinstance(s, str) for s in br.slopes]
        if any(explicit) and not all(explicit):
            raise ValidationError("branch", f"{bid}: mix of bare signs and explicit slopes")
        if all(explicit):
            for s, (tlo, thi, _, _) in zip(br.slopes, hulls):
                sv = to_float(self.spec.value(s, **({} if bid.index is None else {"i": bid.index})))
                if sv == 0:
                    raise ValidationError("branch", f"{bid}: zero slope")
                signs.append(1 if sv > 0 else -1)
                slopes.append(sv)
                lengths.append((thi - tlo) / abs(sv))
        else:
            total = sum(thi - tlo for tlo, thi, _, _ in hulls)
            if not (a < b and total > 0):
                raise DomainError(f"{bid} or its image is below double precision resolution")
            for s, (tlo, thi, _, _) in zip(br.slopes, hulls):
                sg = 1 if s == "+" else -1
                signs.append(sg)
                slopes.append(sg * total / (b - a))
                lengths.append((b - a) * (thi - tlo) / total)
        out = []
        x = a
        group = 0
        for k, ((tlo, thi, first, last), sv, L) in enumerate(zip(hulls, slopes, lengths)):
            if k and signs[k] != signs[k - 1]:
                group += 1
            x1 = x + L
            if k == len(hulls) - 1 and abs(x1 - b) <= _tol(a, b):
                x1 = b
            y0 = tlo if sv > 0 else thi
            out.append(Piece(x, x1, y0, sv, tlo, thi, first, last, group))
            x = x1
        self._pieces[key] = out
        return out

    def fill_defect(self, bid: BasicIntervalId) -> float:
        ps = self.pieces(bid)
        return ps[-1].x1 - self.hi(bid.whole())

    def groups(self, bid: BasicIntervalId) -> list[list[Piece]]:
        ps = self.pieces(bid)
        out: list[list[Piece]] = []
        for p in ps:
            if p.group == len(out):
                out.append([])
            out[p.group].append(p)
        return out

    def is_refined(self, bid: BasicIntervalId) -> bool:
        br = self.branch(bid.family, bid.index)
        if br is None:
            return False
        s = [(1 if (x == "+" if isinstance(x, str) else
                    to_float(self.spec.value(x, **({} if bid.index is None else {"i": bid.index})))
                    > 0) else -1) for x in br.slopes]
        return any(s[k] != s[k - 1] for k in range(1, len(s)))

    def expand(self, bid: BasicIntervalId) -> list[BasicIntervalId]:
        if bid.sub is not None or not self.is_refined(bid):
            return [bid]
        return [BasicIntervalId(bid.family, bid.index, g) for g in range(len(self.groups(bid)))]

    def sub_pieces(self, bid: BasicIntervalId) -> list[Piece]:
        if bid.sub is None:
            return self.pieces(bid)
        return self.groups(bid.whole())[bid.sub]

    def orientation(self, bid: BasicIntervalId) -> int:
        ps = self.sub_pieces(bid)
        return 1 if ps[0].slope > 0 else -1

    # -- enumeration -------------------------------------------------------------
    def ids_by_radius(self, radius: int) -> list[BasicIntervalId]:
        out = []
        for fam in self.spec.families:
            for i in self.spec.iter_indices(fam.name, radius):
                out.extend(self.expand(BasicIntervalId(fam.name, i)))
        out.sort(key=self.spec.order_key)
        return out

    def id_window(self, size: int) -> list[BasicIntervalId]:
        """At most ``size`` ids made of complete |index| shells (singletons
        first), ordered by shell, declaration order of the family, index and
        sub-piece.  A partial shell is used only if the first shell is too big."""
        if size <= 0:
            return []
        fampos = {f.name: k for k, f in enumerate(self.spec.families)}
        ids = []
        for fam in self.spec.families:
            for i in self.spec.iter_indices(fam.name, size):
                ids.extend(self.expand(BasicIntervalId(fam.name, i)))

        def shell(b):
            return -1 if b.index is None else abs(b.index)

        ids.sort(key=lambda b: (shell(b), fampos[b.family], 0 if b.index is None else b.index,
                                -1 if b.sub is None else b.sub))
        if len(ids) <= size:
            return ids
        cut = size
        while cut > 0 and shell(ids[cut - 1]) == shell(ids[cut]):
            cut -= 1
        return ids[:cut] if cut > 0 else ids[:size]

    # -- point location ----------------------------------------------------------
    def _search(self, family: str, x: float):
        fam = self.spec.family(family)
        if fam.kind == SINGLETON:
            return [None]
        direction = self.spec.segment_of[family][2] or 1
        lo = lambda i: self.lo(BasicIntervalId(family, i))
        left_of = lambda i: lo(i) <= x  # monotone in direction*i
        if fam.kind == NATURALS:
            if direction > 0:
                if not left_of(0):
                    return []
                base, step = 0, 1
                while base + step < _SEARCH_CAP and left_of(base + step):
                    base, step = base + step, step * 2
                hi_i = min(base + step, _SEARCH_CAP)
                a, b = base, hi_i
                while b - a > 1:
                    m = (a + b) // 2
                    a, b = (m, b) if left_of(m) else (a, m)
                cand = a
            else:
                if left_of(0):
                    cand = 0
                else:
                    step = 1
                    while step < _SEARCH_CAP and not left_of(step):
                        step *= 2
                    if step >= _SEARCH_CAP:
                        return []
                    a, b = step // 2, step
                    while b - a > 1:
                        m = (a + b) // 2
                        a, b = (a, m) if left_of(m) else (m, b)
                    cand = b
        else:
            t_left = lambda t: left_of(direction * t)
            if t_left(0):
                a, step = 0, 1
                while step < _SEARCH_CAP and t_left(step):
                    a, step = step, step * 2
                b = step
                if step >= _SEARCH_CAP:
                    return []
            else:
                b, step = 0, 1
                while step < _SEARCH_CAP and not t_left(-step):
                    b, step = -step, step * 2
                if step >= _SEARCH_CAP:
                    return []
                a = -step
            while b - a > 1:
                m = (a + b) // 2
                a, b = (m, b) if t_left(m) else (a, m)
            cand = direction * a
        return [c for c in (cand - 1, cand, cand + 1) if self.spec.index_in_range(family, c)]

    def locate(self, x: float, tol: float | None = None) -> list[BasicIntervalId]:
        """Basic intervals (sub-pieces where refined) whose closure contains x."""
        out = []
        for fam in self.spec.families:
            for i in self._search(fam.name, x):
                bid = BasicIntervalId(fam.name, i)
                a, b = self.endpoints(bid)
                t = _tol(a, b) if tol is None else tol
                if a - t <= x <= b + t:
                    for sub in self.expand(bid):
                        sa, sb = self.endpoints(sub)
                        if sa - t <= x <= sb + t:
                            out.append(sub)
        out.sort(key=self.spec.order_key)
        return out

    def evaluate(self, x: float) -> float:
        spec = self.spec
        x = float(x)
        for fx in spec.fixed_values:
            if x == fx or (math.isfinite(fx) and abs(x - fx) <= 1e-15 * max(1.0, abs(fx))):
                return fx
        for a, b in spec.image_values:
            if x == a:
                return b
        slo, shi = spec.space_values
        if not (slo <= x <= shi):
            raise DomainError(f"x = {x} lies outside the space [{slo}, {shi}]")
        ids = self.locate(x)
        if not ids:
            raise UndefinedAtPartitionPoint(f"x = {x} is not inside any basic interval "
                                            "and has no declared image")
        values = []
        for bid in ids:
            ps = self.sub_pieces(bid)
            t = _tol(ps[0].x0, ps[-1].x1)
            for p in ps:
                if p.x0 - t <= x <= p.x1 + t:
                    values.append(p(min(max(x, p.x0), p.x1)))
        vals = sorted(values)
        spread = vals[-1] - vals[0]
        if spread > _tol(*vals) * 10:
            if spec.continuity == "piecewise":
                raise UndefinedAtPartitionPoint(
                    f"x = {x} is a partition point with one-sided values {vals[0]} and {vals[-1]}")
        return values[0]


def evaluate_map(spec: MapSpec, x: float) -> float:
    return spec.geom.evaluate(x)

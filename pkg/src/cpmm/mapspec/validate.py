"""Structural checks run on a sample of basic intervals around index 0."""
from __future__ import annotations

import math

from ..errors import CPMMError, ValidationError
from .expr import free_names, to_float
from .geometry import _tol
from .model import INTEGERS, NATURALS, SINGLETON, BasicIntervalId, MapSpec

SAMPLE_RADIUS = 24


def _names_ok(spec: MapSpec) -> None:
    names = [f.name for f in spec.families]
    if len(set(names)) != len(names):
        raise ValidationError("order", "duplicate family names")
    ordered = [f for seg in spec.order for f in seg.families]
    if sorted(ordered) != sorted(names):
        raise ValidationError("order", "the order pattern must mention every family exactly once")
    for seg in spec.order:
        if seg.is_star:
            continue
        kinds = {spec.family(f).kind for f in seg.families}
        if len(kinds) != 1:
            raise ValidationError("order", f"mixed index kinds in group {seg.families}")
        kind = kinds.pop()
        if (kind == SINGLETON) != (seg.direction == 0):
            raise ValidationError("order", f"group {seg.families} needs a direction iff indexed")
        if kind == SINGLETON and len(seg.families) > 1:
            raise ValidationError("order", "singletons cannot be interleaved")
    known = set(spec.env) | {"i", "inf"}
    for f in spec.families:
        for node in (f.lo, f.hi) + tuple(f.accumulates):
            extra = free_names(node) - known
            if extra:
                raise ValidationError("order", f"family {f.name} uses undefined names {sorted(extra)}")
    for b in spec.branches + spec.transitions:
        if b.family not in names:
            raise ValidationError("branch", f"branch or rule for unknown family {b.family}")


def _successor(spec: MapSpec, bid: BasicIntervalId):
    """Next whole interval to the right in the order pattern, or None at a star/end."""
    pos, member, direction = spec.segment_of[bid.family]
    seg = spec.order[pos]
    if bid.index is not None:
        if member + 1 < len(seg.families):
            return BasicIntervalId(seg.families[member + 1], bid.index)
        nxt = bid.index + direction
        if spec.index_in_range(seg.families[0], nxt):
            return BasicIntervalId(seg.families[0], nxt)
    if pos + 1 >= len(spec.order):
        return None
    nseg = spec.order[pos + 1]
    if nseg.is_star:
        return None
    fam = spec.family(nseg.families[0])
    if fam.kind == SINGLETON:
        return BasicIntervalId(fam.name)
    if fam.kind == NATURALS and nseg.direction > 0:
        return BasicIntervalId(fam.name, 0)
    return None


def sample_ids(spec: MapSpec, radius: int = SAMPLE_RADIUS) -> list[BasicIntervalId]:
    out = []
    for fam in spec.families:
        for i in spec.iter_indices(fam.name, radius):
            out.append(BasicIntervalId(fam.name, i))
    out.sort(key=spec.order_key)
    return out


def validate_spec(spec: MapSpec, radius: int = SAMPLE_RADIUS) -> None:
    """Raise :class:`ValidationError` naming the first violated invariant."""
    try:
        _validate(spec, radius)
    except ValidationError:
        raise
    except (KeyError, ValueError, ZeroDivisionError, OverflowError) as e:
        raise ValidationError("range", f"cannot evaluate the spec: {e}") from None


def _validate(spec: MapSpec, radius: int) -> None:
    _names_ok(spec)
    geom = spec.geom
    slo, shi = spec.space_values
    if not slo < shi:
        raise ValidationError("order", "space must have lo < hi")
    ids = sample_ids(spec, radius)
    for bid in ids:
        a, b = geom.endpoints(bid)
        if not a < b:
            raise ValidationError("order", f"{bid} has lo >= hi ({a} >= {b})")
        if a < slo - _tol(slo) or b > shi + _tol(shi):
            raise ValidationError("range", f"{bid} = [{a}, {b}] escapes the space")
    for x, y in zip(ids, ids[1:]):
        ax, bx = geom.endpoints(x)
        ay, by = geom.endpoints(y)
        if bx > ay + _tol(bx, ay):
            raise ValidationError("overlap", f"intervals {x} and {y} overlap "
                                  f"([{ax}, {bx}] and [{ay}, {by}])")
    for x in ids:
        y = _successor(spec, x)
        if y is not None and (y.index is None or abs(y.index) <= radius):
            if abs(geom.hi(x) - geom.lo(y)) > _tol(geom.hi(x)):
                raise ValidationError("order", f"{x} and {y} should abut but leave a gap")
    # accumulation points must lie in the space
    for f in spec.families:
        for acc in f.accumulates:
            v = to_float(spec.value(acc))
            if not (slo <= v <= shi):
                raise ValidationError("range", f"accumulation point {v} of {f.name} escapes the space")
    # branch geometry
    for bid in ids:
        if geom.branch(bid.family, bid.index) is None:
            raise ValidationError("branch", f"no branch declared for {bid}")
        try:
            geom.pieces(bid)
        except ValidationError:
            raise
        defect = geom.fill_defect(bid)
        if abs(defect) > _tol(*geom.endpoints(bid)):
            raise ValidationError(
                "non-markov",
                f"branch on {bid} does not map onto whole target intervals "
                f"(pieces cover {defect:+.3g} beyond the interval)")
    # continuity at adjacent endpoints
    if spec.continuity == "global":
        for x in ids:
            y = _successor(spec, x)
            if y is None or (y.index is not None and abs(y.index) > radius):
                continue
            left = geom.pieces(x)[-1].y1
            right = geom.pieces(y)[0].y0
            if abs(left - right) > _tol(left, right) * 10:
                raise ValidationError("continuity",
                                      f"f jumps from {left} to {right} between {x} and {y}")
    # declared rules against geometry
    if spec.transitions:
        from .transitions import TransitionRuleSet
        rules = TransitionRuleSet(spec, "rules")
        geo = TransitionRuleSet(spec, "geometry")
        check = [s for b in ids for s in geom.expand(b)]
        for src in check:
            for dst in check:
                try:
                    r = rules.entry(src, dst)
                except CPMMError:
                    raise
                if r != geo.entry(src, dst):
                    raise ValidationError("rules", f"transition rule says T({src},{dst}) = {r} "
                                          "but the branch geometry disagrees")
    # fixed points
    for fx in spec.fixed_values:
        if not (slo <= fx <= shi):
            raise ValidationError("fixed", f"fixed point {fx} escapes the space")
        if math.isfinite(fx):
            for bid in geom.locate(fx):
                a, b = geom.endpoints(bid)
                if a + _tol(a) < fx < b - _tol(b):
                    y = next(p(fx) for p in geom.sub_pieces(bid) if p.x0 <= fx <= p.x1)
                    if abs(y - fx) > _tol(fx) * 10:
                        raise ValidationError("fixed", f"declared fixed point {fx} maps to {y}")

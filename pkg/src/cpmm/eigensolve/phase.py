"""Classify the phase space of a constant slope model from partial sums of v."""
from __future__ import annotations

import math

from ..errors import TailNotSummable
from ..mapspec.model import BasicIntervalId, MapSpec
from . import outcome as oc
from .entries import Entries, ordered_sum, point_key

RADII = tuple(10 ** k for k in range(1, 8))
GROWTH = 1.01


def _side_sums(spec: MapSpec, entries: Entries, key_lo, key_hi, radii):
    out = []
    for R in radii:
        try:
            s = ordered_sum(spec, entries, key_lo, key_hi, radius=R)
        except (TailNotSummable, OverflowError):
            s = math.inf
        out.append((R, s))
    return out


def _diverges(sums, threshold) -> bool:
    last, prev = sums[-1][1], sums[-2][1]
    return last > threshold and last >= GROWTH * prev


def classify_phase_space(spec: MapSpec, entries: Entries, basepoint: BasicIntervalId | None = None,
                         threshold: float = 1e6, radii=RADII) -> oc.PhaseSpaceClass:
    """Partial sums of v to the left and right of ``basepoint`` over growing radii.

    A side counts as divergent once its sum passes ``threshold`` and the last
    decade still grows by at least 1%.  Heuristic by nature.
    """
    if basepoint is None:
        basepoint = spec.geom.id_window(1)[0]
    basepoint = basepoint.whole()
    start, end = (-1, 0, 0, 0), (len(spec.order), 0, 0, 0)
    left = _side_sums(spec, entries, start, point_key(spec, basepoint, "lo"), radii)
    right = _side_sums(spec, entries, point_key(spec, basepoint, "hi"), end, radii)
    ld, rd = _diverges(left, threshold), _diverges(right, threshold)
    verdict = oc.PHASE_OF_SUMMABILITY[{(False, False): oc.SUMMABLE, (True, False): oc.LEFT_DIVERGENT,
                                       (False, True): oc.RIGHT_DIVERGENT,
                                       (True, True): oc.BOTH_DIVERGENT}[(ld, rd)]]
    return oc.PhaseSpaceClass(verdict, left, right, ld, rd, threshold)


__all__ = ["classify_phase_space"]

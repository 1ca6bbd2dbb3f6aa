"""No-atom scans for psi and divergence of psi-length near accumulation points."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..eigensolve.entries import Entries
from ..errors import TailNotSummable
from ..extreal import ExtInterval
from ..mapspec.expr import to_float
from ..mapspec.model import SINGLETON, BasicIntervalId, MapSpec
from .psi import psi_eval
from .refine import refine


@dataclass
class AccumulationScan:
    point: float
    eps: float
    sums: list  # (radius, psi-length of the basic intervals inside (point-eps, point+eps))
    divergent: bool
    threshold: float


@dataclass
class AtomScanReport:
    points: np.ndarray
    depths: list
    gaps: dict  # depth -> array of two-sided gaps at ``points``
    max_gap: dict
    expansion_mismatch: float = 0.0
    expansion_checks: int = 0
    obstructions: list = field(default_factory=list)
    window: tuple = ()

    @property
    def decaying(self) -> bool:
        seq = [self.max_gap[d] for d in self.depths]
        return all(b <= a * (1 + 1e-12) for a, b in zip(seq, seq[1:]))


def _tail_direction(spec: MapSpec, fam: str, a: float):
    """+1 / -1 when the intervals of ``fam`` approach ``a`` as i -> +inf / -inf."""
    geom = spec.geom
    kind = spec.family(fam).kind
    dirs = (1,) if kind != "integers" else (1, -1)
    for d in dirs:
        far = geom.endpoints(BasicIntervalId(fam, d * 4096))
        near = geom.endpoints(BasicIntervalId(fam, d * 64))
        if abs(far[0] - a) < abs(near[0] - a) and abs(far[0] - a) < 1e-3 + 1e-9 * abs(a):
            return d
    return None


def _index_within(spec, fam, d, a, eps) -> int:
    """Smallest t >= 0 with interval d*t inside (a - eps, a + eps), galloping from 1."""
    geom = spec.geom
    inside = lambda t: all(abs(e - a) < eps for e in geom.endpoints(BasicIntervalId(fam, d * t)))
    t = 1
    while not inside(t):
        t *= 2
        if t > 1 << 40:
            raise ValueError("interval never enters the neighbourhood")
    lo, hi = t // 2, t
    while hi - lo > 1:
        mid = (lo + hi) // 2
        lo, hi = (lo, mid) if inside(mid) else (mid, hi)
    return hi


def accumulation_length_scan(spec: MapSpec, entries: Entries, point: float, eps: float = 1e-2,
                             radii=tuple(10 ** k for k in range(2, 9)),
                             threshold: float = 1e6) -> AccumulationScan:
    """Sum of v_I over basic intervals inside (point - eps, point + eps) with |index| <= R."""
    tails = []
    for fam in spec.families:
        if fam.kind == SINGLETON:
            continue
        for acc in fam.accumulates:
            if abs(to_float(spec.value(acc)) - point) <= 1e-12:
                d = _tail_direction(spec, fam.name, point)
                if d is not None:
                    tails.append((fam.name, d, _index_within(spec, fam.name, d, point, eps)))
    sums = []
    for R in radii:
        s = 0.0
        for fam, d, t0 in tails:
            if t0 > R:
                continue
            lo, hi = (t0, R) if d > 0 else (-R, -t0)
            try:
                s += entries.range_sum(fam, lo, hi)
            except (TailNotSummable, OverflowError):
                s = math.inf
        sums.append((R, s))
    last, prev = sums[-1][1], sums[-2][1]
    divergent = last > threshold and last >= 1.01 * prev
    return AccumulationScan(point, eps, sums, divergent, threshold)


def _gaps(table, pts):
    x, psi = table.x, table.psi
    idx = np.searchsorted(x, pts)
    right = psi[np.minimum(idx + 1, len(x) - 1)] - psi[idx]
    left = psi[idx] - psi[np.maximum(idx - 1, 0)]
    return left, right


def atom_scan(spec: MapSpec, entries: Entries, lam: float, p0: float | None, depths,
              window, resolution: int | None = None) -> AtomScanReport:
    """Jumps psi(right neighbour) - psi(left neighbour) around the P points of the window."""
    window = window if isinstance(window, ExtInterval) else ExtInterval(*window)
    depths = sorted(depths)
    obstructions = []
    for fam in spec.families:
        for acc in fam.accumulates:
            a = to_float(spec.value(acc))
            if window.lo < a < window.hi:
                scan = accumulation_length_scan(spec, entries, a)
                if scan.divergent:
                    obstructions.append(scan)
    if obstructions:
        return AtomScanReport(np.array([]), depths, {}, {}, obstructions=obstructions,
                              window=(window.lo, window.hi))
    tables = {}
    for n in depths:
        ref = refine(spec, n, window, resolution)
        tables[n] = psi_eval(ref, entries, lam, p0)
    base = tables[depths[0]]
    pts = base.refinement.p_points()
    gaps, max_gap, sides = {}, {}, {}
    for n in depths:
        left, right = _gaps(tables[n], pts)
        sides[n] = (left, right)
        gaps[n] = left + right
        max_gap[n] = float(gaps[n].max()) if len(pts) else 0.0
    # Delta psi(f x) = lam Delta psi(x), one side at a time
    mismatch, checks = 0.0, 0
    geom = spec.geom
    pos = {float(x): k for k, x in enumerate(pts)}
    adjacent = {}  # (x, side) -> the affine piece of f next to x on that side
    for b in base.refinement.levels[0].ids:
        ps = geom.pieces(b)
        adjacent[(ps[0].x0, 1)] = ps[0]
        adjacent[(ps[-1].x1, -1)] = ps[-1]
    for n, n1 in zip(depths, depths[1:]):
        if n1 != n + 1:
            continue
        for k, x in enumerate(pts):
            for side in (-1, 1):
                p = adjacent.get((float(x), side))
                if p is None:
                    continue
                m = pos.get(float(_snap(pts, p(x))))
                if m is None:
                    continue
                out_side = side if p.slope > 0 else -side
                g_x = sides[n1][1 if side > 0 else 0][k]
                g_fx = sides[n][1 if out_side > 0 else 0][m]
                if (out_side < 0 and m == 0) or (out_side > 0 and m == len(pts) - 1):
                    continue  # the image side leaves the window
                mismatch = max(mismatch, abs(lam * g_x - g_fx) / max(1.0, abs(g_fx)))
                checks += 1
    return AtomScanReport(pts, depths, gaps, max_gap, mismatch, checks,
                          window=(window.lo, window.hi))


def _snap(pts, y):
    k = int(np.argmin(np.abs(pts - y))) if len(pts) else -1
    if k < 0 or abs(pts[k] - y) > 1e-9 * max(1.0, abs(y)):
        return math.nan
    return pts[k]


__all__ = ["AccumulationScan", "AtomScanReport", "accumulation_length_scan", "atom_scan"]

"""The conjugacy psi on refined partition points and its numeric inverse."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import TailDivergence, TailNotSummable
from ..eigensolve.entries import Entries, ordered_sum
from .refine import PartitionRefinement


@dataclass
class PsiTable:
    depth: int
    p0: float
    lam: float
    x: np.ndarray
    psi: np.ndarray
    refinement: PartitionRefinement = field(repr=False)
    level_psi: list = field(default_factory=list, repr=False)
    piece_psi: dict = field(default_factory=dict, repr=False)  # piece -> (psi(tlo), psi(thi), base)
    duplicate_spread: float = 0.0

    def __call__(self, x: float) -> float:
        """psi at a tabulated point (nearest match) or by monotone interpolation."""
        return float(np.interp(x, self.x, self.psi))

    def inverse(self, y: float) -> float:
        """psi^-1 by binary search over the table, linear between neighbours."""
        k = int(np.searchsorted(self.psi, y))
        if k <= 0:
            return float(self.x[0])
        if k >= len(self.psi):
            return float(self.x[-1])
        y0, y1 = self.psi[k - 1], self.psi[k]
        t = 0.0 if y1 == y0 else (y - y0) / (y1 - y0)
        return float(self.x[k - 1] + t * (self.x[k] - self.x[k - 1]))

    def is_increasing(self) -> bool:
        return bool(np.all(np.diff(self.psi) > 0))


def _key_sum(spec, entries, k0, k1) -> float:
    try:
        if k1 == k0:
            return 0.0
        if k1 > k0:
            return ordered_sum(spec, entries, k0, k1)
        return -ordered_sum(spec, entries, k1, k0)
    except TailNotSummable as exc:
        raise TailDivergence(f"psi sum does not converge: {exc}") from exc


def default_basepoint(ref: PartitionRefinement) -> float:
    pts = ref.p_points()
    mid = 0.5 * (ref.window.lo + ref.window.hi)
    return float(pts[np.argmin(np.abs(pts - mid))])


def psi_eval(ref: PartitionRefinement, entries: Entries, lam: float, p0: float | None = None) -> PsiTable:
    """psi(x) = lam^-n sum over P_n-intervals J between p0 and x of v_{f^n J}.

    Evaluated level by level: P points get closed-form sums of v, a deeper point x
    in an affine piece K gets psi(start of K) + |psi(f x) - psi(f(start of K))| / lam.
    """
    spec = ref.spec
    lv0 = ref.levels[0]
    if p0 is None:
        p0 = default_basepoint(ref)
    cand = np.nonzero((lv0.depth == 0) & np.isclose(lv0.x, p0, rtol=1e-12, atol=1e-12))[0]
    if len(cand) == 0:
        raise ValueError(f"basepoint {p0} is not a point of P inside the window")
    k0 = lv0.key[cand[0]]
    cache: dict = {}

    def psi0(key):
        if key not in cache:
            cache[key] = _key_sum(spec, entries, k0, key)
        return cache[key]

    from ..eigensolve.entries import point_key
    start_key, end_key = (-1, 0, 0, 0), (len(spec.order), 0, 0, 0)
    piece_psi: dict = {}

    def piece_info(pi):
        if pi not in piece_psi:
            ref_p = ref.pieces[pi]
            p = ref_p.piece
            if p.first is None:
                a, b = psi0(start_key), psi0(end_key)
            else:
                a, b = psi0(point_key(spec, p.first, "lo")), psi0(point_key(spec, p.last, "hi"))
            # psi at the left end of the piece: left end of its interval plus earlier pieces
            base = psi0(point_key(spec, ref_p.bid, "lo"))
            for k in range(ref_p.k):
                q = pi - ref_p.k + k
                qa, qb = piece_info(q)[:2]
                base += (qb - qa) / lam
            piece_psi[pi] = (a, b, base)
        return piece_psi[pi]

    level_psi: list = [None] * len(ref.levels)
    spread = 0.0
    for j in range(len(ref.levels) - 1, -1, -1):
        lv = ref.levels[j]
        out = np.empty(len(lv.x))
        for m in range(len(lv.x)):
            if lv.piece[m] < 0:
                out[m] = psi0(lv.key[m])
                continue
            pi = int(lv.piece[m])
            a, b, base = piece_info(pi)
            p = ref.pieces[pi].piece
            y_psi = level_psi[j + 1][lv.parent[m]]
            start = a if p.slope > 0 else b
            out[m] = base + abs(y_psi - start) / lam
        if not np.all(np.isfinite(out)):
            raise TailDivergence("psi is infinite at an interior point")
        level_psi[j] = out
    psi = level_psi[0]
    return PsiTable(ref.n, float(lv0.x[cand[0]]), lam, lv0.x, psi, ref, level_psi, piece_psi, spread)


__all__ = ["PsiTable", "default_basepoint", "psi_eval"]

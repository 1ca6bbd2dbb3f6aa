"""Refined partitions P_n = P u f^-1(P) u ... u f^-n(P) on a working window."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DepthExplosion
from ..extreal import ExtInterval
from ..mapspec.geometry import Piece
from ..mapspec.model import SINGLETON, BasicIntervalId, MapSpec
from ..eigensolve.entries import family_index_range, point_key

POINT_CAP = 500_000
DEFAULT_RESOLUTION = 12


@dataclass
class PieceRef:
    bid: BasicIntervalId
    k: int  # position among the pieces of bid
    piece: Piece


@dataclass
class Level:
    """Points of one refinement level, sorted by x.

    ``parent[m]`` indexes f(x_m) in the next level (-1 for points of P) and
    ``piece[m]`` the affine piece that produced x_m (-1 for points of P);
    ``key[m]`` is the order key of a P point (None otherwise).
    """

    x: np.ndarray
    depth: np.ndarray
    parent: np.ndarray
    piece: np.ndarray
    key: list
    ids: list  # whole basic intervals covered by this level


@dataclass
class PartitionRefinement:
    spec: MapSpec
    n: int
    window: ExtInterval
    resolution: int
    levels: list  # levels[0] is P_n on the window, levels[j] covers f^j(window)
    pieces: list = field(default_factory=list)

    @property
    def points(self) -> np.ndarray:
        return self.levels[0].x

    @property
    def depths(self) -> np.ndarray:
        return self.levels[0].depth

    def p_points(self) -> np.ndarray:
        lv = self.levels[0]
        return lv.x[lv.depth == 0]

    def address(self, m: int) -> list:
        """Chain of basic intervals x, f(x), ... visits until it lands on P."""
        chain, j = [], 0
        while self.levels[j].piece[m] >= 0:
            chain.append(self.pieces[self.levels[j].piece[m]].bid)
            m = self.levels[j].parent[m]
            j += 1
        return chain

    def image_ids(self) -> list:
        """For each P_n-basic interval of the window, the id of f^n(J) in B(P)."""
        geom = self.spec.geom
        xs = self.points
        out = []
        for a, b in zip(xs[:-1], xs[1:]):
            y = 0.5 * (a + b)
            for _ in range(self.n):
                y = geom.evaluate(y)
            ids = [i.whole() for i in geom.locate(y)]
            out.append(ids[0] if ids else None)
        return out


def _ids_in(spec: MapSpec, lo: float, hi: float, M: int) -> list:
    """Whole basic intervals with |index| <= M meeting (lo, hi)."""
    geom = spec.geom
    out = []
    for fam in spec.families:
        for i in spec.iter_indices(fam.name, M):
            b = BasicIntervalId(fam.name, i)
            a, c = geom.endpoints(b)
            if a < hi and c > lo:
                out.append(b)
    return out


def _target_ids(spec: MapSpec, p: Piece, M: int) -> list:
    if p.first is None:
        return [BasicIntervalId(f.name, i) for f in spec.families for i in spec.iter_indices(f.name, M)]
    ka, kb = point_key(spec, p.first, "lo"), point_key(spec, p.last, "hi")
    out = []
    for fam in spec.families:
        rng = family_index_range(spec, fam.name, ka, kb)
        if rng is None:
            continue
        if fam.kind == SINGLETON:
            out.append(BasicIntervalId(fam.name))
            continue
        lo, hi = max(rng[0], -M), min(rng[1], M)
        out.extend(BasicIntervalId(fam.name, i) for i in range(int(lo), int(hi) + 1))
    return out


def _p_points(spec: MapSpec, ids: list):
    xs, keys = [], []
    for b in ids:
        lo, hi = spec.geom.endpoints(b)
        xs += [lo, hi]
        keys += [point_key(spec, b, "lo"), point_key(spec, b, "hi")]
    return xs, keys


def _merge(x, depth, parent, piece, key, tol_rel=1e-12):
    """Sort by x and collapse near-duplicates, keeping the shallowest copy."""
    order = np.lexsort((depth, x))
    x, depth, parent, piece = x[order], depth[order], parent[order], piece[order]
    key = [key[k] for k in order]
    if len(x) == 0:
        return x, depth, parent, piece, key
    scale = np.maximum(1.0, np.abs(x))
    keep = np.ones(len(x), dtype=bool)
    # group runs of points within tolerance of the first point of the run
    start = 0
    for m in range(1, len(x)):
        if x[m] - x[start] <= tol_rel * scale[start]:
            keep[m] = False
        else:
            start = m
    idx = np.nonzero(keep)[0]
    return x[idx], depth[idx], parent[idx], piece[idx], [key[k] for k in idx]


def refine(spec: MapSpec, n: int, window: ExtInterval | tuple, resolution: int | None = None,
           cap: int = POINT_CAP) -> PartitionRefinement:
    """Points of P_n in ``window``, using basic intervals with |index| <= resolution.

    When the rule drift is finite the default resolution is large enough for the
    result to be exact on the window; otherwise points coming from intervals of
    higher index are left out (the tabulated points themselves stay exact).
    """
    if not isinstance(window, ExtInterval):
        window = ExtInterval(*window)
    geom = spec.geom
    M0 = max([abs(b.index) for b in _ids_in(spec, window.lo, window.hi, DEFAULT_RESOLUTION * 8)
              if b.index is not None] + [0])
    if resolution is None:
        from ..mapspec.transitions import compile_transitions
        drift = compile_transitions(spec).drift_bound
        resolution = (M0 + int(drift) * (n + 1)) if math.isfinite(drift) else DEFAULT_RESOLUTION
    M = resolution
    pieces: list[PieceRef] = []
    piece_index: dict = {}

    def pieces_of(b):
        if b not in piece_index:
            piece_index[b] = []
            for k, p in enumerate(geom.pieces(b)):
                piece_index[b].append(len(pieces))
                pieces.append(PieceRef(b, k, p))
        return piece_index[b]

    # id sets U_0 (window) ... U_n (images)
    U = [_ids_in(spec, window.lo, window.hi, M)]
    for _ in range(n):
        nxt = {}
        for b in U[-1]:
            for pi in pieces_of(b):
                for t in _target_ids(spec, pieces[pi].piece, M):
                    nxt[t] = None
        U.append(sorted(nxt, key=spec.order_key))
    levels: list = [None] * (n + 1)
    total = 0
    for j in range(n, -1, -1):
        xs, keys = _p_points(spec, U[j])
        x = np.array(xs, dtype=float)
        depth = np.zeros(len(x), dtype=np.int64)
        parent = -np.ones(len(x), dtype=np.int64)
        piece = -np.ones(len(x), dtype=np.int64)
        key = list(keys)
        if j < n:
            up = levels[j + 1]
            chunks = [(x, depth, parent, piece)]
            for b in U[j]:
                for pi in pieces_of(b):
                    p = pieces[pi].piece
                    tol = 1e-12 * max(1.0, abs(p.tlo), abs(p.thi))
                    a = np.searchsorted(up.x, p.tlo - tol, side="left")
                    c = np.searchsorted(up.x, p.thi + tol, side="right")
                    if c <= a:
                        continue
                    ys = up.x[a:c]
                    px = p.x0 + (ys - p.y0) / p.slope
                    px = np.clip(px, min(p.x0, p.x1), max(p.x0, p.x1))
                    chunks.append((px, up.depth[a:c] + 1, np.arange(a, c), np.full(c - a, pi)))
                    key.extend([None] * (c - a))
            x = np.concatenate([ch[0] for ch in chunks])
            depth = np.concatenate([ch[1] for ch in chunks])
            parent = np.concatenate([ch[2] for ch in chunks])
            piece = np.concatenate([ch[3] for ch in chunks])
        if j == 0:
            inside = (x >= window.lo - 1e-12 * max(1.0, abs(window.lo))) & \
                     (x <= window.hi + 1e-12 * max(1.0, abs(window.hi)))
            x, depth, parent, piece = x[inside], depth[inside], parent[inside], piece[inside]
            key = [k for k, ok in zip(key, inside) if ok]
        x, depth, parent, piece, key = _merge(x, depth, parent, piece, key)
        total += len(x)
        if total > cap:
            raise DepthExplosion(f"refinement exceeds {cap} points at level {j}")
        levels[j] = Level(x, depth, parent, piece, key, U[j])
    return PartitionRefinement(spec, n, window, M, levels, pieces)


__all__ = ["Level", "PartitionRefinement", "PieceRef", "refine"]

"""The constant slope model g = psi o f o psi^-1 measured on the tabulated grid."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientGrid
from .psi import PsiTable


@dataclass
class PieceSlope:
    bid: str
    k: int
    orientation: int
    points: int
    slope_min: float
    slope_max: float
    deviation: float  # max | |slope| - lam |


@dataclass
class ConstantSlopeModel:
    lam: float
    endpoints: np.ndarray  # psi(P) on the window
    pieces: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # pieces with fewer than 2 interior points
    grid_x: np.ndarray | None = None  # psi(x) for graph points of g
    grid_g: np.ndarray | None = None
    phase: object = None
    window: tuple = ()

    @property
    def max_deviation(self) -> float:
        return max((p.deviation for p in self.pieces), default=float("nan"))

    def report(self) -> str:
        from ..extreal import fmt
        lines = [f"target slope: {fmt(self.lam)}", f"pieces measured: {len(self.pieces)}",
                 f"pieces skipped (< 2 interior points): {len(self.skipped)}",
                 f"max slope deviation: {fmt(self.max_deviation)}"]
        if self.window:
            lines.append(f"window: [{fmt(self.window[0])}, {fmt(self.window[1])}]")
        if self.phase is not None:
            lines.append(f"phase space: {self.phase.verdict}")
        return "\n".join(lines) + "\n"


def graph_points(table: PsiTable, pi: int):
    """(psi(x), psi(f x)) for tabulated x in the closed affine piece ``pi``."""
    ref = table.refinement
    lv = ref.levels[0]
    p = ref.pieces[pi].piece
    a, b, _ = table.piece_psi.get(pi) or (None, None, None)
    lo, hi = min(p.x0, p.x1), max(p.x0, p.x1)
    tol = 1e-12 * max(1.0, abs(lo), abs(hi))
    i0 = np.searchsorted(lv.x, lo - tol, side="left")
    i1 = np.searchsorted(lv.x, hi + tol, side="right")
    xs, gs, interior = [], [], 0
    for m in range(i0, i1):
        x = lv.x[m]
        if abs(x - p.x0) <= tol:
            g = a if p.slope > 0 else b
        elif abs(x - p.x1) <= tol:
            g = b if p.slope > 0 else a
        elif lv.piece[m] == pi:
            g = table.level_psi[1][lv.parent[m]]
            interior += 1
        else:
            continue
        if g is None:
            continue
        xs.append(table.psi[m])
        gs.append(g)
    return np.array(xs), np.array(gs), interior


def build_model(spec, table: PsiTable, lam: float, strict: bool = False) -> ConstantSlopeModel:
    """Measure the slope of g on every affine piece lying inside the window.

    Pieces with fewer than two interior grid points are listed in ``skipped``;
    with ``strict`` they raise InsufficientGrid, as does a model with nothing measured.
    """
    ref = table.refinement
    w = ref.window
    model = ConstantSlopeModel(lam, table.psi[ref.levels[0].depth == 0], window=(w.lo, w.hi))
    all_x, all_g = [], []
    if ref.n < 1:
        raise InsufficientGrid("depth 0 has no interior grid points")
    for pi, pr in enumerate(ref.pieces):
        if pr.bid not in ref.levels[0].ids:
            continue
        p = pr.piece
        if min(p.x0, p.x1) < w.lo or max(p.x0, p.x1) > w.hi:
            continue
        if pi not in table.piece_psi:
            continue
        xs, gs, interior = graph_points(table, pi)
        if interior < 2:
            if strict:
                raise InsufficientGrid(f"piece {pr.k} of {pr.bid} has {interior} interior grid points")
            model.skipped.append(f"{pr.bid}#{pr.k}")
            continue
        slopes = np.diff(gs) / np.diff(xs)
        orient = 1 if p.slope > 0 else -1
        dev = float(np.max(np.abs(orient * slopes - lam)))
        model.pieces.append(PieceSlope(str(pr.bid), pr.k, orient, len(xs), float(slopes.min()),
                                       float(slopes.max()), dev))
        all_x.append(xs)
        all_g.append(gs)
    if not model.pieces:
        raise InsufficientGrid("no piece in the window has two interior grid points")
    model.grid_x = np.concatenate(all_x)
    model.grid_g = np.concatenate(all_g)
    return model


__all__ = ["ConstantSlopeModel", "PieceSlope", "build_model", "graph_points"]

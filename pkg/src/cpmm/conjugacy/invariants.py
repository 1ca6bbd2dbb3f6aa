"""Numerical checks of the properties psi must have on tabulated points."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import graph_points
from .psi import PsiTable, psi_eval
from .refine import refine

WELL_DEFINED_TOL = 1e-9
EXPANSION_RTOL = 1e-8
SUBEXPANSION_TOL = 1e-8


@dataclass
class InvariantReport:
    depth: int
    well_defined: float  # max |psi_n(x) - psi_n+1(x)| over points of P_n
    monotone: bool
    expansion: float  # max relative error of |psi f x - psi f x'| = lam |psi x - psi x'|
    expansion_checks: int
    subexpansion: float  # max of |psi f x - psi f x'| - lam |psi x - psi x'|, want <= 0
    finite: bool

    @property
    def results(self) -> dict:
        return {
            "well-defined": self.well_defined < WELL_DEFINED_TOL,
            "strictly increasing": self.monotone,
            "expansion on branches": self.expansion_checks > 0 and self.expansion < EXPANSION_RTOL,
            "subexpansion": self.subexpansion <= SUBEXPANSION_TOL,
            "finite": self.finite,
        }

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def report(self) -> str:
        vals = {"well-defined": self.well_defined, "expansion on branches": self.expansion,
                "subexpansion": self.subexpansion}
        lines = []
        for name, ok in self.results.items():
            extra = f" ({vals[name]:.3g})" if name in vals else ""
            lines.append(f"{name}: {'pass' if ok else 'FAIL'}{extra}")
        return "\n".join(lines) + "\n"


def _graph(table: PsiTable):
    """All (psi x, psi f x) pairs plus per-piece arrays for the expansion check."""
    per_piece = []
    for pi, pr in enumerate(table.refinement.pieces):
        if pr.bid not in table.refinement.levels[0].ids or pi not in table.piece_psi:
            continue
        xs, gs, _ = graph_points(table, pi)
        if len(xs) >= 2:
            per_piece.append((xs, gs))
    return per_piece


def check_invariants(spec, entries, lam: float, p0: float | None, depth: int, window,
                     resolution: int | None = None) -> InvariantReport:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    a = psi_eval(refine(spec, depth, window, resolution), entries, lam, p0)
    b = psi_eval(refine(spec, depth + 1, window, resolution), entries, lam, a.p0)
    idx = np.clip(np.searchsorted(b.x, a.x), 0, len(b.x) - 1)
    near = np.abs(b.x[idx] - a.x) <= 1e-12 * np.maximum(1.0, np.abs(a.x))
    well = float(np.max(np.abs(b.psi[idx] - a.psi)[near])) if near.any() else float("inf")
    finite = bool(np.all(np.isfinite(b.psi)))
    worst_rel, checks = 0.0, 0
    pts = []
    for xs, gs in _graph(b):
        dx, dg = np.abs(np.diff(xs)), np.abs(np.diff(gs))
        ok = dx > 0
        rel = np.abs(dg[ok] - lam * dx[ok]) / np.maximum(lam * dx[ok], 1e-300)
        if len(rel):
            worst_rel = max(worst_rel, float(rel.max()))
        checks += int(ok.sum())
        pts.append(np.column_stack([xs, gs]))
    sub = -np.inf
    if pts:
        allp = np.concatenate(pts)
        allp = allp[np.lexsort((allp[:, 1], allp[:, 0]))]
        d = np.abs(np.diff(allp[:, 1])) - lam * np.abs(np.diff(allp[:, 0]))
        sub = float(d.max()) if len(d) else -np.inf
    return InvariantReport(depth, well, b.is_increasing(), worst_rel, checks, sub, finite)


__all__ = ["InvariantReport", "check_invariants"]

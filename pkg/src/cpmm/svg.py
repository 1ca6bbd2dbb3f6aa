"""Deterministic SVG figures: map graphs, transition diagrams, psi, models, first return trees.

Every coordinate is rounded to three decimals and elements are emitted in a
fixed order, so the same inputs give byte-identical files.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from .errors import DomainError
from .extreal import ExtInterval
from .mapspec.model import MapSpec
from .mapspec.transitions import TransitionRuleSet, truncate

WIDTH, HEIGHT, MARGIN = 640, 480, 48
PALETTE = ("#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#2e4053")


def _n(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


@dataclass
class Canvas:
    x0: float
    x1: float
    y0: float
    y1: float
    title: str = ""
    width: int = WIDTH
    height: int = HEIGHT
    items: list = field(default_factory=list)

    def __post_init__(self):
        if self.x1 <= self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 <= self.y0:
            self.y1 = self.y0 + 1.0

    def sx(self, x: float) -> float:
        return MARGIN + (x - self.x0) / (self.x1 - self.x0) * (self.width - 2 * MARGIN)

    def sy(self, y: float) -> float:
        return self.height - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (self.height - 2 * MARGIN)

    def polyline(self, xs, ys, color=PALETTE[0], width=1.5, dash=None):
        pts = " ".join(f"{_n(self.sx(x))},{_n(self.sy(y))}" for x, y in zip(xs, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}"{extra}/>')

    def line(self, x0, y0, x1, y1, color="#888888", width=1.0, arrow=False):
        marker = ' marker-end="url(#arrow)"' if arrow else ""
        self.items.append(f'<line x1="{_n(self.sx(x0))}" y1="{_n(self.sy(y0))}" x2="{_n(self.sx(x1))}" '
                          f'y2="{_n(self.sy(y1))}" stroke="{color}" stroke-width="{width}"{marker}/>')

    def circle(self, x, y, r=2.5, color=PALETTE[0]):
        self.items.append(f'<circle cx="{_n(self.sx(x))}" cy="{_n(self.sy(y))}" r="{r}" fill="{color}"/>')

    def text(self, x, y, s, size=11, anchor="middle"):
        self.items.append(f'<text x="{_n(self.sx(x))}" y="{_n(self.sy(y))}" font-size="{size}" '
                          f'text-anchor="{anchor}" font-family="sans-serif">{escape(s)}</text>')

    def axes(self, xlabel="x", ylabel="y"):
        self.items.append(f'<rect x="{MARGIN}" y="{MARGIN}" width="{self.width - 2 * MARGIN}" '
                          f'height="{self.height - 2 * MARGIN}" fill="none" stroke="#cccccc"/>')
        for v, anchor in ((self.x0, "start"), (self.x1, "end")):
            self.items.append(f'<text x="{_n(self.sx(v))}" y="{self.height - MARGIN + 16}" font-size="10" '
                              f'text-anchor="{anchor}" font-family="sans-serif">{_tick(v)}</text>')
        for v in (self.y0, self.y1):
            self.items.append(f'<text x="{MARGIN - 4}" y="{_n(self.sy(v) + 4)}" font-size="10" '
                              f'text-anchor="end" font-family="sans-serif">{_tick(v)}</text>')
        self.items.append(f'<text x="{self.width / 2:g}" y="{self.height - 8}" font-size="11" '
                          f'text-anchor="middle" font-family="sans-serif">{escape(xlabel)}</text>')
        self.items.append(f'<text x="12" y="{self.height / 2:g}" font-size="11" text-anchor="middle" '
                          f'font-family="sans-serif" transform="rotate(-90 12 {self.height / 2:g})">'
                          f'{escape(ylabel)}</text>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">')
        defs = ('<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" '
                'markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" '
                'fill="#888888"/></marker></defs>')
        body = [head, defs, '<rect width="100%" height="100%" fill="white"/>']
        if self.title:
            body.append(f'<text x="{self.width / 2:g}" y="24" font-size="14" text-anchor="middle" '
                        f'font-family="sans-serif">{escape(self.title)}</text>')
        return "\n".join(body + self.items + ["</svg>"]) + "\n"


def _tick(v: float) -> str:
    return f"{v:.4g}"


def _finite_window(spec: MapSpec, window) -> ExtInterval:
    if window is not None:
        w = window if isinstance(window, ExtInterval) else ExtInterval(*window)
        if math.isfinite(w.lo) and math.isfinite(w.hi):
            return w
    from .conjugacy.verdict import default_window
    return default_window(spec, 24)


def graph_segments(spec: MapSpec, window=None, size: int = 200) -> tuple[ExtInterval, list]:
    """Sorted (x0, x1, f(x0), f(x1)) for every affine piece clipped to a finite window."""
    w = _finite_window(spec, window)
    geom = spec.geom
    segs = []
    for bid in geom.id_window(size):
        lo, hi = geom.endpoints(bid)
        if not lo < hi or hi < w.lo or lo > w.hi:
            continue
        try:
            pieces = geom.sub_pieces(bid)
        except DomainError:
            continue
        for p in pieces:
            a, b = max(p.x0, w.lo), min(p.x1, w.hi)
            if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
                continue
            segs.append((a, b, p(a), p(b)))
    segs.sort()
    return w, segs


def map_graph_svg(spec: MapSpec, window=None, size: int = 200) -> str:
    """Graph of f as one segment per affine piece, with the diagonal dashed."""
    w, segs = graph_segments(spec, window, size)
    ys = [y for s in segs for y in s[2:] if math.isfinite(y)]
    lo, hi = (min(ys), max(ys)) if ys else (w.lo, w.hi)
    c = Canvas(w.lo, w.hi, min(lo, w.lo), max(hi, w.hi), title=f"map graph: {spec.name or 'spec'}")
    c.axes("x", "f(x)")
    c.polyline([c.x0, c.x1], [c.x0, c.x1], color="#bbbbbb", width=1.0, dash="4 3")
    for a, b, ya, yb in segs:
        c.polyline([a, b], [ya, yb])
    return c.render()


def transition_diagram_svg(T: TransitionRuleSet, size: int = 20) -> str:
    """Nodes in rows by family and columns by index; arrows for T(I, J) = 1."""
    spec = T.spec
    ids = spec.geom.id_window(size)
    adj, labels = truncate(T, ids)
    fams = [f.name for f in spec.families]
    pos = {}
    for b in labels:
        col = (b.index if b.index is not None else -1) + (0 if b.sub is None else 0.3 * b.sub)
        pos[b] = (col, -fams.index(b.family))
    xs = [p[0] for p in pos.values()] or [0.0]
    ys = [p[1] for p in pos.values()] or [0.0]
    c = Canvas(min(xs) - 0.5, max(xs) + 0.5, min(ys) - 0.5, max(ys) + 0.5,
               title=f"transition diagram: {spec.name or 'spec'}")
    rows, cols = np.nonzero(adj)
    for r, k in sorted(zip(rows.tolist(), cols.tolist())):
        (xa, ya), (xb, yb) = pos[labels[r]], pos[labels[k]]
        if r == k:
            c.circle(xa, ya + 0.18, r=4, color="#dddddd")
            continue
        c.line(xa, ya, xb, yb, arrow=True, width=0.6)
    for b in labels:
        x, y = pos[b]
        c.circle(x, y, r=9, color="#ffffff")
        c.text(x, y - 0.04, str(b), size=9)
    return c.render()


def psi_svg(table) -> str:
    x, psi = np.asarray(table.x), np.asarray(table.psi)
    c = Canvas(float(x.min()), float(x.max()), float(psi.min()), float(psi.max()),
               title=f"psi at depth {table.depth}")
    c.axes("x", "psi(x)")
    c.polyline(x, psi)
    for xp, yp in zip(x[table.refinement.depths == 0], psi[table.refinement.depths == 0]):
        c.circle(xp, yp, r=2.0, color=PALETTE[1])
    return c.render()


def model_svg(model) -> str:
    """Graph points (psi x, psi f x) of the constant slope model."""
    gx, gg = np.asarray(model.grid_x), np.asarray(model.grid_g)
    c = Canvas(float(gx.min()), float(gx.max()), float(gg.min()), float(gg.max()),
               title=f"constant slope model, slope {model.lam:.6g}")
    c.axes("psi(x)", "g(psi(x))")
    order = np.lexsort((gg, gx))
    for x, y in zip(gx[order], gg[order]):
        c.circle(x, y, r=1.6)
    return c.render()


def first_return_tree_svg(levels: int = 5) -> str:
    """First return tree laid out by level (path length), children in generation order."""
    from .entropy import first_return_tree
    tree = first_return_tree(levels)
    width = max(len(lv) for lv in tree)
    c = Canvas(-0.5, width - 0.5, -levels + 0.5, 0.5, title=f"first return paths, {levels} levels")
    place = {}
    for lv, nodes in enumerate(tree):
        off = (width - len(nodes)) / 2
        for k in range(len(nodes)):
            place[(lv, k)] = (off + k, -lv)
    for lv, nodes in enumerate(tree):
        for k, node in enumerate(nodes):
            if node.parent:
                (xa, ya), (xb, yb) = place[node.parent], place[(lv, k)]
                c.line(xa, ya, xb, yb, width=0.8)
    for lv, nodes in enumerate(tree):
        c.text(-0.5, -lv, f"n={lv + 1}", size=10, anchor="start")
        for k, node in enumerate(nodes):
            x, y = place[(lv, k)]
            c.circle(x, y, r=4, color=PALETTE[2] if node.word[-1:] == (("B", node.n),) else PALETTE[0])
    return c.render()


__all__ = ["Canvas", "first_return_tree_svg", "graph_segments", "map_graph_svg", "model_svg", "psi_svg",
           "transition_diagram_svg"]

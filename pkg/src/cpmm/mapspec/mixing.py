"""Heuristic mixing check on a finite truncation of the transition graph.

The answer is never a proof: a countable graph can look primitive on every
finite window and still fail to mix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .model import MapSpec
from .transitions import TransitionRuleSet, truncate

LIKELY_MIXING = "likely-mixing"
NOT_MIXING = "not-mixing-witness"
INCONCLUSIVE = "inconclusive"


@dataclass
class MixingReport:
    verdict: str
    period: int | None = None
    classes: list = field(default_factory=list)  # cyclic classes when period > 1
    reason: str = ""
    window: list = field(default_factory=list)
    heuristic: bool = True


def graph_period(adj: np.ndarray) -> int:
    """Period of a strongly connected 0-1 adjacency matrix (gcd of cycle lengths)."""
    n = adj.shape[0]
    if n == 0:
        return 0
    g = csr_matrix(adj)
    order, pred = breadth_first_order(g, 0, directed=True, return_predecessors=True)
    level = np.full(n, -1)
    level[0] = 0
    for v in order[1:]:
        level[v] = level[pred[v]] + 1
    period = 0
    rows, cols = np.nonzero(adj)
    for u, v in zip(rows, cols):
        period = math.gcd(period, int(level[u] + 1 - level[v]))
    return abs(period)


def mixing_heuristic(spec: MapSpec, T: TransitionRuleSet, window_size: int = 60) -> MixingReport:
    window = spec.geom.id_window(window_size)
    adj, labels = truncate(T, window)
    report_window = [str(b) for b in labels]
    if not labels:
        return MixingReport(INCONCLUSIVE, reason="empty window")
    ncomp, comp = connected_components(csr_matrix(adj), directed=True, connection="strong")
    if ncomp != 1:
        return MixingReport(INCONCLUSIVE, reason=f"truncated graph has {ncomp} strong components",
                            window=report_window)
    period = graph_period(adj)
    if period > 1:
        n = len(labels)
        g = csr_matrix(adj)
        order, pred = breadth_first_order(g, 0, directed=True, return_predecessors=True)
        level = np.zeros(n, dtype=int)
        for v in order[1:]:
            level[v] = level[pred[v]] + 1
        classes = [[str(labels[k]) for k in range(n) if level[k] % period == r] for r in range(period)]
        return MixingReport(NOT_MIXING, period, classes,
                            f"every cycle length is a multiple of {period}", report_window)
    slopes = [abs(p.slope) for b in labels for p in spec.geom.sub_pieces(b)]
    if min(slopes) <= 1:
        return MixingReport(INCONCLUSIVE, 1, reason=f"some piece has |slope| = {min(slopes):.6g} <= 1",
                            window=report_window)
    return MixingReport(LIKELY_MIXING, 1, reason="strongly connected, aperiodic, expanding",
                        window=report_window)

"""Perron value estimates from finite principal submatrices."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NonConvergence
from ..mapspec.transitions import TransitionRuleSet, truncate


@dataclass
class PowerResult:
    value: float
    vector: np.ndarray
    iterations: int


def power_iteration(A: np.ndarray, tol: float = 1e-12, budget: int = 10_000) -> PowerResult:
    """Dominant eigenvalue of a nonnegative matrix from the all-ones start.

    Iterates on A + I (same eigenvectors, no periodic oscillation) and stops
    when the Rayleigh quotient moves by less than ``tol`` relative.
    """
    n = A.shape[0]
    B = A.astype(float) + np.eye(n)
    x = np.ones(n) / np.sqrt(n)
    prev = None
    for it in range(1, budget + 1):
        y = B @ x
        r = float(x @ y)
        norm = np.linalg.norm(y)
        if norm == 0:
            return PowerResult(0.0, x, it)
        x = y / norm
        if prev is not None and abs(r - prev) <= tol * max(1.0, abs(r)):
            return PowerResult(r - 1.0, x, it)
        prev = r
    raise NonConvergence(f"power iteration did not settle within {budget} iterations "
                         f"(last estimate {prev - 1.0:.12g})")


@dataclass
class PerronEstimates:
    sizes: list
    estimates: list
    labels: list = field(default_factory=list)
    right: np.ndarray | None = None
    left: np.ndarray | None = None
    iterations: list = field(default_factory=list)

    @property
    def final(self) -> float:
        return self.estimates[-1]

    @property
    def nondecreasing(self) -> bool:
        e = self.estimates
        return all(b >= a - 1e-9 * max(1.0, abs(a)) for a, b in zip(e, e[1:]))


def _window(T: TransitionRuleSet, w):
    if isinstance(w, int):
        return T.spec.geom.id_window(w)
    return list(w)


def truncation_perron(T: TransitionRuleSet, windows, tol: float = 1e-12,
                      budget: int = 10_000) -> PerronEstimates:
    """Estimates for each window (an id count or an explicit id list), smallest first."""
    out = PerronEstimates([], [])
    adj = labels = None
    for w in windows:
        ids = _window(T, w)
        adj, labels = truncate(T, ids)
        res = power_iteration(adj, tol, budget)
        out.sizes.append(len(labels))
        out.estimates.append(res.value)
        out.iterations.append(res.iterations)
        out.right = res.vector
    if labels is not None:
        out.labels = labels
        out.left = power_iteration(adj.T, tol, budget).vector
    return out


__all__ = ["PerronEstimates", "PowerResult", "power_iteration", "truncation_perron"]

"""Pick a solver for a spec and slope."""
from __future__ import annotations

import math

import numpy as np

from ..errors import CapabilityError, DomainError
from ..mapspec.gallery import identify
from ..mapspec.model import SINGLETON, BasicIntervalId, MapSpec
from ..mapspec.transitions import compile_transitions, truncate
from . import outcome as oc
from .closed_forms import solve_closed_form_s8
from .entries import TableEntries
from .phase import classify_phase_space
from .recurrence import propagate_s9
from .special import nonexistence_s10, solve_s11, solve_s12


def solve_finite(spec: MapSpec, lam: float, tol: float = 1e-9) -> oc.EigenOutcome:
    """All basic intervals are singletons: a plain nonnegative matrix."""
    ids = [BasicIntervalId(f.name) for f in spec.families]
    T = compile_transitions(spec)
    A, labels = truncate(T, ids)
    w, V = np.linalg.eig(A.astype(float))
    k = int(np.argmax(w.real))
    perron = float(w[k].real)
    if abs(perron - lam) > tol * max(1.0, perron):
        return oc.EigenOutcome(oc.NONE, lam, certificate="finite irreducible matrix: only the "
                               "Perron value has a nonnegative eigenvector",
                               witness={"perron": perron})
    v = np.abs(V[:, k].real)
    v = v / v.sum()
    entries = TableEntries(dict(zip(labels, v)))
    res = float(np.max(np.abs(A @ v - lam * v)))
    return oc.EigenOutcome(oc.EXISTS_UNIQUE, lam, entries, summability=oc.SUMMABLE,
                           scaling="sum v = 1", certificate="Perron vector of a finite matrix",
                           residual=res)


def solve(spec: MapSpec, lam: float, seed=None, k_range: int = 50) -> oc.EigenOutcome:
    if not lam > 1:
        raise DomainError(f"lambda must exceed 1, got {lam}")
    key = identify(spec)
    if key == "s8-interval":
        out = solve_closed_form_s8(lam)
    elif key == "s9-extended":
        out = propagate_s9(lam, (math.sqrt(5) - 1, 2.0) if seed is None else seed, k_range)
    elif key == "s10-none":
        return nonexistence_s10(lam)
    elif key == "s11-pcws":
        out = solve_s11(lam)
    elif key == "s12-nonmixing":
        out = solve_s12(lam)
    elif all(f.kind == SINGLETON for f in spec.families):
        out = solve_finite(spec, lam)
    else:
        raise CapabilityError("no eigenvector solver for this spec; only the truncation "
                              "oracle applies")
    if out.exists and out.entries is not None and key is not None:
        out.phase = classify_phase_space(spec, out.entries)
    return out


__all__ = ["solve", "solve_finite"]

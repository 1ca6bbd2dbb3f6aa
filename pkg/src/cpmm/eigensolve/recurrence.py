"""Two-step linear recurrence for the extended-line map ``s9-extended``.

Pairs p_k = (v_{2k+1}, v_{2k+2}) satisfy p_{k+1} = M p_k with
M = [[-1, 1+1/lam], [1-lam, lam-1-1/lam]] and det M = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import DomainError
from ..mapspec.model import BasicIntervalId
from . import outcome as oc
from .entries import ExpSumEntries, TableEntries

ROTATION = "rotation"
SHEAR = "shear"
SADDLE = "saddle"

SHEAR_LAMBDA = 2 + math.sqrt(5)
_SHEAR_TOL = 1e-12


def m_matrix(lam) -> np.ndarray:
    """Transfer matrix of the pair recurrence; exact (object dtype) for a Fraction ``lam``."""
    if isinstance(lam, Fraction):
        one = Fraction(1)
        return np.array([[-one, one + one / lam], [one - lam, lam - one - one / lam]], dtype=object)
    return np.array([[-1.0, 1 + 1 / lam], [1 - lam, lam - 1 - 1 / lam]])


def m_inverse(lam: float) -> np.ndarray:
    a, b, c, d = m_matrix(lam).ravel()
    return np.array([[d, -b], [-c, a]])  # det = 1


def trace(lam: float) -> float:
    return lam - 2 - 1 / lam


def spectral_case(lam: float) -> str:
    t = trace(lam)
    if abs(t - 2) <= _SHEAR_TOL:
        return SHEAR
    return ROTATION if t < 2 else SADDLE


def eigenvalues(lam: float) -> tuple[float, float]:
    """(mu_plus, mu_minus) in the saddle case; mu_plus * mu_minus = 1."""
    t = trace(lam)
    disc = math.sqrt(max(t * t - 4, 0.0))
    mu_p = (t + disc) / 2
    return mu_p, 1 / mu_p


def eigendirection(lam: float, mu: float) -> np.ndarray:
    return np.array([1 + 1 / lam, mu + 1])


@dataclass(frozen=True)
class RecurrenceModel:
    lam: float
    matrix: np.ndarray
    case: str

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


def recurrence_model(lam: float) -> RecurrenceModel:
    return RecurrenceModel(lam, m_matrix(lam), spectral_case(lam))


def propagate_pairs(lam: float, seed, k_lo: int, k_hi: int) -> dict:
    """{k: p_k} for k_lo <= k <= k_hi from p_0 = seed."""
    M, Mi = m_matrix(lam), m_inverse(lam)
    out = {0: np.asarray(seed, dtype=float)}
    p = out[0]
    for k in range(1, k_hi + 1):
        p = M @ p
        out[k] = p
    p = out[0]
    for k in range(-1, k_lo - 1, -1):
        p = Mi @ p
        out[k] = p
    return {k: out[k] for k in range(k_lo, k_hi + 1)}


def pairs_to_table(pairs: dict) -> dict:
    table = {}
    for k, (odd, even) in pairs.items():
        table[BasicIntervalId("I", 2 * k + 1)] = float(odd)
        table[BasicIntervalId("I", 2 * k + 2)] = float(even)
    return table


def _first_negative(pairs: dict):
    for k in sorted(pairs, key=lambda k: (abs(k), -k)):
        for off, v in zip((1, 2), pairs[k]):
            if v < 0:
                return 2 * k + off, float(v)
    return None


def constant_entries(odd: float, even: float, family: str = "I") -> ExpSumEntries:
    return ExpSumEntries({family: (((even, 1.0),), ((odd, 1.0),))}, {family: 2})


def saddle_entries(lam: float, alpha: float, beta: float, family: str = "I") -> ExpSumEntries:
    """Entries of alpha e_+ mu_+^k + beta e_- mu_-^k written as sums of rho^i."""
    terms = {0: [], 1: []}
    for coef, mu in ((alpha, eigenvalues(lam)[0]), (beta, eigenvalues(lam)[1])):
        if coef == 0:
            continue
        e = eigendirection(lam, mu)
        rho = math.sqrt(mu)
        terms[1].append((coef * e[0] / rho, rho))  # i = 2k+1
        terms[0].append((coef * e[1] / mu, rho))  # i = 2k+2
    return ExpSumEntries({family: (tuple(terms[0]), tuple(terms[1]))}, {family: 2})


def _residual(lam, entries, k_window):
    from ..mapspec.gallery import load
    from ..mapspec.transitions import compile_transitions
    from .residual import residual_check
    spec = load("s9-extended")
    ids = [BasicIntervalId("I", i) for i in range(-2 * k_window, 2 * k_window + 1)]
    return residual_check(compile_transitions(spec), lam, entries, ids)


def propagate_s9(lam: float, seed=(math.sqrt(5) - 1, 2.0), k_range: int = 50) -> oc.EigenOutcome:
    """Eigenvector search from p_0 = (v_1, v_2) = seed over |k| <= k_range."""
    if not lam > 1:
        raise DomainError(f"lambda must exceed 1, got {lam}")
    seed = np.asarray(seed, dtype=float)
    if not np.any(seed):
        raise DomainError("seed must be nonzero")
    pairs = propagate_pairs(lam, seed, -k_range, k_range)
    table = pairs_to_table(pairs)
    case = spectral_case(lam)
    neg = _first_negative(pairs)
    if case == ROTATION:
        t = trace(lam)
        theta = math.acos(max(-1.0, min(1.0, t / 2)))
        w = {"case": ROTATION, "rotation_angle": theta,
             "steps_bound": math.ceil(math.pi / theta) + 1}
        if neg is not None:
            w.update(interval=f"I_{neg[0]}", value=neg[1])
        return oc.EigenOutcome(oc.NONE, lam, witness=w, table=table,
                               certificate="M is conjugate to a rotation; every orbit leaves "
                                           "the positive quadrant", scaling="seed as given")
    if case == SHEAR:
        e = eigendirection(lam, 1.0)
        cross = seed[0] * e[1] - seed[1] * e[0]
        if abs(cross) > 1e-12 * np.linalg.norm(seed) * np.linalg.norm(e) or seed[0] < 0:
            w = {"case": SHEAR, "offset_from_eigendirection": cross}
            if neg is not None:
                w.update(interval=f"I_{neg[0]}", value=neg[1])
            return oc.EigenOutcome(oc.NONE, lam, witness=w, table=table,
                                   certificate="M = identity + nilpotent; off the eigendirection "
                                               "the orbit grows linearly in -e on one side",
                                   scaling="seed as given")
        entries = constant_entries(e[0] * 2 / e[1], 2.0)
        out = oc.EigenOutcome(oc.EXISTS_UNIQUE, lam, entries, summability=oc.BOTH_DIVERGENT,
                              scaling="v_I0 = 2", certificate="fixed eigendirection of M",
                              table=table)
        out.residual = _residual(lam, entries, k_range)
        return out
    mu_p, mu_m = eigenvalues(lam)
    basis = np.column_stack([eigendirection(lam, mu_p), eigendirection(lam, mu_m)])
    alpha, beta = np.linalg.solve(basis, seed)
    scale = max(abs(alpha), abs(beta))
    alpha = 0.0 if abs(alpha) <= 1e-12 * scale else float(alpha)
    beta = 0.0 if abs(beta) <= 1e-12 * scale else float(beta)
    if alpha < 0 or beta < 0:
        w = {"case": SADDLE, "alpha": alpha, "beta": beta}
        if neg is not None:
            w.update(interval=f"I_{neg[0]}", value=neg[1])
        return oc.EigenOutcome(oc.NONE, lam, witness=w, table=table,
                               certificate="seed outside the cone of the positive eigendirections",
                               scaling="seed as given")
    raw = saddle_entries(lam, alpha, beta)
    entries = raw.scaled(2.0 / raw(BasicIntervalId("I", 0)))
    summ = {(False, False): oc.SUMMABLE, (True, False): oc.RIGHT_DIVERGENT,
            (False, True): oc.LEFT_DIVERGENT, (True, True): oc.BOTH_DIVERGENT}[(alpha > 0, beta > 0)]
    out = oc.EigenOutcome(oc.EXISTS_FAMILY, lam, entries, dim=2, summability=summ,
                          scaling="v_I0 = 2",
                          certificate="nonnegative combination of the two positive eigendirections",
                          witness={"alpha": alpha, "beta": beta, "mu_plus": mu_p}, table=table)
    out.residual = _residual(lam, entries, min(k_range, 50))
    return out


__all__ = ["RecurrenceModel", "constant_entries", "eigendirection", "eigenvalues", "m_matrix",
           "propagate_pairs", "propagate_s9", "recurrence_model", "spectral_case"]

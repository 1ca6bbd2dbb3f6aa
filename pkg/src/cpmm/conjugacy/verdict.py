"""Decide between a constant slope model and a named obstruction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..eigensolve import solve
from ..eigensolve.special import nonexistence_s10, s12_sqrt_lambda, solve_s12
from ..extreal import ExtInterval, fmt
from ..mapspec.gallery import identify
from ..mapspec.mixing import mixing_heuristic
from ..mapspec.model import MapSpec
from ..mapspec.transitions import compile_transitions
from .atoms import accumulation_length_scan
from .model import ConstantSlopeModel, build_model
from .psi import PsiTable, psi_eval
from .refine import refine
from .s11 import lengths_nested_intersection_s11

CONJUGATE = "conjugate_model"
OBSTRUCTED = "obstructed"


@dataclass
class Verdict:
    kind: str
    reason: str = ""
    model: ConstantSlopeModel | None = None
    phase: object = None
    evidence: dict = field(default_factory=dict)
    psi: PsiTable | None = None
    witness_table: tuple | None = None  # (header, rows)

    def report(self) -> str:
        lines = [f"verdict: {self.kind}"]
        if self.reason:
            lines.append(f"reason: {self.reason}")
        if self.phase is not None and self.model is None:
            lines.append(f"phase space: {self.phase.verdict}")
        for k, v in self.evidence.items():
            lines.append(f"{k}: {fmt(v) if isinstance(v, float) else v}")
        text = "\n".join(lines) + "\n"
        if self.model is not None:
            text += self.model.report()
        return text


def default_window(spec: MapSpec, size: int = 14) -> ExtInterval:
    """Hull of the basic intervals in the first complete index shells, clipped to finite values."""
    ids = spec.geom.id_window(size)
    lo = min(spec.geom.lo(b) for b in ids)
    hi = max(spec.geom.hi(b) for b in ids)
    finite = [x for b in ids for x in spec.geom.endpoints(b) if math.isfinite(x)]
    if not math.isfinite(lo):
        lo = min(finite)
    if not math.isfinite(hi):
        hi = max(finite)
    return ExtInterval(lo, hi)


def verdict(spec: MapSpec, lam: float, depth: int = 4, window=None) -> Verdict:
    key = identify(spec)
    if key == "s10-none":
        out = nonexistence_s10(lam) if lam > 0 else None
        return Verdict(OBSTRUCTED, "no nonnegative eigenvector"
                       + (f" ({out.certificate})" if out else ""),
                       evidence=dict(out.witness) if out else {})
    if key == "s11-pcws":
        r = lengths_nested_intersection_s11(20)
        rows = [(k + 1, float(x), float(y), float(a), float(b))
                for k, (x, y, a, b) in enumerate(zip(r.x, r.y, r.f_lengths, r.g_lengths))]
        return Verdict(OBSTRUCTED, "no conjugacy to constant slope 2: psi(x_k) = y_k forces a "
                       "discontinuity since x_k -> 2 while y_k -> 1",
                       evidence={"x_20": float(r.x[-1]), "y_20": float(r.y[-1]),
                                 "gap": float(r.gap)},
                       witness_table=(("k", "x_k", "y_k", "f_length", "g_length"), rows))
    if key == "s12-nonmixing":
        out = solve_s12(s12_sqrt_lambda())
        scan = accumulation_length_scan(spec, out.entries, 0.0)
        return Verdict(OBSTRUCTED, "no conjugacy to a constant slope map: infinite psi-length "
                       "in every neighbourhood of 0",
                       evidence={"eps": scan.eps, "psi-length at radius "
                                 f"{scan.sums[-1][0]}": scan.sums[-1][1]},
                       witness_table=(("radius", "psi_length"), scan.sums))
    out = solve(spec, lam)
    if not out.exists:
        return Verdict(OBSTRUCTED, "no nonnegative eigenvector", evidence=dict(out.witness))
    mix = mixing_heuristic(spec, compile_transitions(spec))
    w = default_window(spec) if window is None else window
    ref = refine(spec, depth, w)
    table = psi_eval(ref, out.entries, lam)
    model = build_model(spec, table, lam)
    model.phase = out.phase
    return Verdict(CONJUGATE, f"eigenvector certificate: {out.certificate}", model, out.phase,
                   evidence={"mixing": mix.verdict, "eigen status": out.status,
                             "residual": out.residual}, psi=table)


__all__ = ["CONJUGATE", "OBSTRUCTED", "Verdict", "default_window", "verdict"]

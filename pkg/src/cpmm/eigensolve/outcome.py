"""Result types for eigenvector searches."""
from __future__ import annotations

from dataclasses import dataclass, field

from .entries import Entries

EXISTS_UNIQUE = "exists_unique"
EXISTS_FAMILY = "exists_family"
NONE = "none"

SUMMABLE = "summable"
LEFT_DIVERGENT = "left_divergent"
RIGHT_DIVERGENT = "right_divergent"
BOTH_DIVERGENT = "both_divergent"

FINITE_INTERVAL = "finite_interval"
HALF_LINE_LEFT = "half_line_left"
HALF_LINE_RIGHT = "half_line_right"
FULL_LINE = "full_extended_line"

PHASE_OF_SUMMABILITY = {
    SUMMABLE: FINITE_INTERVAL,
    LEFT_DIVERGENT: HALF_LINE_LEFT,
    RIGHT_DIVERGENT: HALF_LINE_RIGHT,
    BOTH_DIVERGENT: FULL_LINE,
}


@dataclass
class PhaseSpaceClass:
    verdict: str
    left_sums: list = field(default_factory=list)  # (radius, partial sum)
    right_sums: list = field(default_factory=list)
    left_divergent: bool = False
    right_divergent: bool = False
    threshold: float = 1e6
    heuristic: bool = True

    @property
    def summability(self) -> str:
        return {(False, False): SUMMABLE, (True, False): LEFT_DIVERGENT,
                (False, True): RIGHT_DIVERGENT, (True, True): BOTH_DIVERGENT}[
            (self.left_divergent, self.right_divergent)]


@dataclass
class EigenOutcome:
    status: str
    lam: float
    entries: Entries | None = None
    dim: int | None = None
    summability: str | None = None
    scaling: str = ""
    certificate: str = ""
    witness: dict = field(default_factory=dict)
    residual: float | None = None
    phase: PhaseSpaceClass | None = None
    notes: list = field(default_factory=list)
    table: dict | None = None  # propagated entries on the verification window

    @property
    def exists(self) -> bool:
        return self.status != NONE

    def report(self) -> str:
        from ..extreal import fmt
        lines = [f"lambda: {fmt(self.lam)}", f"status: {self.status}"
                 + (f" (dim {self.dim})" if self.dim else "")]
        if self.certificate:
            lines.append(f"certificate: {self.certificate}")
        if self.scaling:
            lines.append(f"scaling: {self.scaling}")
        if self.residual is not None:
            lines.append(f"residual: {fmt(self.residual)}")
        if self.summability:
            lines.append(f"summability: {self.summability}")
        if self.phase is not None:
            lines.append(f"phase space: {self.phase.verdict}")
        for k, v in self.witness.items():
            lines.append(f"witness {k}: {fmt(v) if isinstance(v, float) else v}")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"

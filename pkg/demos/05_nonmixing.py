"""A transitive map that is not mixing: a square root of the extended line map on [-1, 1]."""
from __future__ import annotations

from cpmm.conjugacy import accumulation_length_scan, verdict
from cpmm.eigensolve import s12_sqrt_lambda, solve_s12
from cpmm.mapspec import compile_transitions, mixing_heuristic
from cpmm.mapspec.gallery import load

spec = load("s12")
mix = mixing_heuristic(spec, compile_transitions(spec))
print(f"mixing check: {mix.verdict}, period {mix.period}")
print("cyclic class sizes:", [len(c) for c in mix.classes])

out = solve_s12(s12_sqrt_lambda())
print(out.report())

# The psi-length of (-eps, eps) grows without bound as more intervals are counted.
scan = accumulation_length_scan(spec, out.entries, 0.0)
for radius, total in scan.sums:
    print(f"index radius {radius:>10}: psi-length {total:.6g}")

print(verdict(spec, s12_sqrt_lambda() ** 2).report())

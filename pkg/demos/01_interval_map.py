"""An interval map with four families of basic intervals.

Walks through the slope threshold, the eigenvector lengths, the entropy
and the constant slope model for the built-in ``s8`` map.
"""
from __future__ import annotations

import math

from cpmm.conjugacy import verdict
from cpmm.eigensolve import lambda_min, solve, truncation_perron
from cpmm.entropy import first_returns, perron_from_generating_function, phi_estimate, rabbit_counts, spr_test
from cpmm.mapspec import BasicIntervalId as B, compile_transitions
from cpmm.mapspec.gallery import load

spec = load("s8")
lam = lambda_min()
print(f"slope threshold: {lam:.12f}")

# Below the threshold the closed form has a negative entry; at and above it every entry is positive.
for trial in (2.5, lam, 3.0):
    out = solve(spec, trial)
    print(f"lambda = {trial:.6f}: {out.status}  ({out.certificate})")

out = solve(spec, lam)
print("first lengths:", {str(b): round(out.entries(b), 6) for b in (B("D"), B("C", 0), B("B", 0), B("A", 0))})
print("phase space:", out.phase.verdict)

# Counting first return loops at D.  The counts follow the rabbit recurrence.
T = compile_transitions(spec)
fr = first_returns(T, B("D"), 40)
print("f(n), n <= 12:", fr.f[:12])
print("rabbit model  :", rabbit_counts(12).f)

phi = phi_estimate(fr).value
print(f"phi = {phi:.9f}")
print(f"root of sum f(n) lam^-n = 1: {perron_from_generating_function(fr, (2, 3)):.9f}")
print(f"truncation at 300 vertices: {truncation_perron(T, [300]).final:.9f}")
print(spr_test(fr, phi).report())
print(f"entropy = log {lam:.6f} = {math.log(lam):.6f}")

# The conjugate map of constant slope 3.
print(verdict(spec, 3.0, depth=4).report())

"""A mixing interval map with no nonnegative eigenvector for any slope."""
from __future__ import annotations

from cpmm.eigensolve import nonexistence_s10
from cpmm.eigensolve.special import s10_sum_bound
from cpmm.entropy import first_returns, phi_estimate, spr_test
from cpmm.mapspec import BasicIntervalId as B
from cpmm.mapspec.gallery import load
from cpmm.mapspec.transitions import TransitionRuleSet

print(f"bound on sum 3^-pi(n): {s10_sum_bound():.6f}")
for lam in (1.5, 2.0, 2.5, 3.0, 4.0, 8.0):
    out = nonexistence_s10(lam)
    print(f"lambda = {lam}: {out.status}: {out.certificate}")
    print("   ", out.witness)

# The chain on the refined partition is transient at its Perron value 3.
T = TransitionRuleSet(load("s10"), "geometry")
fr = first_returns(T, B("I", 0), 120)
print("first returns f(n), n <= 12:", fr.f[:12])
print(f"phi estimate {phi_estimate(fr).value:.9f}")
print(spr_test(fr, 3.0, perron=3.0).report())

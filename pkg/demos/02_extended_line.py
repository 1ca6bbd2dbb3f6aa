"""The connect-the-dots map on the extended real line.

Pairs of eigenvector entries obey a 2x2 recurrence with determinant 1, so
the trace of M decides between rotation, shear and saddle.
"""
from __future__ import annotations

import math

import numpy as np

from cpmm.conjugacy import atom_scan, check_invariants, psi_eval, refine, build_model
from cpmm.eigensolve import m_matrix, propagate_s9, spectral_case
from cpmm.eigensolve.recurrence import eigendirection, eigenvalues
from cpmm.mapspec import BasicIntervalId as B
from cpmm.mapspec.gallery import load

shear = 2 + math.sqrt(5)
for lam in (4.0, shear, 6.0):
    M = m_matrix(lam)
    print(f"lambda = {lam:.6f}: trace {np.trace(M):+.6f}, det {np.linalg.det(M):.12f}, {spectral_case(lam)}")

print(propagate_s9(4.0).report())
out = propagate_s9(shear)
print(out.report())
print("entries I_-2..I_3:", [round(out.entries(B("I", i)), 12) for i in range(-2, 4)])

# Above the shear value any seed between the two eigendirections works.
mp, mm = eigenvalues(6.0)
for name, seed in (("on one eigendirection", eigendirection(6.0, mp)),
                   ("between them", eigendirection(6.0, mp) + 0.5 * eigendirection(6.0, mm))):
    o = propagate_s9(6.0, seed)
    print(f"lambda = 6, seed {name}: {o.status}, phase space {o.phase.verdict if o.phase else '-'}")

# psi is affine here: the map already has constant slope 2+sqrt(5).
spec = load("s9")
table = psi_eval(refine(spec, 6, (-3, 3)), out.entries, shear, 0.0)
print(f"{len(table.x)} points, max |psi(x) - (sqrt5+1) x| = "
      f"{np.max(np.abs(table.psi - (math.sqrt(5) + 1) * table.x)):.2e}")
print(build_model(spec, table, shear).report())
print(check_invariants(spec, out.entries, shear, 0.0, 5, (-3, 3)).report())

scan = atom_scan(spec, out.entries, shear, 0.0, [2, 3, 4, 5, 6], (-3, 3))
print("largest jump of psi around P points by depth:",
      {d: f"{g:.2e}" for d, g in scan.max_gap.items()})

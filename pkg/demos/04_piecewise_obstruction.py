"""A piecewise continuous map with an eigenvector at slope 2 but no slope 2 model.

Nested intersections of A_0, f^-1 A_1, ... shrink to a point x_k -> 2 for f,
while the matching sets for the slope 2 map g keep length above 1.
"""
from __future__ import annotations

from cpmm.conjugacy import lengths_nested_intersection_s11, verdict
from cpmm.eigensolve import solve_s11
from cpmm.mapspec.gallery import load

out = solve_s11(2.0)
print(out.report())

r = lengths_nested_intersection_s11(12)
print(" k        x_k          y_k       |f set|      |g set|")
for k in range(12):
    print(f"{k + 1:2d}  {float(r.x[k]):.9f}  {float(r.y[k]):.9f}  {float(r.f_lengths[k]):.3e}  "
          f"{float(r.g_lengths[k]):.6f}")

print(verdict(load("s11"), 2.0).report())

"""Independent oracles shared by several test modules."""
from __future__ import annotations


def _s8_successors(v, limit):
    """Hand-coded successor lists of the s8 graph, indices capped at ``limit``."""
    fam, i = v
    if fam == "D":
        return [("D", None)] + [(f, j) for f in "ABC" for j in range(limit + 1)]
    if fam == "C":
        return [("D", None)] if i == 0 else [("C", i - 1)]
    step = 1 if fam == "A" else 2
    return ([("A", j) for j in range(i + step, limit + 1)] + [("B", j) for j in range(i + step, limit + 1)]
            + [("C", j) for j in range(i, limit + 1)])


def s8_dfs(n, first_only, limit=40):
    """Closed paths of length n at D by depth-first search; first returns when ``first_only``."""
    count = 0
    stack = [(("D", None), 0)]
    while stack:
        v, depth = stack.pop()
        if depth == n:
            count += v == ("D", None)
            continue
        if depth and v == ("D", None) and first_only:
            continue
        for w in _s8_successors(v, limit):
            # C_i needs i+1 more steps to reach D, A_i and B_i at least i+2
            need = 0 if w[0] == "D" else w[1] + (1 if w[0] == "C" else 2)
            if depth + 1 + need <= n:
                stack.append((w, depth + 1))
    return count

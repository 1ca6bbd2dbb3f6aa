"""Loop counts, first returns and recurrence classification at a vertex."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.optimize import bisect

from .errors import InsufficientData, NoBracket
from .mapspec.model import BasicIntervalId
from .mapspec.transitions import TransitionRuleSet, truncate

SPR = "strongly_positive_recurrent"
RECURRENT = "recurrent_not_spr"
TRANSIENT = "transient"
INCONCLUSIVE = "inconclusive"


def _graph(T: TransitionRuleSet, u: BasicIntervalId, n_max: int):
    window = T.loop_window(u, n_max)
    adj, labels = truncate(T, window)
    succ = [[int(j) for j in row.nonzero()[0]] for row in adj]
    return labels, succ, labels.index(u)


def _step(x: list, succ: list, skip: int | None = None) -> list:
    """One step of x -> x A with exact integers; column ``skip`` is dropped."""
    out = [0] * len(x)
    for i, xi in enumerate(x):
        if xi:
            for j in succ[i]:
                out[j] += xi
    if skip is not None:
        out[skip] = 0
    return out


@dataclass
class LoopCounts:
    u: BasicIntervalId
    p: list  # p[n-1] = number of length-n loops at u
    n_max: int
    window: list = field(default_factory=list, repr=False)

    def at(self, n: int) -> int:
        return 1 if n == 0 else self.p[n - 1]


def count_loops(T: TransitionRuleSet, u: BasicIntervalId, n_max: int) -> LoopCounts:
    """p_uu^(n) for 1 <= n <= n_max, exact, on a window no such loop can leave."""
    if n_max <= 0:
        return LoopCounts(u, [], 0)
    labels, succ, k = _graph(T, u, n_max)
    x = [0] * len(labels)
    x[k] = 1
    p = []
    for _ in range(n_max):
        x = _step(x, succ)
        p.append(x[k])
    return LoopCounts(u, p, n_max, labels)


@dataclass
class FirstReturnSeries:
    u: BasicIntervalId | None
    f: list  # f[n-1] = number of first-return loops of length n

    @property
    def n_max(self) -> int:
        return len(self.f)

    def at(self, n: int) -> int:
        return self.f[n - 1]

    def generating(self, lam: float) -> float:
        """sum_{n <= n_max} f^(n) lam^-n, overflow-safe."""
        total = 0.0
        ll = math.log(lam)
        for n, c in enumerate(self.f, start=1):
            if c:
                total += math.exp(math.log(c) - n * ll)
        return total

    def partial_sums(self, lam: float) -> list:
        out, s = [], 0.0
        ll = math.log(lam)
        for n, c in enumerate(self.f, start=1):
            if c:
                s += math.exp(math.log(c) - n * ll)
            out.append(s)
        return out


def first_returns(T: TransitionRuleSet, u: BasicIntervalId, n_max: int) -> FirstReturnSeries:
    """f_uu^(n): paths u -> u of length n that avoid u in between."""
    if n_max <= 0:
        return FirstReturnSeries(u, [])
    labels, succ, k = _graph(T, u, n_max)
    f = [1 if k in succ[k] else 0]
    x = [0] * len(labels)
    x[k] = 1
    x = _step(x, succ, skip=k)
    for _ in range(2, n_max + 1):
        nxt = _step(x, succ)
        f.append(nxt[k])
        nxt[k] = 0
        x = nxt
    return FirstReturnSeries(u, f)


def renewal_defect(loops: LoopCounts, series: FirstReturnSeries) -> list:
    """p^(n) - sum_{k=1..n} f^(k) p^(n-k) for each n (all zeros when consistent)."""
    n = min(loops.n_max, series.n_max)
    return [loops.at(m) - sum(series.at(j) * loops.at(m - j) for j in range(1, m + 1))
            for m in range(1, n + 1)]


@dataclass
class RabbitModel:
    w: list  # w[n-1] = w^(n)
    f: list  # f[n-1] = w^(n) + w^(n-2), with w^(0) = w^(-1) = 0

    def growth_ratio(self, n: int) -> float:
        return self.w[n - 1] / self.w[n - 2]


def rabbit_counts(n_max: int) -> RabbitModel:
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    w = [1, 1, 2]
    while len(w) < n_max:
        w.append(w[-1] + w[-2] + w[-3])
    f = [w[n] + (w[n - 2] if n >= 2 else 0) for n in range(n_max)]
    return RabbitModel(w, f)


@dataclass
class PhiEstimate:
    value: float  # ratio estimate (Aitken-accelerated when that is stable)
    ratio: float
    nth_root: float
    spread: float

    def __float__(self) -> float:
        return self.value


def _nonzero_terms(series) -> list:
    f = series.f if isinstance(series, FirstReturnSeries) else list(series)
    return [(n, c) for n, c in enumerate(f, start=1) if c]


def phi_estimate(series, tail: int = 5) -> PhiEstimate:
    """Growth rate of f^(n) from the last ratios of nonzero terms."""
    terms = _nonzero_terms(series)
    if len(terms) < 10:
        raise InsufficientData(f"need at least 10 nonzero terms, got {len(terms)}")
    ratios = []
    for (n0, c0), (n1, c1) in zip(terms, terms[1:]):
        ratios.append(math.exp((math.log(c1) - math.log(c0)) / (n1 - n0)))
    last = ratios[-tail:]
    spread = max(last) - min(last)
    r0, r1, r2 = ratios[-3:]
    denom = r2 - 2 * r1 + r0
    value = r2
    if abs(denom) > 1e-14 * max(1.0, abs(r2)):
        acc = r2 - (r2 - r1) ** 2 / denom
        if abs(acc - r2) <= spread + 1e-12:
            value = acc
    n, c = terms[-1]
    return PhiEstimate(value, r2, math.exp(math.log(c) / n), spread)


@dataclass
class VereJonesClass:
    verdict: str
    phi: float
    partial_sum: float
    crossing_index: int | None = None
    perron: float | None = None
    generating_at_perron: float | None = None
    tail_bound: float | None = None
    note: str = ""

    def report(self) -> str:
        lines = [f"verdict: {self.verdict}", f"phi: {self.phi:.12g}",
                 f"sum f(n) phi^-n: {self.partial_sum:.12g}"]
        if self.crossing_index is not None:
            lines.append(f"crosses 1 at n = {self.crossing_index}")
        if self.perron is not None:
            lines.append(f"perron estimate: {self.perron:.12g}")
            lines.append(f"sum f(n) perron^-n: {self.generating_at_perron:.12g}")
        if self.note:
            lines.append(f"note: {self.note}")
        return "\n".join(lines) + "\n"


def spr_test(series: FirstReturnSeries, phi: float, perron: float | None = None,
             tol: float = 1e-12) -> VereJonesClass:
    if not phi > 0:
        raise ValueError("phi must be positive")
    sums = series.partial_sums(phi)
    total = sums[-1] if sums else 0.0
    for n, s in enumerate(sums, start=1):
        if s > 1 + tol:
            return VereJonesClass(SPR, phi, total, n, note="partial sums exceed 1")
    if abs(total - 1) <= tol:
        return VereJonesClass(RECURRENT, phi, total,
                              note="generating function equals 1 at phi (boundary case)")
    if perron is None:
        return VereJonesClass(INCONCLUSIVE, phi, total,
                              note="partial sums stay below 1 and no tail bound is available")
    g = series.generating(perron)
    tail = _tail_estimate(series, perron)
    out = VereJonesClass(INCONCLUSIVE, phi, total, perron=perron, generating_at_perron=g,
                         tail_bound=tail)
    if g + tail < 1 - tol:
        out.verdict = TRANSIENT
        out.note = ("generating function at the Perron estimate stays below 1 "
                    "(tail extrapolated from the decay of the last terms)")
    elif abs(g - 1) <= max(tol, tail):
        out.verdict = RECURRENT
        out.note = "generating function at the Perron estimate equals 1"
    else:
        out.note = "tail too large to separate transient from recurrent"
    return out


def _tail_estimate(series: FirstReturnSeries, lam: float) -> float:
    """Geometric extrapolation of sum_{n > n_max} f^(n) lam^-n from the last quarter."""
    terms = [(n, math.log(c) - n * math.log(lam)) for n, c in _nonzero_terms(series)]
    if len(terms) < 8:
        return math.inf
    n1, l1 = terms[-1]
    n0, l0 = terms[-max(2, len(terms) // 4)]
    rate = (l1 - l0) / (n1 - n0)
    if rate >= 0:
        return math.inf
    r = math.exp(rate)
    return math.exp(l1) * r / (1 - r)


def perron_from_generating_function(series: FirstReturnSeries, bracket=(1.0, 10.0),
                                    xtol: float = 1e-12) -> float:
    """The lam with sum_{n <= n_max} f^(n) lam^-n = 1, by bisection."""
    lo, hi = bracket
    g = lambda lam: series.generating(lam) - 1.0
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return lo
    if ghi == 0:
        return hi
    if glo * ghi > 0:
        raise NoBracket(f"sum f(n) lam^-n - 1 has the same sign at {lo} and {hi}")
    return bisect(g, lo, hi, xtol=xtol, rtol=8.9e-16, maxiter=500)


def tribonacci_constant() -> float:
    """Real root of x^3 - x^2 - x - 1."""
    return bisect(lambda x: x ** 3 - x ** 2 - x - 1, 1.0, 2.0, xtol=1e-15, rtol=8.9e-16)


@dataclass(frozen=True)
class TreeNode:
    word: tuple  # the A/B letters of x as (family, index)
    n: int  # the path ends C_n ... C_0 D, with D = C_-1
    parent: tuple  # (level, index) of the parent, () at the root

    @property
    def length(self) -> int:
        return len(self.word) + self.n + 2

    def label(self) -> str:
        mid = [f"{f}{i}" for f, i in self.word] + [f"C{k}" for k in range(self.n, -1, -1)]
        return " ".join(["D"] + mid + ["D"])


def first_return_tree(levels: int) -> list[list[TreeNode]]:
    """First return paths D x C_n ... C_0 D of the interval example, grouped by length.

    A path whose word x does not end in B_n has three children
    (x C_n+1, x A_n+1, x B_n+1); otherwise only x C_n+1.  The C child is one
    step longer, the other two are two steps longer.
    """
    if levels < 1:
        raise ValueError("levels must be at least 1")
    out: list[list[TreeNode]] = [[TreeNode((), -1, ())]] + [[] for _ in range(levels - 1)]
    for lv in range(levels):
        for k, node in enumerate(out[lv]):
            m = node.n + 1
            kids = [TreeNode(node.word, m, (lv, k))]
            if not node.word or node.word[-1] != ("B", node.n):
                kids += [TreeNode(node.word + (("A", m),), m, (lv, k)),
                         TreeNode(node.word + (("B", m),), m, (lv, k))]
            for child in kids:
                if child.length - 1 < levels:
                    out[child.length - 1].append(child)
    return out


__all__ = [
    "TreeNode", "first_return_tree",
    "FirstReturnSeries", "LoopCounts", "PhiEstimate", "RabbitModel", "VereJonesClass",
    "count_loops", "first_returns", "perron_from_generating_function", "phi_estimate",
    "rabbit_counts", "renewal_defect", "spr_test", "tribonacci_constant",
]

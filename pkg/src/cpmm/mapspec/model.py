"""Declarative data model of a countably piecewise monotone Markov map."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from .expr import Node, evaluate, to_float

NATURALS = "naturals"
INTEGERS = "integers"
SINGLETON = "singleton"
INDEX_KINDS = (NATURALS, INTEGERS, SINGLETON)


@dataclass(frozen=True, order=True)
class BasicIntervalId:
    """A basic interval: family label, integer index (None for singletons)
    and an optional sub-piece number for branches refined at turning points."""

    family: str
    index: int | None = None
    sub: int | None = None

    def whole(self) -> "BasicIntervalId":
        return BasicIntervalId(self.family, self.index) if self.sub is not None else self

    def __str__(self) -> str:
        s = self.family if self.index is None else f"{self.family}_{self.index}"
        return s if self.sub is None else f"{s}^{self.sub}"

    @classmethod
    def parse(cls, text: str) -> "BasicIntervalId":
        base, _, sub = text.partition("^")
        fam, _, idx = base.partition("_")
        return cls(fam, int(idx) if idx else None, int(sub) if sub else None)


@dataclass(frozen=True)
class IndexSetDecl:
    name: str
    expr: Node
    var: str = "m"
    start: int = 0


class IndexSet:
    """Increasing integer set given by a formula in one counter variable."""

    def __init__(self, decl: IndexSetDecl, env: dict):
        self.decl = decl
        self._env = env
        self._members: list[int] = []
        self._counter = decl.start

    def _extend_to(self, n) -> None:
        while not self._members or self._members[-1] < n:
            val = evaluate(self.decl.expr, {**self._env, self.decl.var: self._counter})
            val = int(round(to_float(val)))
            if self._members and val <= self._members[-1]:
                raise ValueError(f"index set {self.decl.name} is not increasing")
            self._members.append(val)
            self._counter += 1

    def __contains__(self, n) -> bool:
        if int(n) != n:
            return False
        self._extend_to(n)
        lo, hi = 0, len(self._members)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._members[mid] < n:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(self._members) and self._members[lo] == n

    def count_upto(self, n) -> int:
        """Number of members m with 1 <= m <= n."""
        self._extend_to(n)
        return sum(1 for m in self._members if 1 <= m <= n)

    def members_upto(self, n) -> list[int]:
        self._extend_to(n)
        return [m for m in self._members if m <= n]


@dataclass(frozen=True)
class FamilyDecl:
    name: str
    kind: str
    lo: Node | None = None
    hi: Node | None = None
    accumulates: tuple = ()


@dataclass(frozen=True)
class Segment:
    """One slot of the left-to-right order pattern.

    ``families`` empty means an accumulation point (``*``).  ``direction`` is
    +1 when the index increases to the right, -1 when it decreases, and 0
    for singletons and stars.
    """

    families: tuple = ()
    direction: int = 0

    @property
    def is_star(self) -> bool:
        return not self.families


@dataclass(frozen=True)
class IdPattern:
    family: str
    index: Node | None = None


@dataclass(frozen=True)
class Target:
    """Either ``all`` or the union of basic intervals from ``first`` to ``last``."""

    first: IdPattern | None = None
    last: IdPattern | None = None

    @property
    def is_all(self) -> bool:
        return self.first is None


@dataclass(frozen=True)
class BranchDecl:
    family: str
    when: Node | None
    slopes: tuple  # entries are "+", "-" or expression nodes
    targets: tuple


@dataclass(frozen=True)
class Term:
    """Transition target: ``all``, a singleton, or ``F_j for j in lo..hi``."""

    kind: str  # "all" | "single" | "range"
    family: str | None = None
    lo: Node | None = None
    hi: Node | None = None


@dataclass(frozen=True)
class TransitionDecl:
    family: str
    when: Node | None
    terms: tuple


@dataclass(frozen=True)
class MapSpec:
    space: tuple  # (lo node, hi node)
    consts: tuple = ()  # ((name, node), ...)
    indexsets: tuple = ()
    families: tuple = ()
    order: tuple = ()  # Segment tuple
    branches: tuple = ()
    transitions: tuple = ()
    continuity: str = "global"
    fixed: tuple = ()
    images: tuple = ()  # ((x node, y node), ...)
    chart: str | None = None
    name: str | None = field(default=None, compare=False)

    # -- evaluation environment ---------------------------------------------
    @cached_property
    def env(self) -> dict:
        env: dict = {}
        for name, node in self.consts:
            env[name] = evaluate(node, env, self.sets)
        return env

    @cached_property
    def sets(self) -> dict:
        out: dict = {}
        base: dict = {}
        for name, node in self.consts:
            try:
                base[name] = evaluate(node, base, out)
            except KeyError:
                break
        for decl in self.indexsets:
            out[decl.name] = IndexSet(decl, base)
        return out

    def family(self, name: str) -> FamilyDecl:
        for f in self.families:
            if f.name == name:
                return f
        raise KeyError(f"unknown family {name!r}")

    @cached_property
    def geom(self):
        from .geometry import Geometry
        return Geometry(self)

    @cached_property
    def family_names(self) -> tuple:
        return tuple(f.name for f in self.families)

    @cached_property
    def space_values(self) -> tuple:
        return tuple(to_float(evaluate(n, self.env, self.sets)) for n in self.space)

    def value(self, node: Node, **bindings):
        return evaluate(node, {**self.env, **bindings}, self.sets)

    @cached_property
    def fixed_values(self) -> tuple:
        return tuple(to_float(self.value(n)) for n in self.fixed)

    @cached_property
    def image_values(self) -> tuple:
        return tuple((to_float(self.value(a)), to_float(self.value(b))) for a, b in self.images)

    # -- ordering -------------------------------------------------------------
    @cached_property
    def segment_of(self) -> dict:
        """family -> (segment position, member position, direction)."""
        out = {}
        for pos, seg in enumerate(self.order):
            for m, fam in enumerate(seg.families):
                out[fam] = (pos, m, seg.direction)
        return out

    def order_key(self, bid: BasicIntervalId) -> tuple:
        pos, member, direction = self.segment_of[bid.family]
        t = 0 if bid.index is None else direction * bid.index
        return (pos, t, member, -1 if bid.sub is None else bid.sub)

    def index_in_range(self, family: str, index) -> bool:
        kind = self.family(family).kind
        if kind == SINGLETON:
            return index is None
        if index is None or int(index) != index:
            return False
        return kind == INTEGERS or index >= 0

    def iter_indices(self, family: str, radius: int) -> Iterator:
        kind = self.family(family).kind
        if kind == SINGLETON:
            yield None
        elif kind == NATURALS:
            yield from range(0, radius + 1)
        else:
            yield from range(-radius, radius + 1)

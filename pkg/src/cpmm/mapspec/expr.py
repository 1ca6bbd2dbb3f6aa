"""Closed expression language for endpoint formulas, slopes and index bounds.

Expressions are single whitespace-free tokens inside a ``.cpmm`` line, e.g.
``2^(i+1)+2*i-2`` or ``floor(i/2)+mod(i,2)*b``.  Integers stay exact
(Python ints) under ``+ - * ^`` so index arithmetic never rounds; ``/`` is
true division.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Mapping

from scipy.optimize import bisect

from ..errors import SpecSyntaxError

__all__ = [
    "Node", "Num", "Name", "Neg", "Not", "Bin", "Call",
    "parse_expr", "to_str", "evaluate", "to_float", "free_names", "substitute",
]


class Node:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Node):
    value: int | float


@dataclass(frozen=True)
class Name(Node):
    id: str


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class Not(Node):
    operand: Node


@dataclass(frozen=True)
class Bin(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Call(Node):
    fn: str
    args: tuple


_PREC = {"&": 1, "=": 2, "!=": 2, "<": 2, "<=": 2, ">": 2, ">=": 2,
         "+": 3, "-": 3, "*": 4, "/": 4, "^": 6}
_UNARY_PREC = 5

_TOKEN = re.compile(
    r"(?P<num>\d+\.\d*(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op><=|>=|!=|[-+*/^()=<>,&!])"
)

FUNCTIONS = {
    "sqrt": 1, "floor": 1, "ceil": 1, "abs": 1, "exp": 1, "log": 1,
    "logistic": 1, "logit": 1, "mod": 2, "min": 2, "max": 2,
    "root": 3, "member": 2, "count": 2,
}


def _tokenize(text: str, col0: int = 1):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r} in expression {text!r}",
                                  column=col0 + pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), col0 + pos))
        pos = m.end()
    out.append(("end", "", col0 + pos))
    return out


class _Parser:
    def __init__(self, text, col0):
        self.text = text
        self.toks = _tokenize(text, col0)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise SpecSyntaxError(f"expected {value!r} in {self.text!r}, got {tok[1] or 'end'!r}",
                                  column=tok[2])
        self.i += 1
        return tok

    def expr(self, min_prec=0):
        left = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind != "op" or val not in _PREC:
                return left
            prec = _PREC[val]
            if prec < min_prec:
                return left
            self.take()
            if val == "^":
                right = self.expr(prec)  # right associative
            elif prec == 2:
                right = self.expr(prec + 1)
                left = Bin(val, left, right)
                kind2, val2, col = self.peek()
                if kind2 == "op" and _PREC.get(val2) == 2:
                    raise SpecSyntaxError("chained comparison", column=col)
                continue
            else:
                right = self.expr(prec + 1)
            left = Bin(val, left, right)

    def unary(self):
        kind, val, col = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.expr(_UNARY_PREC))
        if kind == "op" and val == "!":
            self.take()
            return Not(self.expr(_UNARY_PREC))
        return self.atom()

    def atom(self):
        kind, val, col = self.take()
        if kind == "num":
            return Num(float(val) if any(c in val for c in ".eE") else int(val))
        if kind == "name":
            if self.peek()[1] == "(":
                if val not in FUNCTIONS:
                    raise SpecSyntaxError(f"unknown function {val!r}", column=col)
                self.take("(")
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.take(")")
                if len(args) != FUNCTIONS[val]:
                    raise SpecSyntaxError(f"{val} takes {FUNCTIONS[val]} arguments", column=col)
                return Call(val, tuple(args))
            return Name(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.take(")")
            return e
        raise SpecSyntaxError(f"unexpected {val or 'end of expression'!r} in {self.text!r}", column=col)


def parse_expr(text: str, column: int = 1) -> Node:
    if not text:
        raise SpecSyntaxError("empty expression", column=column)
    p = _Parser(text, column)
    node = p.expr()
    kind, val, col = p.peek()
    if kind != "end":
        raise SpecSyntaxError(f"trailing {val!r} in expression {text!r}", column=col)
    return node


def _prec(node: Node) -> int:
    if isinstance(node, Bin):
        return _PREC[node.op]
    if isinstance(node, (Neg, Not)):
        return _UNARY_PREC
    if isinstance(node, Num) and node.value < 0:
        return _UNARY_PREC
    return 7


def to_str(node: Node) -> str:
    """Canonical text; ``parse_expr(to_str(e)) == e`` for parsed trees."""
    if isinstance(node, Num):
        v = node.value
        s = repr(v) if isinstance(v, float) else str(v)
        return s
    if isinstance(node, Name):
        return node.id
    if isinstance(node, (Neg, Not)):
        sym = "-" if isinstance(node, Neg) else "!"
        inner = to_str(node.operand)
        if _prec(node.operand) <= _UNARY_PREC:
            inner = f"({inner})"
        return sym + inner
    if isinstance(node, Call):
        return f"{node.fn}({','.join(to_str(a) for a in node.args)})"
    if isinstance(node, Bin):
        p = _PREC[node.op]
        left, right = to_str(node.left), to_str(node.right)
        if node.op == "^":
            if _prec(node.left) <= p:
                left = f"({left})"
            if _prec(node.right) < p:
                right = f"({right})"
        else:
            if _prec(node.left) < p or (p == 2 and _prec(node.left) == 2):
                left = f"({left})"
            if _prec(node.right) <= p:
                right = f"({right})"
        return f"{left}{node.op}{right}"
    raise TypeError(node)


def to_float(v) -> float:
    try:
        return float(v)
    except OverflowError:
        return math.inf if v > 0 else -math.inf


def _logistic(x):
    x = to_float(x)
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _pow(a, b):
    if isinstance(a, int) and isinstance(b, int):
        if b >= 0:
            return a ** b
        if a in (1, -1):
            return a ** (-b)
        if a == 0:
            return math.inf
        try:
            return float(a) ** b
        except OverflowError:
            return 0.0
    try:
        return to_float(a) ** to_float(b)
    except OverflowError:
        return math.inf
    except ZeroDivisionError:
        return math.inf


def _div(a, b):
    try:
        return a / b
    except OverflowError:
        return to_float(a) / to_float(b)
    except ZeroDivisionError:
        if a == 0:
            return math.nan
        return math.inf if a > 0 else -math.inf


def _mod(a, b):
    return a % b


def _floor(x):
    if isinstance(x, int):
        return x
    return math.floor(x) if math.isfinite(x) else x


def _ceil(x):
    if isinstance(x, int):
        return x
    return math.ceil(x) if math.isfinite(x) else x


_ARITH: dict[str, Callable] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
    "^": _pow,
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "&": lambda a, b: bool(a) and bool(b),
}

_SIMPLE = {
    "sqrt": lambda x: math.sqrt(to_float(x)) if x != math.inf else math.inf,
    "floor": _floor,
    "ceil": _ceil,
    "abs": abs,
    "exp": lambda x: math.exp(x) if x < 709 else math.inf,
    "log": lambda x: math.log(x) if x > 0 else -math.inf,
    "logistic": _logistic,
    "logit": lambda x: math.log(x / (1 - x)) if 0 < x < 1 else (-math.inf if x <= 0 else math.inf),
    "mod": _mod,
    "min": min,
    "max": max,
}


def evaluate(node: Node, env: Mapping, sets: Mapping | None = None):
    """Evaluate ``node``.  ``env`` maps names to numbers; ``sets`` maps
    index-set names to objects with ``__contains__`` and ``count_upto(n)``."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Name):
        if node.id in env:
            return env[node.id]
        if node.id == "inf":
            return math.inf
        raise KeyError(f"undefined name {node.id!r}")
    if isinstance(node, Neg):
        return -evaluate(node.operand, env, sets)
    if isinstance(node, Not):
        return not evaluate(node.operand, env, sets)
    if isinstance(node, Bin):
        if node.op == "&":
            return bool(evaluate(node.left, env, sets)) and bool(evaluate(node.right, env, sets))
        return _ARITH[node.op](evaluate(node.left, env, sets), evaluate(node.right, env, sets))
    if isinstance(node, Call):
        if node.fn == "root":
            body, lo, hi = node.args
            g = lambda x: to_float(evaluate(body, {**env, "x": x}, sets))
            return bisect(g, to_float(evaluate(lo, env, sets)), to_float(evaluate(hi, env, sets)),
                          xtol=1e-15, rtol=8.9e-16, maxiter=500)
        if node.fn in ("member", "count"):
            a, b = node.args
            if node.fn == "member":
                sname, val = b, evaluate(a, env, sets)
            else:
                sname, val = a, evaluate(b, env, sets)
            if not isinstance(sname, Name) or sets is None or sname.id not in sets:
                raise KeyError(f"unknown index set in {to_str(node)}")
            s = sets[sname.id]
            return (1 if val in s else 0) if node.fn == "member" else s.count_upto(val)
        args = [evaluate(a, env, sets) for a in node.args]
        return _SIMPLE[node.fn](*args)
    raise TypeError(node)


def free_names(node: Node, bound=frozenset()) -> set[str]:
    if isinstance(node, Num):
        return set()
    if isinstance(node, Name):
        return set() if node.id in bound or node.id == "inf" else {node.id}
    if isinstance(node, (Neg, Not)):
        return free_names(node.operand, bound)
    if isinstance(node, Bin):
        return free_names(node.left, bound) | free_names(node.right, bound)
    if isinstance(node, Call):
        if node.fn == "root":
            return (free_names(node.args[0], bound | {"x"})
                    | free_names(node.args[1], bound) | free_names(node.args[2], bound))
        if node.fn == "member":
            return free_names(node.args[0], bound)
        if node.fn == "count":
            return free_names(node.args[1], bound)
        out = set()
        for a in node.args:
            out |= free_names(a, bound)
        return out
    raise TypeError(node)


def substitute(node: Node, mapping: Mapping[str, Node]) -> Node:
    """Replace free names by expression trees (used to rename index variables)."""
    if isinstance(node, Name):
        return mapping.get(node.id, node)
    if isinstance(node, Num):
        return node
    if isinstance(node, Neg):
        return Neg(substitute(node.operand, mapping))
    if isinstance(node, Not):
        return Not(substitute(node.operand, mapping))
    if isinstance(node, Bin):
        return Bin(node.op, substitute(node.left, mapping), substitute(node.right, mapping))
    if isinstance(node, Call):
        if node.fn == "root":
            inner = {k: v for k, v in mapping.items() if k != "x"}
            return Call("root", (substitute(node.args[0], inner),)
                        + tuple(substitute(a, mapping) for a in node.args[1:]))
        if node.fn == "member":
            return Call("member", (substitute(node.args[0], mapping), node.args[1]))
        if node.fn == "count":
            return Call("count", (node.args[0], substitute(node.args[1], mapping)))
        return Call(node.fn, tuple(substitute(a, mapping) for a in node.args))
    raise TypeError(node)

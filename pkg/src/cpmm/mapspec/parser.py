"""Reader and canonical writer for the line-oriented ``.cpmm`` format."""
from __future__ import annotations

import re

from ..errors import SpecSyntaxError
from .expr import Node, parse_expr, to_str
from .model import (
    INDEX_KINDS, INTEGERS, NATURALS, SINGLETON, BranchDecl, FamilyDecl,
    IdPattern, IndexSetDecl, MapSpec, Segment, Target, Term, TransitionDecl,
)

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9]*$")
_SEGMENT = re.compile(r"^(?:\*|([A-Za-z][A-Za-z0-9]*)([+-]?)|\(([A-Za-z0-9,]+)\)([+-]))$")
_IDPAT = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\[(.+)\])?$")
_SOURCE = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:_([a-z]))?$")
_TERM_RANGE = re.compile(r"^([A-Za-z][A-Za-z0-9]*)_([a-z])$")

KEYWORDS = ("space", "const", "indexset", "family", "order", "branch",
            "transition", "continuity", "fixed", "image", "chart")


class _Line:
    def __init__(self, lineno: int, text: str):
        self.lineno = lineno
        self.toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", text)]
        self.pos = 0
        self.end_col = len(text) + 1

    def error(self, msg, col=None):
        if col is None:
            col = self.toks[self.pos][1] if self.pos < len(self.toks) else self.end_col
        return SpecSyntaxError(msg, line=self.lineno, column=col)

    def more(self) -> bool:
        return self.pos < len(self.toks)

    def peek(self):
        return self.toks[self.pos][0] if self.more() else None

    def take(self, expected: str | None = None):
        if not self.more():
            raise self.error(f"unexpected end of line, expected {expected or 'more input'}")
        tok, col = self.toks[self.pos]
        if expected is not None and tok != expected:
            raise self.error(f"expected {expected!r}, got {tok!r}")
        self.pos += 1
        return tok, col

    def expr(self) -> Node:
        tok, col = self.take("an expression") if not self.more() else self.take()
        try:
            return parse_expr(tok, col)
        except SpecSyntaxError as e:
            raise SpecSyntaxError(str(e).split(": ", 1)[-1], line=self.lineno, column=e.column) from None

    def name(self) -> str:
        tok, col = self.take()
        if not _NAME.match(tok):
            raise self.error(f"invalid name {tok!r}", col)
        return tok

    def done(self):
        if self.more():
            raise self.error(f"unexpected trailing {self.peek()!r}")


def _parse_idpattern(line: _Line, tok: str, col: int) -> IdPattern:
    m = _IDPAT.match(tok)
    if not m:
        raise line.error(f"invalid interval reference {tok!r}", col)
    idx = parse_expr(m.group(2), col + len(m.group(1)) + 1) if m.group(2) else None
    return IdPattern(m.group(1), idx)


def _parse_target(line: _Line, tok: str, col: int) -> Target:
    if tok == "all":
        return Target()
    depth = 0
    for k, ch in enumerate(tok):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif depth == 0 and tok.startswith("..", k):
            first = _parse_idpattern(line, tok[:k], col)
            last = _parse_idpattern(line, tok[k + 2:], col + k + 2)
            return Target(first, last)
    pat = _parse_idpattern(line, tok, col)
    return Target(pat, pat)


def _parse_source(line: _Line):
    tok, col = line.take()
    m = _SOURCE.match(tok)
    if not m:
        raise line.error(f"invalid source {tok!r}", col)
    if m.group(2) not in (None, "i"):
        raise line.error("source index variable must be 'i'", col)
    when = None
    if line.peek() == "when":
        line.take()
        when = line.expr()
    return m.group(1), m.group(2) is not None, when


def _parse_segment(line: _Line, tok: str, col: int) -> Segment:
    m = _SEGMENT.match(tok)
    if not m:
        raise line.error(f"invalid order item {tok!r}", col)
    if tok == "*":
        return Segment()
    sign = m.group(2) if m.group(1) else m.group(4)
    fams = (m.group(1),) if m.group(1) else tuple(m.group(3).split(","))
    if any(not _NAME.match(f) for f in fams):
        raise line.error(f"invalid order item {tok!r}", col)
    return Segment(fams, {"+": 1, "-": -1, "": 0}[sign])


def _parse_term(line: _Line) -> Term:
    tok, col = line.take()
    if tok == "all":
        return Term("all")
    m = _TERM_RANGE.match(tok)
    if not m:
        if _NAME.match(tok):
            return Term("single", tok)
        raise line.error(f"invalid transition term {tok!r}", col)
    fam, var = m.groups()
    line.take("for")
    v, vcol = line.take()
    if v != var:
        raise line.error(f"range variable {v!r} does not match {var!r}", vcol)
    line.take("in")
    rng, rcol = line.take()
    if ".." not in rng:
        raise line.error(f"expected range lo..hi, got {rng!r}", rcol)
    lo_s, hi_s = rng.split("..", 1)
    lo = parse_expr(lo_s, rcol) if lo_s else None
    hi = parse_expr(hi_s, rcol + len(lo_s) + 2) if hi_s else None
    return Term("range", fam, lo, hi)


def parse_spec(text: str, *, validate: bool = True, name: str | None = None) -> MapSpec:
    """Parse ``.cpmm`` text.  With ``validate`` the structural checks of
    :func:`cpmm.mapspec.validate.validate_spec` run before returning."""
    parts: dict = {k: [] for k in KEYWORDS}
    seen_any = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        seen_any = True
        line = _Line(lineno, body)
        kw, col = line.take()
        if kw not in KEYWORDS:
            raise line.error(f"unknown keyword {kw!r}", col)
        parts[kw].append(_parse_line(kw, line))
    if not seen_any:
        raise SpecSyntaxError("empty document", line=1, column=1)
    if len(parts["space"]) != 1:
        raise SpecSyntaxError("exactly one 'space' line is required", line=1, column=1)
    if len(parts["order"]) != 1:
        raise SpecSyntaxError("exactly one 'order' line is required", line=1, column=1)
    if len(parts["continuity"]) > 1 or len(parts["chart"]) > 1:
        raise SpecSyntaxError("'continuity' and 'chart' may appear at most once", line=1, column=1)
    spec = MapSpec(
        space=parts["space"][0],
        consts=tuple(parts["const"]),
        indexsets=tuple(parts["indexset"]),
        families=tuple(parts["family"]),
        order=parts["order"][0],
        branches=tuple(parts["branch"]),
        transitions=tuple(parts["transition"]),
        continuity=parts["continuity"][0] if parts["continuity"] else "global",
        fixed=tuple(parts["fixed"]),
        images=tuple(parts["image"]),
        chart=parts["chart"][0] if parts["chart"] else None,
        name=name,
    )
    if validate:
        from .validate import validate_spec
        validate_spec(spec)
    return spec


def _parse_line(kw: str, line: _Line):
    if kw == "space":
        out = (line.expr(), line.expr())
    elif kw == "const":
        nm = line.name()
        line.take("=")
        out = (nm, line.expr())
    elif kw == "indexset":
        nm = line.name()
        line.take("=")
        e = line.expr()
        line.take("for")
        var = line.name()
        line.take("in")
        rng, col = line.take()
        if not re.fullmatch(r"-?\d+\.\.", rng):
            raise line.error(f"expected 'START..', got {rng!r}", col)
        out = IndexSetDecl(nm, e, var, int(rng[:-2]))
    elif kw == "family":
        nm = line.name()
        line.take("index")
        kind, col = line.take()
        if kind not in INDEX_KINDS:
            raise line.error(f"index must be one of {', '.join(INDEX_KINDS)}", col)
        lo = hi = None
        acc: tuple = ()
        if line.peek() == "endpoints":
            line.take()
            lo, hi = line.expr(), line.expr()
        if line.peek() == "accumulates":
            line.take()
            acc = (line.expr(),)
            if line.more():
                acc += (line.expr(),)
        if lo is None:
            raise line.error("family needs 'endpoints <lo> <hi>'")
        out = FamilyDecl(nm, kind, lo, hi, acc)
    elif kw == "order":
        segs = []
        while line.more():
            tok, col = line.take()
            segs.append(_parse_segment(line, tok, col))
        if not segs:
            raise line.error("empty order pattern")
        out = tuple(segs)
    elif kw == "branch":
        fam, indexed, when = _parse_source(line)
        line.take("pieces")
        ntok, ncol = line.take()
        if not ntok.isdigit() or int(ntok) < 1:
            raise line.error(f"piece count must be a positive integer, got {ntok!r}", ncol)
        n = int(ntok)
        line.take("slopes")
        slopes = []
        for _ in range(n):
            tok, col = line.take()
            slopes.append(tok if tok in ("+", "-") else parse_expr(tok, col))
        line.take("targets")
        targets = []
        for _ in range(n):
            tok, col = line.take()
            targets.append(_parse_target(line, tok, col))
        out = BranchDecl(fam, when, tuple(slopes), tuple(targets))
    elif kw == "transition":
        fam, indexed, when = _parse_source(line)
        line.take("->")
        terms = [_parse_term(line)]
        while line.peek() == "|":
            line.take()
            terms.append(_parse_term(line))
        out = TransitionDecl(fam, when, tuple(terms))
    elif kw == "continuity":
        tok, col = line.take()
        if tok not in ("global", "piecewise"):
            raise line.error("continuity must be 'global' or 'piecewise'", col)
        out = tok
    elif kw == "fixed":
        out = line.expr()
    elif kw == "image":
        out = (line.expr(), line.expr())
    elif kw == "chart":
        out = line.name()
    line.done()
    return out


# -- printing -----------------------------------------------------------------

def _seg_str(seg: Segment) -> str:
    if seg.is_star:
        return "*"
    sign = {1: "+", -1: "-", 0: ""}[seg.direction]
    if len(seg.families) == 1:
        return seg.families[0] + sign
    return f"({','.join(seg.families)}){sign}"


def _pat_str(p: IdPattern) -> str:
    return p.family if p.index is None else f"{p.family}[{to_str(p.index)}]"


def _target_str(t: Target) -> str:
    if t.is_all:
        return "all"
    if t.first == t.last:
        return _pat_str(t.first)
    return f"{_pat_str(t.first)}..{_pat_str(t.last)}"


def _source_str(spec: MapSpec, fam: str, when) -> str:
    kind = spec.family(fam).kind
    s = fam if kind == SINGLETON else f"{fam}_i"
    return s if when is None else f"{s} when {to_str(when)}"


def _term_str(t: Term) -> str:
    if t.kind == "all":
        return "all"
    if t.kind == "single":
        return t.family
    lo = "" if t.lo is None else to_str(t.lo)
    hi = "" if t.hi is None else to_str(t.hi)
    return f"{t.family}_j for j in {lo}..{hi}"


def print_spec(spec: MapSpec) -> str:
    """Canonical text: one declaration per line, single spaces, fixed section order."""
    out = [f"space {to_str(spec.space[0])} {to_str(spec.space[1])}"]
    out += [f"const {n} = {to_str(e)}" for n, e in spec.consts]
    out += [f"indexset {d.name} = {to_str(d.expr)} for {d.var} in {d.start}.." for d in spec.indexsets]
    for f in spec.families:
        s = f"family {f.name} index {f.kind} endpoints {to_str(f.lo)} {to_str(f.hi)}"
        if f.accumulates:
            s += " accumulates " + " ".join(to_str(a) for a in f.accumulates)
        out.append(s)
    out.append("order " + " ".join(_seg_str(s) for s in spec.order))
    for b in spec.branches:
        slopes = " ".join(s if isinstance(s, str) else to_str(s) for s in b.slopes)
        targets = " ".join(_target_str(t) for t in b.targets)
        out.append(f"branch {_source_str(spec, b.family, b.when)} pieces {len(b.slopes)} "
                   f"slopes {slopes} targets {targets}")
    for t in spec.transitions:
        out.append(f"transition {_source_str(spec, t.family, t.when)} -> "
                   + " | ".join(_term_str(x) for x in t.terms))
    out.append(f"continuity {spec.continuity}")
    out += [f"fixed {to_str(e)}" for e in spec.fixed]
    out += [f"image {to_str(a)} {to_str(b)}" for a, b in spec.images]
    if spec.chart:
        out.append(f"chart {spec.chart}")
    return "\n".join(out) + "\n"

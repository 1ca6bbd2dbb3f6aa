"""Built-in example maps, addressable by short keys."""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources

from .expr import Call, Name, Neg, Num
from .model import (
    BranchDecl, FamilyDecl, IdPattern, MapSpec, Segment, Target, Term, TransitionDecl,
)
from .parser import parse_spec, print_spec


@dataclass(frozen=True)
class Expectation:
    """A documented outcome together with the command line that reproduces it."""

    outcome: str
    argv: tuple
    shows: str  # fragment of the command's stdout
    exit_code: int = 0


@dataclass(frozen=True)
class GalleryEntry:
    key: str
    filename: str | None
    summary: str
    expected: tuple  # of Expectation


def _x(outcome, cmd, shows, code=0):
    return Expectation(outcome, tuple(cmd.split()), shows, code)


ENTRIES = {
    "s8-interval": GalleryEntry(
        "s8-interval", "example8.cpmm",
        "finite interval map with conjugate constant slope models for every slope >= lam_min",
        (_x("eigenvector at lam_min, summable, finite interval",
            "eigen --gallery s8 --lambda lam_min", "phase space: finite_interval"),
         _x("no eigenvector below lam_min", "eigen --gallery s8 --lambda 2.5", "status: none"),
         _x("strongly positive recurrent, entropy log lam_min", "entropy --gallery s8",
            "verdict: strongly_positive_recurrent"),
         _x("conjugate to a constant slope map on a finite interval",
            "conjugate --gallery s8 --lambda 3", "verdict: conjugate_model"))),
    "s9-extended": GalleryEntry(
        "s9-extended", "example9.cpmm",
        "connect-the-dots map F on the extended real line, slope 2+sqrt(5)",
        (_x("unique eigenvector (2, sqrt5-1) at 2+sqrt5", "eigen --gallery s9 --lambda 2+sqrt(5)",
            "status: exists_unique"),
         _x("no eigenvector below 2+sqrt5", "eigen --gallery s9 --lambda 4", "status: none"),
         _x("two-parameter family above 2+sqrt5", "eigen --gallery s9 --lambda 6",
            "status: exists_family (dim 2)"),
         _x("conjugate to a constant slope map on the extended line",
            "conjugate --gallery s9 --depth 5 --window=-3,3", "verdict: conjugate_model"))),
    "s10-none": GalleryEntry(
        "s10-none", "example10.cpmm",
        "mixing map on [0,1] with no nonnegative eigenvector",
        (_x("no eigenvector for any lambda", "eigen --gallery s10 --lambda-sweep 1.5,2,2.5,3,4,8",
            "status: none"),
         _x("transient", "entropy --gallery s10 --n-max 120", "verdict: transient"),
         _x("no constant slope model", "conjugate --gallery s10", "verdict: obstructed", 4))),
    "s11-pcws": GalleryEntry(
        "s11-pcws", "example11.cpmm",
        "piecewise continuous map f with an eigenvector at 2 but no conjugate slope-2 model",
        (_x("eigenvector a_i = 2^i+1, b_i = 1", "eigen --gallery s11 --lambda 2", "status: exists_unique"),
         _x("obstructed: x_k -> 2 while y_k -> 1", "conjugate --gallery s11",
            "no conjugacy to constant slope 2", 4))),
    "s11-g": GalleryEntry(
        "s11-g", "example11g.cpmm",
        "slope-2 companion map g with a wandering interval",
        (_x("valid piecewise continuous spec", "validate --gallery s11g", "continuity: piecewise"),)),
    "s12-nonmixing": GalleryEntry(
        "s12-nonmixing", None,
        "transitive non-mixing square root of the s9 map on [-1,1]",
        (_x("eigenvector at sqrt(2+sqrt5)", "eigen --gallery s12", "status: exists_unique"),
         _x("obstructed: infinite length near 0", "conjugate --gallery s12",
            "infinite psi-length", 4))),
    "s2-toy": GalleryEntry(
        "s2-toy", "toy2.cpmm",
        "translation x -> x-1 of the extended line (plot only)",
        (_x("graph of the translation", "plot --gallery s2 --kind map-graph", "<polyline"),)),
    "tent": GalleryEntry(
        "tent", "tent.cpmm",
        "full tent map, the two-vertex complete graph",
        (_x("entropy log 2", "entropy --gallery tent", "entropy estimate: log 2 = 0.69314718056"),)),
}

ALIASES = {"s8": "s8-interval", "s9": "s9-extended", "s10": "s10-none",
           "s11": "s11-pcws", "s11g": "s11-g", "s12": "s12-nonmixing", "s2": "s2-toy"}


def keys() -> list[str]:
    return list(ENTRIES)


def canonical_key(key: str) -> str:
    key = ALIASES.get(key, key)
    if key not in ENTRIES:
        raise KeyError(f"unknown gallery key {key!r}; choose from {', '.join(ENTRIES)}")
    return key


def text(key: str) -> str:
    key = canonical_key(key)
    entry = ENTRIES[key]
    if entry.filename is None:
        return print_spec(load(key))
    return resources.files("cpmm.mapspec").joinpath("data", entry.filename).read_text()


@lru_cache(maxsize=None)
def load(key: str) -> MapSpec:
    key = canonical_key(key)
    entry = ENTRIES[key]
    if entry.filename is None:
        from .validate import validate_spec
        spec = replace(reflect(load("s9-extended")), name=key)
        validate_spec(spec)
        return spec
    return parse_spec(text(key), name=key)


def identify(spec: MapSpec) -> str | None:
    """Gallery key whose canonical text equals that of ``spec``."""
    mine = print_spec(spec)
    for key in ENTRIES:
        if print_spec(load(key)) == mine:
            return key
    return None


def reflect(spec: MapSpec, left: str = "J") -> MapSpec:
    """Square-root construction on [-1, 1]: ``-f`` on the right copy (pulled back
    from the extended line through the logistic chart) and ``-x`` on the left."""
    if len(spec.families) != 1:
        raise ValueError("reflect expects a single-family spec on the extended line")
    fam = spec.families[0]
    right = fam.name
    lg = lambda n: Call("logistic", (n,))
    new_i = FamilyDecl(right, fam.kind, lg(fam.lo), lg(fam.hi), tuple(lg(a) for a in fam.accumulates))
    new_j = FamilyDecl(left, fam.kind, Neg(lg(fam.hi)), Neg(lg(fam.lo)),
                       tuple(Neg(lg(a)) for a in fam.accumulates))
    swap = lambda p: IdPattern(left if p.family == right else p.family, p.index)
    branches = []
    for b in spec.branches:
        slopes = tuple({"+": "-", "-": "+"}[s] if isinstance(s, str) else Neg(s) for s in b.slopes)
        targets = tuple(Target() if t.is_all else Target(swap(t.first), swap(t.last)) for t in b.targets)
        branches.append(BranchDecl(right, b.when, slopes, targets))
    branches.append(BranchDecl(left, None, ("-",), (Target(IdPattern(right, Name("i")),
                                                           IdPattern(right, Name("i"))),)))
    rules = []
    for t in spec.transitions:
        terms = tuple(Term(x.kind, left if x.family == right else x.family, x.lo, x.hi) for x in t.terms)
        rules.append(TransitionDecl(right, t.when, terms))
    rules.append(TransitionDecl(left, None, (Term("range", right, Name("i"), Name("i")),)))
    return MapSpec(
        space=(Neg(Num(1)), Num(1)),
        consts=spec.consts,
        indexsets=spec.indexsets,
        families=(new_i, new_j),
        order=(Segment(), Segment((left,), -1), Segment(), Segment((right,), 1), Segment()),
        branches=tuple(branches),
        transitions=tuple(rules),
        continuity=spec.continuity,
        fixed=(Num(0),),
        images=((Num(1), Neg(Num(1))), (Neg(Num(1)), Num(1))),
        chart=None,
    )


__all__ = ["ENTRIES", "GalleryEntry", "identify", "keys", "load", "reflect", "text"]

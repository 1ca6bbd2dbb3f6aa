from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from cpmm.errors import SpecSyntaxError, UndefinedAtPartitionPoint, ValidationError
from cpmm.mapspec import (
    BasicIntervalId as B, compile_transitions, evaluate_map, mixing_heuristic, parse_spec, print_spec,
    truncate,
)
from cpmm.mapspec.gallery import identify, keys, load, text

FIXTURES = Path(__file__).parent / "fixtures"
GOLD = (math.sqrt(5) - 1) / 2

MALFORMED = [
    ("empty.cpmm", SpecSyntaxError, None),
    ("truncated.cpmm", SpecSyntaxError, None),
    ("overlap.cpmm", ValidationError, "overlap"),
    ("nonmarkov.cpmm", ValidationError, "non-markov"),
    ("escape.cpmm", ValidationError, "fixed"),
]


def test_parse_s8_families():
    s = load("s8")
    kinds = {f.name: f.kind for f in s.families}
    assert kinds == {"A": "naturals", "B": "naturals", "C": "naturals", "D": "singleton"}


@pytest.mark.parametrize("key", keys())
def test_round_trip(key):
    s = load(key)
    once = print_spec(s)
    assert print_spec(parse_spec(once)) == once
    assert identify(parse_spec(once)) == key


def test_round_trip_keeps_piecewise():
    once = print_spec(load("s11"))
    assert "continuity piecewise" in once
    assert parse_spec(once).continuity == "piecewise"


@pytest.mark.parametrize("name,exc,kind", MALFORMED)
def test_malformed(name, exc, kind):
    with pytest.raises(exc) as info:
        parse_spec((FIXTURES / name).read_text())
    if kind:
        assert info.value.kind == kind


def test_syntax_error_position():
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec((FIXTURES / "truncated.cpmm").read_text())
    assert info.value.line == 3 and info.value.column is not None


def test_overlap_names_both():
    with pytest.raises(ValidationError) as info:
        parse_spec((FIXTURES / "overlap.cpmm").read_text())
    assert "L" in str(info.value) and "R" in str(info.value)


def test_unknown_keyword():
    with pytest.raises(SpecSyntaxError):
        parse_spec("space 0 1\nfamilly L index singleton endpoints 0 1\n")


def test_s9_entries():
    T = compile_transitions(load("s9"))
    for k in range(-3, 4):
        assert T.entry(B("I", 2 * k), B("I", 2 * k + 2)) == 1
        assert T.entry(B("I", 2 * k + 1), B("I", 2 * k - 1)) == 0


def test_s8_d_row():
    s = load("s8")
    T = compile_transitions(s)
    assert all(T.entry(B("D"), b) == 1 for b in s.geom.id_window(30))


def test_s10_no_self_loops_away_from_0():
    s = load("s10")
    T = compile_transitions(s)
    for i in (4, 5, 7):
        for b in s.geom.expand(B("I", i)):
            assert T.entry(b, b) == 0
    assert T.entry(B("I", 0), B("I", 0)) == 1


def test_truncate_s8():
    T = compile_transitions(load("s8"))
    adj, labels = truncate(T, [B("D"), B("A", 0), B("B", 0), B("C", 0)])
    assert adj.shape == (4, 4)
    assert adj[0].tolist() == [1, 1, 1, 1]
    assert truncate(T, [])[0].shape == (0, 0)


def test_truncate_s9_banded():
    T = compile_transitions(load("s9"))
    adj, _ = truncate(T, [B("I", i) for i in range(-2, 3)])
    expected = [[1, 1, 1, 0, 0], [1, 1, 1, 0, 0], [1, 1, 1, 1, 1], [0, 0, 1, 1, 1], [0, 0, 1, 1, 1]]
    assert adj.tolist() == expected


def test_truncate_monotone():
    s = load("s8")
    T = compile_transitions(s)
    small = s.geom.id_window(8)
    big = s.geom.id_window(20)
    a, la = truncate(T, small)
    b, lb = truncate(T, big)
    pos = [lb.index(x) for x in la]
    assert np.array_equal(b[np.ix_(pos, pos)], a)


def test_evaluate_points():
    assert evaluate_map(load("s9"), 0.0) == pytest.approx(-1.0)
    assert evaluate_map(load("s9"), GOLD) == pytest.approx(1 + GOLD)
    s8 = load("s8")
    xf = s8.fixed_values[0]
    assert evaluate_map(s8, xf) == xf
    s10 = load("s10")
    assert evaluate_map(s10, 1.0) == 0.0
    assert s10.geom.pieces(B("I", 0))[0].slope == -2
    assert evaluate_map(s10, 0.75) == pytest.approx(0.5)


def test_evaluate_infinite_endpoints():
    s9 = load("s9")
    assert evaluate_map(s9, math.inf) == math.inf
    assert evaluate_map(s9, -math.inf) == -math.inf


def test_piecewise_partition_point():
    with pytest.raises(UndefinedAtPartitionPoint):
        evaluate_map(load("s11"), 0.0)


@pytest.mark.parametrize("key", ["s8", "s9", "s10", "s11", "s12", "tent"])
def test_markov_consistency(key):
    s = load(key)
    T = compile_transitions(s)
    g = s.geom
    rng = np.random.default_rng(7)
    for bid in g.id_window(12):
        a, b = g.endpoints(bid)
        if not (math.isfinite(a) and math.isfinite(b)):
            continue
        for t in rng.uniform(0.05, 0.95, 3):
            x = a + t * (b - a)
            y = evaluate_map(s, x)
            sources = g.expand(bid) + [bid]
            assert any(T.entry(e, c) for c in g.locate(y, 1e-9) for e in sources), (bid, x, y)


def test_mixing():
    assert mixing_heuristic(load("s12"), compile_transitions(load("s12"))).period == 2
    assert mixing_heuristic(load("s12"), compile_transitions(load("s12"))).verdict == "not-mixing-witness"
    for key in ("s8", "s9"):
        s = load(key)
        assert mixing_heuristic(s, compile_transitions(s), 60).verdict == "likely-mixing"


def test_s11_g_wandering_interval():
    from cpmm.conjugacy import lengths_nested_intersection_s11
    g = load("s11g")
    r = lengths_nested_intersection_s11(12)
    lo = g.geom.lo(B("A", 0))
    # midpoint of the limiting nested interval stays in A_k for every k
    x = lo + float(r.y[-1]) + 0.5 * float(r.g_lengths[-1])
    for k in range(12):
        a, b = g.geom.endpoints(B("A", k))
        assert a < x < b
        x = evaluate_map(g, x)


def test_gallery_text():
    assert text("s8").startswith("#")
    with pytest.raises(KeyError):
        load("s99")

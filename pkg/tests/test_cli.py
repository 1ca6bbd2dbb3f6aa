from __future__ import annotations

import contextlib
import io
import math
from pathlib import Path

import pytest

from cpmm import svg
from cpmm.cli import main
from cpmm.entropy import first_return_tree, first_returns, rabbit_counts
from cpmm.mapspec import compile_transitions
from cpmm.mapspec.gallery import ENTRIES, load
from cpmm.mapspec.model import BasicIntervalId as B
from cpmm.output import read_csv

FIXTURES = Path(__file__).parent / "fixtures"
EXPECTATIONS = [(k, x) for k, e in ENTRIES.items() for x in e.expected]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("key,x", EXPECTATIONS, ids=[f"{k}:{' '.join(x.argv[:1])}:{i}"
                                                     for i, (k, x) in enumerate(EXPECTATIONS)])
def test_gallery_expectations(key, x):
    code, out, _ = run(*x.argv)
    assert code == x.exit_code
    assert x.shows in out


@pytest.mark.parametrize("name,code", [("empty.cpmm", 1), ("truncated.cpmm", 1), ("overlap.cpmm", 2),
                                       ("nonmarkov.cpmm", 2), ("escape.cpmm", 2)])
def test_validate_exit_codes(name, code):
    got, _, err = run("validate", str(FIXTURES / name))
    assert got == code
    if name == "truncated.cpmm":
        assert "line 3, column" in err
    if name == "overlap.cpmm":
        assert "intervals L and R" in err


def test_validate_ok_and_missing_file(tmp_path):
    path = tmp_path / "s8.cpmm"
    from cpmm.mapspec.gallery import text
    path.write_text(text("s8"))
    assert run("validate", str(path))[0] == 0
    assert run("validate", str(tmp_path / "nope.cpmm"))[0] == 1


def test_usage_errors():
    assert run("eigen")[0] == 1
    assert run("eigen", "--gallery", "s99")[0] == 1
    assert run("conjugate", "--gallery", "s9", "--depth", "40")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("plot", "--gallery", "s9", "--kind", "bogus")[0] == 1


def test_capability_exit():
    code, _, err = run("eigen", "--gallery", "s2", "--lambda", "2")
    assert code == 3 and "no eigenvector solver" in err


def test_eigen_s9_entries(tmp_path):
    code, out, _ = run("eigen", "--gallery", "s9", "--lambda", "2+sqrt(5)", "--out", str(tmp_path))
    assert code == 0 and "full_extended_line" in out
    header, rows = read_csv(tmp_path / "entries_4.2360679775.csv")
    vals = {r[0]: float(r[1]) for r in rows}
    assert vals["I_0"] == pytest.approx(2.0, abs=1e-12)
    assert vals["I_1"] == pytest.approx(math.sqrt(5) - 1, abs=1e-12)
    assert vals["I_-3"] == pytest.approx(math.sqrt(5) - 1, abs=1e-12)


def test_eigen_s10_sweep(tmp_path):
    code, _, _ = run("eigen", "--gallery", "s10", "--lambda-sweep", "1.5,2,2.5,3,4,8", "--out", str(tmp_path))
    assert code == 0
    _, rows = read_csv(tmp_path / "eigen.csv")
    assert [r[1] for r in rows] == ["none"] * 6


def test_eigen_s8_lambda_min():
    code, out, _ = run("eigen", "--gallery", "s8", "--lambda", "lam_min")
    assert code == 0
    assert "status: exists_unique" in out and "summability: summable" in out


def test_entropy_tent_exact(tmp_path):
    code, out, _ = run("entropy", "--gallery", "tent", "--out", str(tmp_path))
    assert code == 0
    _, rows = read_csv(tmp_path / "perron.csv")
    assert abs(math.log(float(rows[-1][1])) - math.log(2)) < 1e-10


def test_entropy_s8(tmp_path):
    code, out, _ = run("entropy", "--gallery", "s8", "--out", str(tmp_path))
    assert code == 0
    _, rows = read_csv(tmp_path / "entropy.csv")
    assert [int(r[2]) for r in rows[:18]] == rabbit_counts(18).f
    lam = float(read_csv(tmp_path / "perron.csv")[1][-1][1])
    assert abs(math.log(lam) - math.log(2.658967081917)) < 1e-2


def test_conjugate_s9_artifacts(tmp_path):
    code, out, _ = run("conjugate", "--gallery", "s9", "--depth", "6", "--window=-3,3", "--out", str(tmp_path))
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["conjugate.txt", "model.svg", "psi.csv", "psi.svg", "slopes.csv"]
    _, rows = read_csv(tmp_path / "slopes.csv")
    assert max(float(r[-1]) for r in rows) < 1e-6


def test_conjugate_s11_witness(tmp_path):
    code, out, _ = run("conjugate", "--gallery", "s11", "--out", str(tmp_path))
    assert code == 4
    header, rows = read_csv(tmp_path / "witness.csv")
    assert header[:3] == ["k", "x_k", "y_k"] and len(rows) == 20


def test_conjugate_s12_witness(tmp_path):
    code, out, _ = run("conjugate", "--gallery", "s12", "--out", str(tmp_path))
    assert code == 4
    _, rows = read_csv(tmp_path / "witness.csv")
    assert float(rows[-1][1]) > 1e3


def test_deterministic_outputs(tmp_path):
    for d in ("a", "b"):
        assert run("conjugate", "--gallery", "s8", "--lambda", "3", "--depth", "3",
                   "--out", str(tmp_path / d))[0] == 0
        assert run("plot", "--gallery", "s8", "--kind", "transition-diagram", "--out", str(tmp_path / d))[0] == 0
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes(), f.name


def test_format_selects_artifacts(tmp_path):
    run("conjugate", "--gallery", "tent", "--depth", "3", "--format", "csv", "--out", str(tmp_path))
    assert sorted(p.suffix for p in tmp_path.iterdir()) == [".csv", ".csv"]


def test_plot_kinds(tmp_path):
    for kind in ("map-graph", "transition-diagram", "psi", "model", "first-return-tree"):
        code, out, _ = run("plot", "--gallery", "s8", "--kind", kind, "--depth", "3", "--out", str(tmp_path))
        assert code == 0
        assert (tmp_path / f"{kind}.svg").read_text().startswith("<svg")
    assert run("plot", "--gallery", "s9", "--kind", "first-return-tree")[0] == 3
    assert run("plot", "--gallery", "s12", "--kind", "psi")[0] == 4


def test_s9_graph_is_the_sawtooth():
    b = (math.sqrt(5) - 1) / 2
    _, segs = svg.graph_segments(load("s9"), (-3, 3))
    dots = {(round(x, 9), round(y, 9)) for s in segs for x, y in ((s[0], s[2]), (s[1], s[3]))}
    for k in range(-3, 3):
        assert (round(k, 9), round(k - 1.0, 9)) in dots
        assert (round(k + b, 9), round(k + b + 1, 9)) in dots
    assert all(abs(abs((s[3] - s[2]) / (s[1] - s[0])) - (2 + math.sqrt(5))) < 1e-9 for s in segs)


def test_first_return_tree_matches_counts():
    fr = first_returns(compile_transitions(load("s8")), B("D"), 10)
    tree = first_return_tree(10)
    assert [len(level) for level in tree] == fr.f
    assert first_return_tree(5)[2][0].label() == "D A0 C0 D"
    text = svg.first_return_tree_svg(5)
    assert text.count("<circle") == sum(fr.f[:5])
    with pytest.raises(ValueError):
        first_return_tree(0)


def test_transition_diagram_edges():
    T = compile_transitions(load("s8"))
    text = svg.transition_diagram_svg(T, 16)
    from cpmm.mapspec import truncate
    adj, _ = truncate(T, load("s8").geom.id_window(16))
    loops = int(adj.diagonal().sum())
    assert text.count("<line") == int(adj.sum()) - loops


def test_gallery_listing():
    code, out, _ = run("gallery")
    assert code == 0 and out.count("expect") == len(EXPECTATIONS)


def test_unsupported_slope_is_capability():
    code, _, err = run("eigen", "--gallery", "s11", "--lambda", "3")
    assert code == 3 and "only lambda = 2" in err

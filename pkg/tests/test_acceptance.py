"""One test per acceptance criterion; a PASS/FAIL line for each is printed after the run."""
from __future__ import annotations

import contextlib
import io
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE
from oracles import s8_dfs
from cpmm.cli import main
from cpmm.conjugacy import (
    accumulation_length_scan, build_model, check_invariants, lengths_nested_intersection_s11, psi_eval,
    refine, verdict,
)
from cpmm.eigensolve.closed_forms import cubic_min
from cpmm.eigensolve import (
    lambda_min, m_matrix, nonexistence_s10, propagate_s9, s12_sqrt_lambda,
    solve_closed_form_s8, solve_s11, solve_s12, truncation_perron,
)
from cpmm.eigensolve.recurrence import eigendirection, eigenvalues
from cpmm.eigensolve.phase import classify_phase_space
from cpmm.entropy import (
    first_returns, perron_from_generating_function, phi_estimate, rabbit_counts, spr_test,
)
from cpmm.errors import SpecSyntaxError, ValidationError
from cpmm.mapspec import compile_transitions, mixing_heuristic, parse_spec, print_spec
from cpmm.mapspec.gallery import keys, load
from cpmm.mapspec.model import BasicIntervalId as B

FIXTURES = Path(__file__).parent / "fixtures"
SHEAR = 2 + math.sqrt(5)
LAM_MIN_REF = 2.658967081917  # independent: numpy roots of x^3 - 2x^2 - x - 2
TRIB = float(max(r.real for r in np.roots([1, -1, -1, -1]) if abs(r.imag) < 1e-9))


def record(n: int, checks: dict, detail: str = "") -> None:
    failed = [k for k, ok in checks.items() if not ok]
    ACCEPTANCE[n] = (not failed, detail if not failed else "failed: " + "; ".join(failed))
    assert not failed, failed


def run(*argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = main(list(argv))
    return code, out.getvalue()


def test_criterion_01_root():
    lam = lambda_min()
    ref = float(max(r.real for r in np.roots([1, -2, -1, -2]) if abs(r.imag) < 1e-9))
    record(1, {
        "root in (2.65, 2.67)": 2.65 < lam < 2.67,
        "about 2.66": round(lam, 2) == 2.66,
        "polynomial residual < 1e-10": abs(cubic_min(lam)) < 1e-10,
        "agrees with numpy roots": abs(lam - ref) < 1e-12,
    }, f"lambda_min = {lam:.12f}, |p(lambda)| = {abs(cubic_min(lam)):.1e}")


def test_criterion_02_s8_eigenvectors():
    res = {lam: solve_closed_form_s8(lam, window=40) for lam in (lambda_min(), 3.0, 4.0)}
    worst = max(o.residual for o in res.values())
    record(2, {
        "all exist": all(o.exists for o in res.values()),
        "max residual < 1e-9 on i <= 40": worst < 1e-9,
        "entries positive": all(o.entries(B(f, i)) > 0 for o in res.values() for f in "ABC"
                                for i in range(41)),
    }, f"max residual {worst:.1e} over lambda in (lambda_min, 3, 4)")


def test_criterion_03_dfs_equals_rabbit():
    dfs = [s8_dfs(n, first_only=True) for n in range(1, 19)]
    fr = first_returns(compile_transitions(load("s8")), B("D"), 18).f
    rab = rabbit_counts(18)
    record(3, {
        "initial w": rab.w[:3] == [1, 1, 2],
        "DFS == rabbit for n <= 18": dfs == rab.f,
        "vector iteration == DFS": fr == dfs,
    }, f"f(18) = {dfs[-1]} by DFS and by recurrence")


def test_criterion_04_entropy_route_2():
    T = compile_transitions(load("s8"))
    fr = first_returns(T, B("D"), 60)
    gf = perron_from_generating_function(fr, (2.0, 3.0))
    trunc = truncation_perron(T, [300]).final
    phi = phi_estimate(fr).value
    vj = spr_test(fr, phi)
    record(4, {
        "generating function root within 1e-3": abs(gf - LAM_MIN_REF) < 1e-3,
        "truncation (300) within 1e-2": abs(trunc - LAM_MIN_REF) < 1e-2,
        "phi within 2e-2 of 1.839": abs(phi - TRIB) < 2e-2,
        "partial sums cross 1, SPR": vj.verdict == "strongly_positive_recurrent",
    }, f"gf {gf:.9f}, truncation {trunc:.9f}, phi {phi:.6f}, crossing at n = {vj.crossing_index}")


def test_criterion_05_s9_trichotomy():
    dets = []
    for lam in (Fraction(3, 2), Fraction(2), Fraction(7, 3), Fraction(4), Fraction(6), Fraction(41, 5)):
        a, b, c, d = m_matrix(lam).ravel()
        dets.append(a * d - b * c)
    low = propagate_s9(4.0)
    wi = int(low.witness["interval"].split("_")[1]) if low.witness.get("interval") else None
    k = None if wi is None else (wi - 1) // 2  # pair p_k = (v_2k+1, v_2k+2)
    mid = propagate_s9(SHEAR)
    v0, v1 = mid.entries(B("I", 0)), mid.entries(B("I", 1))
    s = 2.0 / v0
    mp, mm = eigenvalues(6.0)
    s9 = load("s9")
    generic = propagate_s9(6.0, eigendirection(6.0, mp) + 0.5 * eigendirection(6.0, mm))
    edge = propagate_s9(6.0, eigendirection(6.0, mp))
    classes = {classify_phase_space(s9, o.entries, B("I", 0)).verdict for o in (generic, edge)}
    record(5, {
        "det M = 1 exactly": all(d == 1 for d in dets),
        "lambda=4 witness with |k| <= 4": low.status == "none" and k is not None and abs(k) <= 4
        and low.witness["value"] < 0,
        "(2, sqrt5-1) to 1e-12": abs(s * v0 - 2) < 1e-12 and abs(s * v1 - (math.sqrt(5) - 1)) < 1e-12,
        "lambda=6 two-parameter family": generic.exists and generic.dim == 2 and edge.exists,
        "phase classes {half-line, full line}":
            any(c.startswith("half_line") for c in classes) and "full_extended_line" in classes,
    }, f"lambda=4 witness at pair k={k}; lambda=6 classes {sorted(classes)}")


def test_criterion_06_end_to_end_s9():
    s9 = load("s9")
    v = propagate_s9(SHEAR).entries
    table = psi_eval(refine(s9, 6, (-3, 3)), v, SHEAR, 0.0)
    affine = float(np.max(np.abs(table.psi - (math.sqrt(5) + 1) * table.x)))
    model = build_model(s9, table, SHEAR)
    inv = check_invariants(s9, v, SHEAR, 0.0, 5, (-3, 3))
    # literal formula: lam^-n sum of v over images of P_n-intervals, depth 3
    ref = refine(s9, 3, (-1, 2))
    lit = np.concatenate([[0.0], np.cumsum([v(b) for b in ref.image_ids()])]) * SHEAR ** -3
    lit -= lit[int(np.argmin(np.abs(ref.points)))]
    literal = float(np.max(np.abs(psi_eval(ref, v, SHEAR, 0.0).psi - lit)))
    record(6, {
        "psi affine with factor sqrt5+1 to 1e-9": affine < 1e-9,
        "slopes within 1e-6": model.max_deviation < 1e-6,
        **{f"invariant {name}": ok for name, ok in inv.results.items()},
        "literal formula agrees to 1e-9": literal < 1e-9,
    }, f"affine error {affine:.1e}, slope deviation {model.max_deviation:.1e}, "
       f"{len(table.x)} points, 5/5 invariants")


def test_criterion_07_s10_nonexistence():
    low = {lam: nonexistence_s10(lam) for lam in (1.5, 2.0, 2.5)}
    high = {lam: nonexistence_s10(lam) for lam in (3.0, 4.0, 8.0)}
    code, out = run("eigen", "--gallery", "s10", "--lambda-sweep", "1.5,2,2.5,3,4,8")
    record(7, {
        "divergence witness > 1e6 by n <= 200": all(
            o.status == "none" and o.witness["value"] > 1e6 and o.witness["index"] <= 200
            for o in low.values()),
        "sum bound < 3 contradicts lam v_0": all(
            o.status == "none" and o.witness["sum_bound"] < 3 <= lam for lam, o in high.items()),
        "cmd exit 0, status none x6": code == 0 and out.count("status: none") == 6,
    }, "divergence at n = " + ", ".join(str(o.witness["index"]) for o in low.values())
       + f"; sum bound {high[3.0].witness['sum_bound']:.6f}")


def test_criterion_08_s11():
    r = lengths_nested_intersection_s11(20)
    exact_y = all(r.y[k - 1] == 2 - Fraction(2 ** k + 1, 2 ** k) for k in range(1, 21))
    v = verdict(load("s11"), 2.0)
    eig = solve_s11(2.0, window=30)
    record(8, {
        "y_k exact for k <= 20": exact_y and all(isinstance(y, Fraction) for y in r.y),
        "|x_20 - 2| < 1e-5": abs(float(r.x[-1]) - 2) < 1e-5,
        "report: no conjugacy to constant slope 2":
            "no conjugacy to constant slope 2" in v.report() and v.witness_table is not None,
        "eigenvector residual < 1e-12 on i <= 30": eig.residual < 1e-12
        and all(eig.entries(B("A", i)) == 2 ** i + 1 and eig.entries(B("B", i)) == 1 for i in range(31)),
    }, f"x_20 = {float(r.x[-1]):.12f}, y_20 = {float(r.y[-1]):.12f}")


def test_criterion_09_s12():
    s12 = load("s12")
    out = solve_s12(s12_sqrt_lambda(), window=40)
    scan = accumulation_length_scan(s12, out.entries, 0.0)
    exceeded = next((R for R, s in scan.sums if s > 1e3), None)
    v = verdict(s12, s12_sqrt_lambda() ** 2)
    mix = mixing_heuristic(s12, compile_transitions(s12))
    record(9, {
        "residual < 1e-12 on |k| <= 40": out.residual < 1e-12,
        "psi-length > 1e3 before window exhaustion": exceeded is not None and exceeded < scan.sums[-1][0],
        "obstruction verdict": v.kind == "obstructed",
        "period-2 witness": mix.verdict == "not-mixing-witness" and mix.period == 2,
    }, f"psi-length exceeds 1e3 at index radius {exceeded}")


MALFORMED = [("empty.cpmm", SpecSyntaxError, None, 1), ("truncated.cpmm", SpecSyntaxError, None, 1),
             ("overlap.cpmm", ValidationError, "overlap", 2),
             ("nonmarkov.cpmm", ValidationError, "non-markov", 2),
             ("escape.cpmm", ValidationError, "fixed", 2)]


def test_criterion_10_parser():
    trips = {}
    for key in keys():
        once = print_spec(load(key))
        trips[key] = print_spec(parse_spec(once)) == once
    fixtures = {}
    for name, exc, kind, code in MALFORMED:
        try:
            parse_spec((FIXTURES / name).read_text())
            ok = False
        except exc as e:
            ok = kind is None or e.kind == kind
        fixtures[name] = ok and run("validate", str(FIXTURES / name))[0] == code
    record(10, {
        **{f"round-trip {k}": ok for k, ok in trips.items()},
        **{f"fixture {k}": ok for k, ok in fixtures.items()},
    }, f"{len(trips)} gallery specs round-trip; 5 malformed fixtures give documented errors and exit codes")

"""Command line front end: validate, eigen, entropy, conjugate, plot, gallery.

Exit codes: 0 success, 1 I/O or syntax error, 2 validation error,
3 capability (no strategy for this input), 4 mathematical obstruction.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import svg
from .errors import (
    CapabilityError, CPMMError, DomainError, InconclusiveError, InsufficientData, NoBracket,
    NonConvergence, SpecSyntaxError, UnboundedDrift, ValidationError,
)
from .extreal import ExtInterval, fmt
from .mapspec import BasicIntervalId, MapSpec, compile_transitions, parse_spec
from .mapspec.expr import evaluate, parse_expr, to_float
from .mapspec.gallery import ENTRIES, canonical_key, identify, load
from .mapspec.model import SINGLETON
from .mapspec.transitions import TransitionRuleSet
from .output import OutputDir

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_CAPABILITY, EXIT_OBSTRUCTED = 0, 1, 2, 3, 4
DEPTH_CAP = 12
PLOT_KINDS = ("map-graph", "transition-diagram", "psi", "model", "first-return-tree")

DEFAULT_LAMBDA = {
    "s8-interval": "lam_min", "s9-extended": "2+sqrt(5)", "s10-none": "3",
    "s11-pcws": "2", "s11-g": "2", "s12-nonmixing": "sqrt(2+sqrt(5))", "tent": "2",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    source: str
    spec: MapSpec
    key: str | None
    lambdas: list = field(default_factory=list)
    depth: int = 4
    window: ExtInterval | None = None
    trunc: list = field(default_factory=lambda: [100, 200, 300])
    tol: float = 1e-10
    out: OutputDir = field(default_factory=lambda: OutputDir(None))
    n_max: int = 40
    kind: str | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if not 0 <= self.depth <= DEPTH_CAP:
            raise UsageError(f"--depth must lie in 0..{DEPTH_CAP}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_lambda(text: str) -> float:
    from .eigensolve import lambda_min
    node = parse_expr(text.strip())
    return to_float(evaluate(node, {"lam_min": lambda_min()}))


def parse_window(text: str) -> ExtInterval:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise UsageError("--window takes lo,hi")
    return ExtInterval(*(to_float(evaluate(parse_expr(p), {})) for p in parts))


def _load_spec(args) -> tuple[MapSpec, str | None, str]:
    if args.gallery and args.spec:
        raise UsageError("give either --spec or --gallery, not both")
    if args.gallery:
        try:
            key = canonical_key(args.gallery)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        return load(key), key, key
    path = args.spec or getattr(args, "path", None)
    if not path:
        raise UsageError("a spec is required (--spec PATH or --gallery KEY)")
    spec = parse_spec(Path(path).read_text(), name=Path(path).stem)
    return spec, identify(spec), path


def _config(args) -> RunConfig:
    spec, key, source = _load_spec(args)
    lambdas = []
    if getattr(args, "lambda_sweep", None):
        lambdas = [parse_lambda(t) for t in args.lambda_sweep.split(",") if t.strip()]
    elif getattr(args, "lam", None):
        lambdas = [parse_lambda(args.lam)]
    elif key in DEFAULT_LAMBDA:
        lambdas = [parse_lambda(DEFAULT_LAMBDA[key])]
    formats = [f.strip() for f in args.format.split(",")] if args.format else ["csv", "svg", "txt"]
    bad = set(formats) - {"csv", "svg", "txt"}
    if bad:
        raise UsageError(f"unknown format {sorted(bad)[0]!r}")
    trunc = [int(t) for t in args.trunc.split(",")] if getattr(args, "trunc", None) else [100, 200, 300]
    return RunConfig(
        args.command, source, spec, key, lambdas,
        depth=getattr(args, "depth", None) if getattr(args, "depth", None) is not None else 4,
        window=parse_window(args.window) if getattr(args, "window", None) else None,
        trunc=trunc, tol=args.tol, out=OutputDir(args.out, formats),
        n_max=getattr(args, "n_max", 40), kind=getattr(args, "kind", None))


def _need_lambda(cfg: RunConfig) -> float:
    if not cfg.lambdas:
        raise UsageError("--lambda is required for this spec")
    return cfg.lambdas[0]


def _emit(cfg: RunConfig, name: str, text: str) -> None:
    sys.stdout.write(text)
    cfg.out.txt(name, text)


# -- commands -------------------------------------------------------------------

def cmd_validate(cfg: RunConfig) -> int:
    spec = cfg.spec
    lines = [f"valid: {cfg.source}", f"families: {', '.join(f'{f.name} ({f.kind})' for f in spec.families)}",
             f"continuity: {spec.continuity}"]
    if cfg.key:
        lines.append(f"gallery entry: {cfg.key}")
    _emit(cfg, "validate.txt", "\n".join(lines) + "\n")
    return EXIT_OK


def _entry_rows(spec: MapSpec, entries, size: int = 40):
    rows = []
    for b in spec.geom.id_window(size):
        try:
            rows.append((str(b), float(entries(b))))
        except (CPMMError, OverflowError, KeyError):
            continue
    return rows


def cmd_eigen(cfg: RunConfig) -> int:
    from .eigensolve import solve
    if not cfg.lambdas:
        raise UsageError("--lambda or --lambda-sweep is required for this spec")
    summary, text = [], []
    for lam in cfg.lambdas:
        out = solve(cfg.spec, lam)
        text.append(out.report())
        summary.append((lam, out.status, out.certificate, out.residual,
                        out.phase.verdict if out.phase else "", out.summability or ""))
        if out.exists and out.entries is not None:
            cfg.out.csv(f"entries_{fmt(lam)}.csv", ("id", "value"), _entry_rows(cfg.spec, out.entries),
                        notes=[f"lambda = {fmt(lam)}", f"scaling: {out.scaling or 'as returned'}"])
    cfg.out.csv("eigen.csv", ("lambda", "status", "certificate", "residual", "phase", "summability"),
                summary, notes=["residual is max |(T v)_I - lam v_I| / max(1, lam v_I)"])
    _emit(cfg, "eigen.txt", "\n".join(text))
    return EXIT_OK


def _base_vertex(spec: MapSpec) -> BasicIntervalId:
    for f in spec.families:
        if f.kind == SINGLETON:
            return BasicIntervalId(f.name)
    return spec.geom.expand(BasicIntervalId(spec.families[0].name, 0))[0]


def cmd_entropy(cfg: RunConfig) -> int:
    from .eigensolve import solve, truncation_perron
    from .entropy import (
        count_loops, first_returns, perron_from_generating_function, phi_estimate, spr_test,
    )
    spec = cfg.spec
    refined = any(spec.geom.is_refined(b) for b in spec.geom.id_window(20))
    T = TransitionRuleSet(spec, "geometry") if refined else compile_transitions(spec)
    u = _base_vertex(spec)
    loops = count_loops(T, u, cfg.n_max)
    fr = first_returns(T, u, cfg.n_max)
    lines = [f"base vertex: {u}", f"n_max: {cfg.n_max}"]
    try:
        phi = phi_estimate(fr)
        phi_value = phi.value
        lines.append(f"phi estimate: {fmt(phi.value)} (ratio {fmt(phi.ratio)}, spread {fmt(phi.spread)})")
    except InsufficientData as exc:
        phi, phi_value = None, None
        lines.append(f"phi estimate: unavailable ({exc})")
    est = truncation_perron(T, cfg.trunc, tol=min(cfg.tol, 1e-10))
    for size, val in zip(est.sizes, est.estimates):
        lines.append(f"perron (truncation, {size} vertices): {fmt(val)}")
    perron = est.final
    try:
        gf = perron_from_generating_function(fr, (1.0 + 1e-9, max(10.0, 2 * perron)))
        below = phi_value is not None and gf < phi_value * (1 - 1e-9)
        lines.append(f"perron (sum f(n) lam^-n = 1, n <= {cfg.n_max}): {fmt(gf)}"
                     + (" (below phi: an artifact of the finite sum)" if below else ""))
    except NoBracket as exc:
        lines.append(f"perron (generating function): no root ({exc})")
    if phi_value is not None and phi_value > perron * (1 + 1e-9):
        # every first return loop is a loop, so lambda_M >= Phi
        lines.append(f"perron estimate raised to phi = {fmt(phi_value)} "
                     "(truncations approach lambda_M from below)")
        perron = phi_value
    lines.append(f"entropy estimate: log {fmt(perron)} = {fmt(math.log(perron))}")
    if phi_value is not None:
        vj = spr_test(fr, phi_value, perron=perron)
        lines.append("vere-jones " + vj.report().rstrip().replace("\n", "\nvere-jones "))
    if cfg.key is not None:
        lam_up = math.ceil(perron * 1e8) / 1e8  # estimates approach from below
        try:
            eig = solve(spec, lam_up)
            lines.append(f"eigenvector at lambda = {fmt(lam_up)} (estimate rounded up): {eig.status}"
                         + (f" ({eig.certificate})" if eig.certificate else ""))
        except (CPMMError, ValueError) as exc:
            lines.append(f"eigenvector at lambda = {fmt(lam_up)}: not determined ({exc})")
    rows = [(n, loops.at(n), fr.at(n)) for n in range(1, cfg.n_max + 1)]
    cfg.out.csv("entropy.csv", ("n", "loops_p", "first_returns_f"), rows,
                notes=[f"closed paths at {u} of length n; exact integers"])
    cfg.out.csv("perron.csv", ("window_size", "perron_estimate"), list(zip(est.sizes, est.estimates)))
    _emit(cfg, "entropy.txt", "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_conjugate(cfg: RunConfig) -> int:
    from .conjugacy import verdict
    from .conjugacy.verdict import OBSTRUCTED
    lam = _need_lambda(cfg)
    v = verdict(cfg.spec, lam, depth=cfg.depth, window=cfg.window)
    if v.witness_table is not None:
        header, rows = v.witness_table
        cfg.out.csv("witness.csv", header, rows)
    if v.psi is not None:
        t = v.psi
        cfg.out.csv("psi.csv", ("x", "psi", "depth"),
                    [(float(x), float(p), int(d)) for x, p, d in zip(t.x, t.psi, t.refinement.depths)],
                    notes=[f"psi(p0) = 0 at p0 = {fmt(t.p0)}", f"lambda = {fmt(lam)}"])
        cfg.out.svg("psi.svg", svg.psi_svg(t))
    if v.model is not None:
        cfg.out.csv("slopes.csv", ("piece", "k", "orientation", "points", "slope_min", "slope_max",
                                   "deviation"),
                    [(p.bid, p.k, p.orientation, p.points, p.slope_min, p.slope_max, p.deviation)
                     for p in v.model.pieces], notes=[f"target |slope| = {fmt(lam)}"])
        cfg.out.svg("model.svg", svg.model_svg(v.model))
    _emit(cfg, "conjugate.txt", v.report())
    return EXIT_OBSTRUCTED if v.kind == OBSTRUCTED else EXIT_OK


def cmd_plot(cfg: RunConfig) -> int:
    kind = cfg.kind
    if kind not in PLOT_KINDS:
        sys.stderr.write(f"error: unknown plot kind {kind!r}; choose from {', '.join(PLOT_KINDS)}\n")
        return EXIT_IO
    spec = cfg.spec
    if kind == "map-graph":
        text = svg.map_graph_svg(spec, cfg.window)
    elif kind == "transition-diagram":
        text = svg.transition_diagram_svg(compile_transitions(spec), cfg.trunc[0] if cfg.trunc else 20)
    elif kind == "first-return-tree":
        if cfg.key != "s8-interval":
            raise CapabilityError("the first return tree is built for the interval example (s8)")
        text = svg.first_return_tree_svg(max(cfg.depth, 1))
    else:
        from .conjugacy import verdict
        v = verdict(spec, _need_lambda(cfg), depth=cfg.depth, window=cfg.window)
        if v.psi is None:
            sys.stdout.write(v.report())
            return EXIT_OBSTRUCTED
        text = svg.psi_svg(v.psi) if kind == "psi" else svg.model_svg(v.model)
    if cfg.out.path is None:
        sys.stdout.write(text)
    else:
        cfg.out.formats.add("svg")
        path = cfg.out.svg(f"{kind}.svg", text)
        sys.stdout.write(f"wrote {path}\n")
    return EXIT_OK


def cmd_gallery(_args) -> int:
    for key, e in ENTRIES.items():
        sys.stdout.write(f"{key}: {e.summary}\n")
        for x in e.expected:
            sys.stdout.write(f"    expect {x.outcome}: cpmm {' '.join(x.argv)}\n")
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "eigen": cmd_eigen, "entropy": cmd_entropy,
            "conjugate": cmd_conjugate, "plot": cmd_plot}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cpmm", description="Countably piecewise monotone Markov maps: eigenvectors, "
                "entropy and constant slope models.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    common = _Parser(add_help=False)
    common.add_argument("--spec", help="path to a .cpmm file")
    common.add_argument("--gallery", help="built-in spec key (see 'cpmm gallery')")
    common.add_argument("--out", help="directory for CSV/SVG/text artifacts")
    common.add_argument("--format", help="comma list from csv,svg,txt (default all)")
    common.add_argument("--tol", type=float, default=1e-10, help="power iteration tolerance")
    v = sub.add_parser("validate", parents=[common], help="parse and validate a spec")
    v.add_argument("path", nargs="?", help="spec file (same as --spec)")
    e = sub.add_parser("eigen", parents=[common], help="nonnegative eigenvector at lambda")
    e.add_argument("--lambda", dest="lam", help="expression, e.g. 2+sqrt(5) or lam_min")
    e.add_argument("--lambda-sweep", help="comma separated lambda expressions")
    n = sub.add_parser("entropy", parents=[common], help="loop counts, Perron value, Vere-Jones class")
    n.add_argument("--n-max", type=int, default=40)
    n.add_argument("--trunc", help="comma separated truncation sizes (default 100,200,300)")
    c = sub.add_parser("conjugate", parents=[common], help="constant slope model or obstruction")
    c.add_argument("--lambda", dest="lam")
    c.add_argument("--depth", type=int, default=4)
    c.add_argument("--window", help="lo,hi of the tabulation window")
    g = sub.add_parser("plot", parents=[common], help="write an SVG figure")
    g.add_argument("--kind", required=True, help=", ".join(PLOT_KINDS))
    g.add_argument("--lambda", dest="lam")
    g.add_argument("--depth", type=int, default=5, help="refinement depth or tree levels")
    g.add_argument("--window")
    g.add_argument("--trunc", help="window size for transition diagrams")
    sub.add_parser("gallery", help="list built-in specs and expected outcomes")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "gallery":
            return cmd_gallery(args)
        cfg = _config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except (OSError, SpecSyntaxError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except ValidationError as exc:
        sys.stderr.write(f"invalid spec: {exc}\n")
        return EXIT_INVALID
    except (CapabilityError, UnboundedDrift, InconclusiveError, NonConvergence) as exc:
        sys.stderr.write(f"not supported: {exc}\n")
        return EXIT_CAPABILITY
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 usage/parse/I-O error, 2 an audit found a
counterexample, 3 an internal cap was exceeded (geodesic budget, size cap,
convergence, memory).  Every failure prints one ``error: <reason>`` line to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

from .expansion import ConvergenceError, expansion_report
from .generators import KINDS, FamilySpec, GenerationError, generate
from .graph import GraphFormatError, emit, read_graph
from .hyperbolicity import SizeCapError, hyperbolicity_report
from .metric import GeodesicBudgetExceeded, UnreachableError, all_pairs_distances
from .experiments.audits import AUDIT_COLUMNS, LEMMAS, run_audit
from .experiments.cylinder import CYLINDER_COLUMNS, run_cylinder_experiment
from .experiments.scaling import DEFAULT_SAMPLES, SCALING_COLUMNS, family_sweep, run_scaling_experiment
from .plotting import PlotError, plot_csv

EXIT_OK, EXIT_USAGE, EXIT_COUNTEREXAMPLE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def write_atomic(path: str | None, text: str) -> None:
    """Write via a temp file in the target directory, then rename over the target."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def parse_int_list(text: str) -> list[int]:
    """``"1,2,8"`` or ``"1..5"`` (inclusive)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError(f"empty list {text!r}")
    return out


def _family_params(args) -> dict:
    keys = ("n", "d", "m", "rows", "cols", "b", "depth")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def cmd_gen(args) -> int:
    spec = FamilySpec(args.family, _family_params(args), args.seed)
    write_atomic(args.out, emit(generate(spec)))
    return EXIT_OK


def cmd_stats(args) -> int:
    g = read_graph(args.graph)
    dm = all_pairs_distances(g)
    report = hyperbolicity_report(g, dm, mode=args.delta_mode, seed=args.seed,
                                  geodesic_cap=args.cap).to_dict()
    report["expansion"] = expansion_report(g, args.tol).to_dict()
    write_atomic(args.out, to_json(report))
    return EXIT_OK


def cmd_delta(args) -> int:
    g = read_graph(args.graph)
    report = hyperbolicity_report(g, mode=args.delta_mode, seed=args.seed, geodesic_cap=args.cap)
    write_atomic(args.out, to_json(report.to_dict()))
    return EXIT_OK


def cmd_expansion(args) -> int:
    g = read_graph(args.graph)
    write_atomic(args.out, to_json(expansion_report(g, args.tol).to_dict()))
    return EXIT_OK


def cmd_cylinder(args) -> int:
    records = [run_cylinder_experiment(read_graph(path), args.alpha, args.h) for path in args.graph]
    if args.format == "json":
        payload = []
        for rec in records:
            item = rec.row()
            item.update({"p": rec.p, "q": rec.q, "p_third": rec.p_third, "q_third": rec.q_third,
                         "radius": rec.radius, "cyl_bound": rec.cyl_bound,
                         "growth_trace": [vars(r) for r in rec.growth_trace]})
            payload.append(item)
        write_atomic(args.out, to_json(payload))
    else:
        write_atomic(args.out, to_csv(CYLINDER_COLUMNS, [rec.row() for rec in records]))
    return EXIT_OK


def cmd_audit(args) -> int:
    lemmas = LEMMAS if args.lemma == "all" else (args.lemma,)
    rows = []
    failed = False
    for path in args.graph:
        g = read_graph(path)
        dm = all_pairs_distances(g)
        label = args.family or Path(path).stem
        delta = None
        for lemma in lemmas:
            report = run_audit(g, lemma, args.slack, delta, dm, seed=args.seed)
            delta = report.delta_used
            rows.append(report.row(label))
            failed |= report.failed
    write_atomic(args.out, to_csv(AUDIT_COLUMNS, rows))
    return EXIT_COUNTEREXAMPLE if failed else EXIT_OK


def cmd_scaling(args) -> int:
    if not args.family:
        raise UsageError("--family is required")
    sizes = parse_int_list(args.sizes)
    seeds = parse_int_list(args.seeds)
    extra = {k: v for k, v in _family_params(args).items() if k in ("d", "b", "cols")}
    specs = []
    for kind in args.family.split(","):
        if kind not in KINDS:
            raise UsageError(f"unknown family {kind!r}")
        kind_seeds = seeds if kind in ("random-regular", "random-tree") else [0]
        params = {k: v for k, v in extra.items()
                  if (k == "d" and kind == "random-regular") or (k == "b" and kind == "tree")
                  or (k == "cols" and kind == "grid")}
        specs.extend(family_sweep(kind, sizes, kind_seeds, **params))
    records = run_scaling_experiment(specs, args.delta_mode, DEFAULT_SAMPLES)
    text = to_csv(SCALING_COLUMNS, [rec.row() for rec in records])
    write_atomic(args.out, text)
    if args.out and args.out != "-":
        try:
            svg = plot_csv(text, "n", "delta_x2")
        except PlotError:
            pass
        else:
            write_atomic(str(Path(args.out).with_suffix(".svg")), svg)
    return EXIT_OK


def cmd_plot(args) -> int:
    if args.format != "svg":
        raise UsageError("plot only emits svg")
    with open(args.csv, encoding="utf-8") as fh:
        svg = plot_csv(fh.read(), args.x, args.y)
    write_atomic(args.out, svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="expanderhyp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def family_flags(p):
        p.add_argument("--n", type=int)
        p.add_argument("--d", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--rows", type=int)
        p.add_argument("--cols", type=int)
        p.add_argument("--b", type=int)
        p.add_argument("--depth", type=int)

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    p.add_argument("--family", required=True, choices=KINDS)
    family_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    for name, func, help_ in (("stats", cmd_stats, "hyperbolicity and expansion summary"),
                              ("delta", cmd_delta, "hyperbolicity report")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("graph")
        p.add_argument("--delta-mode", choices=("exact", "sampled"), default="exact")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, help="geodesic budget per pair for the thin measure")
        if name == "stats":
            p.add_argument("--tol", type=float)
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("expansion", help="spectral and exact expansion report")
    p.add_argument("graph")
    p.add_argument("--tol", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("cylinder", help="cylinder-removal experiment (cylinder.csv rows)")
    p.add_argument("graph", nargs="+")
    p.add_argument("--alpha", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cylinder)

    p = sub.add_parser("audit", help="lemma audits (audit.csv rows)")
    p.add_argument("graph", nargs="+")
    p.add_argument("--lemma", choices=LEMMAS + ("all",), default="all")
    p.add_argument("--slack", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", help="label for the family column (default: file stem)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("scaling", help="delta vs size sweep (scaling.csv, plus .svg next to --out)")
    p.add_argument("--family", help="comma-separated family kinds")
    p.add_argument("--sizes", required=True)
    p.add_argument("--seeds", default="1")
    p.add_argument("--d", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--delta-mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("plot", help="render a CSV column pair as SVG")
    p.add_argument("csv")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--format", default="svg")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        return args.func(args)
    except UsageError as exc:
        code, msg = EXIT_USAGE, f"usage: {exc}"
    except (GeodesicBudgetExceeded, SizeCapError, ConvergenceError, GenerationError) as exc:
        code, msg = EXIT_CAP, str(exc)
    except MemoryError:
        code, msg = EXIT_CAP, "out of memory; the input is too large for dense distance matrices"
    except (OSError, GraphFormatError, PlotError, UnreachableError, ValueError) as exc:
        code, msg = EXIT_USAGE, str(exc)
    print(f"error: {' '.join(msg.split())}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

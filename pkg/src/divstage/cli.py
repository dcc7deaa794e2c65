"""Command-line front end.

Exit status: 0 for a yes answer or success, 1 for a no answer, 2 for an
error (the diagnostic names the offending field where there is one).
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import formats
from .coloring import FamilyProvider
from .core import Coloring, DivstageError, ErrorBudget, InstanceFormatError, count_vectors, query_first
from .multistage import get_solver, verify_sequence
from .oracles import brute_multistage, enumerate_solutions
from .representatives import compute_representative
from .treedec import DEFAULT_WIDTH_CAP

log = logging.getLogger("divstage")

MODE_NAMES = {"exhaustive": "exhaustive", "randomized": "randomized", "universal": "universal-set"}


def _common(p: argparse.ArgumentParser, ell: bool = True) -> None:
    p.add_argument("--input", "-i", required=True, help="instance JSON document")
    if ell:
        p.add_argument("--ell", type=int, default=None, help="diversity threshold (default: the document's ell)")
    p.add_argument("--seed", type=int, default=0, help="seed for every random draw (default 0)")
    p.add_argument("--error-prob", type=Fraction, default=Fraction(1, 4),
                   help="overall failure probability for Monte-Carlo solvers (default 0.25)")
    p.add_argument("--coloring-mode", choices=sorted(MODE_NAMES), default="exhaustive",
                   help="coloring family provider; universal selects universal-set (default exhaustive)")
    p.add_argument("--delta", type=float, default=0.01, help="per-family failure probability in randomized mode")
    p.add_argument("--width-cap", type=int, default=DEFAULT_WIDTH_CAP,
                   help=f"largest accepted tree-decomposition width for s-t path stages (default {DEFAULT_WIDTH_CAP})")
    p.add_argument("--output", "-o", default=None, help="write the JSON report here as well as to stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="divstage", description="Diverse multistage solvers.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a multistage instance and print a witness sequence")
    _common(p)

    p = sub.add_parser("representative", help="print a diverse representative family for one stage")
    _common(p)
    p.add_argument("--stage", type=int, default=0, help="stage index (default 0)")

    p = sub.add_parser("colored", help="run one colored exact query on one stage")
    _common(p, ell=False)
    p.add_argument("--stage", type=int, default=0, help="stage index (default 0)")
    p.add_argument("--kind", default=None, help="expected stage kind; mismatch is an error")
    p.add_argument("--counts", default=None,
                   help="comma-separated per-color counts; omitted means search every count vector")
    p.add_argument("--colors", default=None, help="comma-separated coloring (default: the stage's own colors)")

    p = sub.add_parser("oracle", help="brute-force answer, or every solution with --solutions")
    _common(p)
    p.add_argument("--solutions", action="store_true", help="list every feasible solution per stage")

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("--kind", required=True, choices=formats.KINDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="generator parameter, repeatable (n, tau, ell, density, k, ...)")
    p.add_argument("--reduce-from", default=None, metavar="EDGES",
                   help="instead build the vertex-cover reduction of this graph: 'n:u-v,u-v,...'")
    p.add_argument("--k", type=int, default=2, help="independent-set size for --reduce-from")
    p.add_argument("--output", "-o", default=None)

    p = sub.add_parser("verify", help="check a witness sequence against an instance")
    _common(p)
    p.add_argument("--witness", "-w", required=True)

    p = sub.add_parser("bench", help="time solve over a seed sweep; CSV on stdout")
    p.add_argument("--kind", default="voting", choices=("voting", "matroid", "matching", "stpath"))
    p.add_argument("--sizes", default="4,6,8", help="comma-separated base-set sizes")
    p.add_argument("--seeds", type=int, default=3, help="seeds 0..N-1 per size")
    p.add_argument("--tau", type=int, default=2)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--error-prob", type=Fraction, default=Fraction(1, 4))
    p.add_argument("--coloring-mode", choices=sorted(MODE_NAMES), default="exhaustive",
                   help="coloring family provider; universal selects universal-set (default exhaustive)")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--csv", default=None, help="also write the CSV rows here")
    p.add_argument("--plot", default=None, help="write a runtime figure (PNG/PDF/SVG by extension)")
    return parser


def _emit(doc: dict, output: str | None) -> None:
    text = formats.dumps(doc)
    sys.stdout.write(text)
    if output:
        Path(output).write_text(text)


def _provider(args) -> FamilyProvider:
    return FamilyProvider(MODE_NAMES[args.coloring_mode], args.seed, args.delta)


def _budget(args) -> ErrorBudget:
    return ErrorBudget(Fraction(args.error_prob), args.seed)


def _load(args):
    doc = formats.load_json(args.input)
    mi = formats.instance_from_doc(doc, getattr(args, "ell", None))
    return doc, mi


def _stage(args, doc, mi):
    if not 0 <= args.stage < mi.tau:
        raise InstanceFormatError("--stage", f"index {args.stage} outside 0..{mi.tau - 1}")
    stage_docs = doc.get("stages") if isinstance(doc.get("stages"), list) else None
    sdoc = stage_docs[args.stage] if stage_docs else None
    return mi.stages[args.stage], sdoc


def _parse_ints(text: str, field: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise InstanceFormatError(field, f"expected comma-separated integers, got {text!r}") from None


def _parse_params(items: Sequence[str]) -> dict:
    out: dict = {}
    for item in items:
        if "=" not in item:
            raise InstanceFormatError("--param", f"expected KEY=VALUE, got {item!r}")
        key, raw = item.split("=", 1)
        value: object = raw
        for conv in (int, float):
            try:
                value = conv(raw)
                break
            except ValueError:
                continue
        if raw.lower() in ("true", "false"):
            value = raw.lower() == "true"
        out[key] = value
    return out


def cmd_solve(args) -> int:
    from .report import run_instance
    _, mi = _load(args)
    seq = run_instance(mi, _budget(args), _provider(args), args.width_cap)
    _emit(formats.witness_doc(mi, seq, seed=args.seed), args.output)
    return 0 if seq is not None else 1


def cmd_representative(args) -> int:
    doc, mi = _load(args)
    stage, _ = _stage(args, doc, mi)
    solver = get_solver(mi.kind, args.width_cap)
    fam = compute_representative(stage, mi.ell, solver, _provider(args), _budget(args))
    out = {"schema": formats.SCHEMA, "kind": mi.kind, "stage": args.stage, "ell": mi.ell,
           "provenance": fam.provenance, "family": [list(s) for s in fam.solutions]}
    _emit(out, args.output)
    return 0 if fam.solutions else 1


def cmd_colored(args) -> int:
    doc, mi = _load(args)
    if args.kind is not None and args.kind != mi.kind:
        raise InstanceFormatError("kind", f"instance is {mi.kind!r}, not {args.kind!r}")
    stage, sdoc = _stage(args, doc, mi)
    colors = _parse_ints(args.colors, "--colors") if args.colors else formats.stage_colors(stage, sdoc)
    if colors is None:
        colors = (1,) * stage.base_size
    if len(colors) != stage.base_size:
        raise InstanceFormatError("colors", f"expected {stage.base_size} colors, got {len(colors)}")
    if min(colors, default=1) < 1:
        raise InstanceFormatError("colors", "colors start at 1")
    s = max(max(colors, default=1), 4 if args.counts is None else len(_parse_ints(args.counts, "--counts")))
    coloring = Coloring(tuple(colors), s)
    if args.counts is not None:
        counts = _parse_ints(args.counts, "--counts")
        if len(counts) != s:
            raise InstanceFormatError("--counts", f"expected {s} counts, got {len(counts)}")
        profiles = [counts]
    else:
        lo, hi = stage.size_range()
        profiles = list(count_vectors(coloring.class_sizes(), min(hi, stage.base_size), lo))
    solver = get_solver(mi.kind, args.width_cap)
    hit = query_first(solver, stage, coloring, profiles, _budget(args).share(max(len(profiles), 1)))
    out = {"schema": formats.SCHEMA, "kind": mi.kind, "stage": args.stage, "colors": list(colors),
           "answer": "no" if hit is None else "yes"}
    if hit is not None:
        out.update(counts=list(hit[0]), solution=list(hit[1]))
    elif args.counts is not None:
        out["counts"] = list(profiles[0])
    _emit(out, args.output)
    return 0 if hit is not None else 1


def cmd_oracle(args) -> int:
    _, mi = _load(args)
    if args.solutions:
        sols = [[list(s) for s in enumerate_solutions(st)] for st in mi.stages]
        _emit({"schema": formats.SCHEMA, "kind": mi.kind, "solutions": sols}, args.output)
        return 0 if all(sols) else 1
    seq = brute_multistage(mi)
    _emit(formats.witness_doc(mi, seq, method="brute-force"), args.output)
    return 0 if seq is not None else 1


def cmd_gen(args) -> int:
    from .instances import generate, reduce_is_to_dmvc
    if args.reduce_from:
        import networkx as nx
        head, _, body = args.reduce_from.partition(":")
        try:
            n = int(head)
            edges = [tuple(int(v) for v in e.split("-")) for e in body.split(",") if e]
        except ValueError:
            raise InstanceFormatError("--reduce-from", "expected 'n:u-v,u-v,...'") from None
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(edges)
        mi = reduce_is_to_dmvc(g, args.k)
    else:
        mi = generate(args.kind, _parse_params(args.param), args.seed)
    _emit(formats.instance_to_doc(mi), args.output)
    return 0


def cmd_verify(args) -> int:
    _, mi = _load(args)
    seq = formats.sequence_from_witness(formats.load_json(args.witness, "witness"))
    ok = verify_sequence(mi, seq)
    _emit({"schema": formats.SCHEMA, "kind": mi.kind, "ell": mi.ell, "valid": ok}, None)
    return 0 if ok else 1


def cmd_bench(args) -> int:
    from .report import bench, growth_exponent, plot_rows, rows_to_csv
    sizes = _parse_ints(args.sizes, "--sizes")
    provider = FamilyProvider(MODE_NAMES[args.coloring_mode], 0)
    rows = bench(args.kind, sizes, range(args.seeds), args.tau, args.ell, Fraction(args.error_prob), provider,
                 _parse_params(args.param))
    text = rows_to_csv(rows)
    sys.stdout.write(text)
    if args.csv:
        Path(args.csv).write_text(text)
    if args.plot:
        plot_rows(rows, args.plot)
        log.info("figure written to %s (growth exponent %.2f)", args.plot, growth_exponent(rows))
    return 0


COMMANDS = {"solve": cmd_solve, "representative": cmd_representative, "colored": cmd_colored,
            "oracle": cmd_oracle, "gen": cmd_gen, "verify": cmd_verify, "bench": cmd_bench}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InstanceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except DivstageError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

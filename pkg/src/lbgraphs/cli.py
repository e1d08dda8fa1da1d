"""Command-line front end: generate, verify, eval, sweep, export.

Exit codes: 0 pass, 1 usage error, 2 verification failure, 3 resource limit,
4 corrupted or mismatched files.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import CorruptionError, InfeasibleError, InvalidParameterError, LBGraphsError, ResourceLimitError
from .evaluate import (
    RNG_ID,
    Budget,
    ExperimentReport,
    PathShortcutSampler,
    host_table,
    make_rng,
    pair_emulator,
    param_grid,
    random_emulator,
    random_subgraph,
    run_compress_experiment,
    run_emulator_experiment,
    run_shortcut_experiment,
    run_spanner_experiment,
    sweep,
    sweep_table,
    trivial_shortcuts,
)
from .formats import read_candidate, read_instance, write_instance
from .instances import PARAMS, generate, verify
from .oracles import SpannerSubgraph, WeightedEmulator

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_LIMIT, EXIT_CORRUPT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 by default; usage errors are 1 here
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _add_params(p: argparse.ArgumentParser, kind: str, listy: bool = False) -> None:
    for name in PARAMS[kind]:
        p.add_argument(f"--{name}", type=_int_list if listy else int, required=True)


def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget-kind", choices=("vertex_linear", "edge_linear", "exponent"), default="edge_linear")
    p.add_argument("--budget-mult", type=Fraction, default=Fraction(1))
    p.add_argument("--budget-eps", type=Fraction, default=Fraction(0))


def _add_report(p: argparse.ArgumentParser) -> None:
    p.add_argument("--report", type=Path, help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identity)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lbgraphs", description="Hard-instance generator and verifier for shortcut, spanner "
                                                  "and emulator lower-bound constructions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="build an instance and write its files")
    gsub = gen.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for kind in PARAMS:
        gp = gsub.add_parser(kind)
        _add_params(gp, kind)
        gp.add_argument("--out", type=Path, required=True, help="output directory")

    ver = sub.add_parser("verify", help="re-run the construction's audits on stored files")
    ver.add_argument("instance", type=Path)
    _add_report(ver)

    ev = sub.add_parser("eval", help="evaluate a candidate against an instance")
    esub = ev.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    sc = esub.add_parser("shortcut")
    sc.add_argument("instance", type=Path)
    sc.add_argument("--baseline", choices=("trivial", "on-path"))
    sc.add_argument("--k", type=int, default=0, help="sample size (trivial) or shortcut count (on-path)")
    sc.add_argument("--candidate", type=Path, help="shortcut candidate file")
    sp = esub.add_parser("spanner")
    sp.add_argument("instance", type=Path)
    sp.add_argument("--candidate", required=True, help="'full', 'random' or a spanner candidate file")
    sp.add_argument("--size", type=int, default=0, help="edge count for --candidate random")
    em = esub.add_parser("emulator")
    em.add_argument("instance", type=Path)
    em.add_argument("--candidate", required=True, help="'pairs', 'empty', 'random' or an emulator candidate file")
    em.add_argument("--size", type=int, default=0, help="edge count for --candidate random")
    for p in (sc, sp, em):
        p.add_argument("--seed", type=int, default=0)
        _add_budget(p)
        _add_report(p)
    cp = esub.add_parser("compress")
    cp.add_argument("instance", type=Path)
    cp.add_argument("--T", dest="T", default="all",
                    help="'all' (every subset), 'none', or comma-separated pair ids")
    cp.add_argument("--max-pairs", type=int, default=12)
    _add_report(cp)

    sw = sub.add_parser("sweep", help="grid of instances x budgets with the random baseline")
    swsub = sw.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for kind in PARAMS:
        p = swsub.add_parser(kind)
        _add_params(p, kind, listy=True)
        p.add_argument("--budget-kind", choices=("vertex_linear", "edge_linear", "exponent"), default="exponent")
        p.add_argument("--budget-mult", type=Fraction, default=Fraction(1))
        p.add_argument("--eps", default="0", help="comma-separated epsilons (rationals)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=Path, help="write the TSV here instead of stdout")

    ex = sub.add_parser("export", help="convert an instance to JSON or Graphviz DOT")
    ex.add_argument("instance", type=Path)
    ex.add_argument("--format", choices=("json", "dot"), default="json")
    ex.add_argument("--out", type=Path)
    return parser


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _budget(args: argparse.Namespace) -> Budget:
    return Budget(args.budget_kind, args.budget_mult, args.budget_eps)


def _finish(rep: ExperimentReport, args: argparse.Namespace) -> int:
    _emit(rep.to_text(timing=args.timing), args.report)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_generate(args: argparse.Namespace) -> int:
    params = {k: getattr(args, k) for k in PARAMS[args.kind]}
    inst = generate(args.kind, params)
    manifest = write_instance(inst, args.out)
    c = manifest["counts"]
    print(f"{args.kind}: n={c['n']} m={c['m']} pairs={c['pairs']} -> {args.out}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    inst, manifest = read_instance(args.instance)
    reports = verify(inst)
    passed = all(r.passed for r in reports)
    lines = ["# lbgraphs verify v1", f"kind: {inst.kind}", f"digest: {manifest['digest']}"]
    lines += [f"counts.{k}: {v}" for k, v in manifest["counts"].items()]
    lines += [f"audit.{r.summary()}" for r in reports]
    lines.append(f"status: {'PASS' if passed else 'FAIL'}")
    _emit("\n".join(lines) + "\n", args.report)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_eval(args: argparse.Namespace) -> int:
    inst, manifest = read_instance(args.instance)
    digest = manifest["digest"]
    if args.experiment == "compress":
        if args.T == "all":
            T = None
        elif args.T == "none":
            T = []
        else:
            T = _int_list(args.T)
        return _finish(run_compress_experiment(inst, T, args.max_pairs, timing=args.timing), args)

    budget = _budget(args)
    rng = make_rng(args.seed)
    if args.experiment == "shortcut":
        if args.candidate is not None:
            cand = read_candidate(args.candidate, digest)
            desc = f"file {args.candidate.name}"
        elif args.baseline == "trivial":
            cand = trivial_shortcuts(inst.graph, args.k, args.seed)
            desc = f"trivial k={args.k} seed={args.seed} rng={RNG_ID}"
        elif args.baseline == "on-path":
            cand = PathShortcutSampler(inst.graph, inst.pairs).sample(args.k, rng)
            desc = f"on-path k={args.k} seed={args.seed} rng={RNG_ID}"
        else:
            raise UsageError("eval shortcut needs --baseline or --candidate")
        return _finish(run_shortcut_experiment(inst, budget, cand, desc, timing=args.timing), args)

    if args.experiment == "spanner":
        if args.candidate == "full":
            cand = SpannerSubgraph.full(inst.graph)
            desc = "full"
        elif args.candidate == "random":
            cand = random_subgraph(inst.graph, args.size, rng)
            desc = f"random size={args.size} seed={args.seed} rng={RNG_ID}"
        else:
            cand = read_candidate(args.candidate, digest)
            desc = f"file {Path(args.candidate).name}"
        if not isinstance(cand, SpannerSubgraph):
            raise CorruptionError("candidate file does not hold a spanner")
        return _finish(run_spanner_experiment(inst, budget, cand, desc, timing=args.timing), args)

    table = host_table(inst.graph)
    if args.candidate == "pairs":
        em, desc = pair_emulator(inst.graph, inst.pairs), "pairs"
    elif args.candidate == "empty":
        em, desc = WeightedEmulator(()), "empty"
    elif args.candidate == "random":
        if table is None:
            raise ResourceLimitError("random emulators need the all-pairs oracle; raise LBGRAPHS_ORACLE_VERTICES")
        em = random_emulator(inst.graph, inst.pairs, args.size, rng, table)
        desc = f"random size={args.size} seed={args.seed} rng={RNG_ID}"
    else:
        em = read_candidate(args.candidate, digest)
        desc = f"file {Path(args.candidate).name}"
    if not isinstance(em, WeightedEmulator):
        raise CorruptionError("candidate file does not hold an emulator")
    return _finish(run_emulator_experiment(inst, budget, em, desc, table, timing=args.timing), args)


def cmd_sweep(args: argparse.Namespace) -> int:
    axes = {k: getattr(args, k) for k in PARAMS[args.kind]}
    try:
        eps = [Fraction(x) for x in args.eps.split(",") if x]
    except ValueError as exc:
        raise UsageError(f"bad --eps value: {exc}") from exc
    budgets = [Budget(args.budget_kind, args.budget_mult, e) for e in eps]
    rows = sweep(param_grid(args.kind, axes), budgets, args.seed)
    _emit(sweep_table(rows), args.out)
    return EXIT_OK if all(r["status"] in ("PASS", "COUNTS_ONLY") for r in rows) else EXIT_FAIL


def cmd_export(args: argparse.Namespace) -> int:
    inst, manifest = read_instance(args.instance)
    g = inst.graph
    if args.format == "json":
        doc = {
            "kind": inst.kind, "params": inst.params, "directed": g.directed, "digest": manifest["digest"],
            "vertices": [{"id": v, "kind": int(g.vertex_kind[v]), "layer": int(g.vertex_layer[v]),
                          "coords": g.coords[v].tolist(), "provenance": int(g.provenance[v]),
                          "port": int(g.port_index[v])} for v in range(g.n)],
            "edges": [{"id": e, "u": int(g.src[e]), "v": int(g.dst[e]), "kind": int(g.edge_kind[e])}
                      for e in range(g.m)],
            "pairs": [{"source": int(s), "target": int(t), "length": int(ln), "path": p}
                      for s, t, ln, p in zip(inst.pairs.sources, inst.pairs.targets,
                                             inst.pairs.expected_length, inst.pairs.paths.tolist())],
        }
        text = json.dumps(doc, sort_keys=True) + "\n"
    else:
        arrow = "->" if g.directed else "--"
        lines = [f"{'digraph' if g.directed else 'graph'} lbgraphs {{"]
        lines += [f'  {v} [label="{v}" layer={int(g.vertex_layer[v])}];' for v in range(g.n)]
        lines += [f"  {int(a)} {arrow} {int(b)};" for a, b in zip(g.src, g.dst)]
        lines.append("}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "verify": cmd_verify, "eval": cmd_eval, "sweep": cmd_sweep,
            "export": cmd_export}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"lbgraphs: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidParameterError, InfeasibleError) as exc:
        print(f"lbgraphs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"lbgraphs: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except CorruptionError as exc:
        print(f"lbgraphs: corrupted input: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except LBGraphsError as exc:
        print(f"lbgraphs: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

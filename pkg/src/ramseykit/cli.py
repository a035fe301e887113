"""Command-line entry points: canonical/rainbow search, arrow decisions,
the constructive procedure demo, and Monte Carlo sweeps."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from .adversaries import AdversarySpec, generate_colouring
from .colouring import read_colouring, write_colouring
from .erdos_rado import NoWitness, er_find
from .graphs import OrderedGraph, read_graph
from .harness import (
    ExperimentConfig,
    run_sweep,
    verify_corollary_mode,
    write_json,
    write_records_csv,
    write_summary_csv,
)
from .search import (
    ArrowQuery,
    DEFAULT_NODE_BUDGET,
    ResourceLimitError,
    arrows_mono,
    find_canonical_copy,
    find_rainbow_copy,
)

__all__ = ["main"]


def _parse_vertices(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    return [int(tok) for tok in text.replace(",", " ").split()]


def _cmd_find(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    phi = read_colouring(args.colouring, graph)
    within = _parse_vertices(args.set)
    if args.rainbow:
        outcome = find_rainbow_copy(phi, args.ell, within)
    else:
        outcome = find_canonical_copy(phi, args.ell, within)
    if not outcome.found:
        print(f"no {'rainbow' if args.rainbow else 'canonical'} K_{args.ell} "
              f"({outcome.nodes_explored} nodes explored)")
        return 1
    witness = outcome.witness
    tags = ", ".join(sorted(t.value for t in witness.tags))
    print(f"found K_{args.ell} on {witness.vertices} with tags: {tags}")
    for (u, v), c in witness.evidence:
        print(f"  edge {u} {v} colour {c}")
    if args.witness_out:
        payload = {
            "vertices": list(witness.vertices),
            "tags": sorted(t.value for t in witness.tags),
            "evidence": [[u, v, c] for (u, v), c in witness.evidence],
        }
        with open(args.witness_out, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        print(f"witness written to {args.witness_out}")
    return 0


def _cmd_arrow(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    query = ArrowQuery(ell=args.ell, r=args.colours)
    try:
        outcome = arrows_mono(graph, query, budget=args.budget)
    except ResourceLimitError as exc:
        print(f"undecided: {exc}")
        return 2
    if outcome.arrows:
        print(f"arrows: every {args.colours}-colouring of this graph has a "
              f"monochromatic K_{args.ell} ({outcome.nodes} nodes)")
        return 0
    print(f"does not arrow: certificate colouring with no monochromatic "
          f"K_{args.ell} found ({outcome.nodes} nodes)")
    if args.witness_out:
        write_colouring(outcome.witness, args.witness_out)
        print(f"certificate written to {args.witness_out}")
    return 0


def _cmd_er_demo(args: argparse.Namespace) -> int:
    spec = AdversarySpec.from_json(json.loads(args.adversary))
    host = OrderedGraph.complete(args.n)
    phi = generate_colouring(host, spec)
    try:
        result = er_find(phi, args.ell, seed=args.seed)
    except NoWitness as exc:
        print(f"no witness: {exc}")
        return 1
    print(f"branch: {result.branch}")
    if result.sequence is not None:
        print("sequence trace (vertex, colour, direction, survivors):")
        for step, survivors in zip(result.sequence.steps, result.sequence.survivors):
            shown = list(survivors[:8])
            suffix = "..." if len(survivors) > 8 else ""
            print(f"  v={step.vertex} c={step.colour} {step.direction} "
                  f"|S|={len(survivors)} S={shown}{suffix}")
    witness = result.witness
    tags = ", ".join(sorted(t.value for t in witness.tags))
    print(f"witness K_{args.ell} on {witness.vertices} with tags: {tags}")
    for (u, v), c in witness.evidence:
        print(f"  edge {u} {v} colour {c}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    with open(args.config) as fh:
        config = ExperimentConfig.from_json(json.load(fh))
    result = run_sweep(config, threads=args.threads)
    write_records_csv(result.records, args.out)
    summary_path = args.out.rsplit(".", 1)[0] + ".summary.csv"
    write_summary_csv(result.summaries, summary_path)
    if args.json:
        write_json(result, args.json)
    if config.clean_mode and args.verify:
        report = verify_corollary_mode(result.records)
        print(f"clean-mode audit: {report.trials_checked} trials re-checked, "
              f"{report.witnesses_checked} witnesses verified")
    print(f"{len(result.records)} trials -> {args.out}")
    print(f"summary -> {summary_path}")
    for s in result.summaries:
        print(f"  n={s.n} C={s.c} p={s.p:.5f}: {s.successes}/{s.trials} "
              f"p_hat={s.p_hat:.3f} CI=({s.ci_lo:.3f}, {s.ci_hi:.3f})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramseykit",
        description="Canonical Ramsey patterns in (random) graphs: search, "
                    "arrow decisions, and threshold experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_find = sub.add_parser("find", help="search a coloured graph for a canonical or rainbow clique")
    p_find.add_argument("--graph", required=True)
    p_find.add_argument("--colouring", required=True)
    p_find.add_argument("--ell", type=int, required=True)
    p_find.add_argument("--rainbow", action="store_true", help="search for rainbow copies only")
    p_find.add_argument("--set", default=None, help="restrict to these vertices, e.g. '1,2,5'")
    p_find.add_argument("--witness-out", default=None)
    p_find.set_defaults(func=_cmd_find)

    p_arrow = sub.add_parser("arrow", help="decide whether every r-colouring has a monochromatic clique")
    p_arrow.add_argument("--graph", required=True)
    p_arrow.add_argument("--ell", type=int, required=True)
    p_arrow.add_argument("--colours", type=int, required=True)
    p_arrow.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p_arrow.add_argument("--witness-out", default=None)
    p_arrow.set_defaults(func=_cmd_arrow)

    p_demo = sub.add_parser("er-demo", help="run the constructive procedure on a coloured complete graph")
    p_demo.add_argument("--n", type=int, required=True)
    p_demo.add_argument("--ell", type=int, required=True)
    p_demo.add_argument("--adversary", required=True,
                        help='JSON, e.g. \'{"kind": "MinOrder"}\' or \'{"kind": "RandomR", "r": 5, "seed": 3}\'')
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.set_defaults(func=_cmd_er_demo)

    p_sweep = sub.add_parser("sweep", help="run a Monte Carlo threshold sweep from a JSON config")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--json", default=None)
    p_sweep.add_argument("--threads", type=int, default=1)
    p_sweep.add_argument("--verify", action="store_true",
                         help="re-audit clean-mode invariants after the sweep")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

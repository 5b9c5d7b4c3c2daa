"""Command-line front end: graph generation, proactive overlay builds,
single connections, baseline comparisons, and the named experiment sweeps.

Every subcommand is a pure function of its flags and seed; rerunning with
identical arguments reproduces identical bytes. Output files are written
to a temporary sibling and renamed into place, so a failing run leaves no
partial file behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from random import Random

from .baseline import compare_costs
from .experiments import (
    EXPERIMENT_NAMES,
    experiment_preset,
    metrics_to_csv,
    metrics_to_json,
    run_experiment,
)
from .proactive import build_proactive_overlay, load_overlay, overlay_to_json, swap_closure
from .protocol import ConnectionResult, setup_connection
from .topology import SparsityError, generate_graph, graph_to_json, load_graph


def _atomic_write(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=target.name + ".")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_state(args):
    """Graph, overlay, and the seeded stream left where the overlay build
    ended, so tie-breaks and protocol draws share one documented order."""
    g = load_graph(args.graph)
    rng = Random(args.seed)
    if getattr(args, "overlay", None):
        o = load_overlay(args.overlay)
    else:
        o = swap_closure(build_proactive_overlay(g, rng))
    return g, o, rng


def cmd_generate(args) -> int:
    rng = Random(args.seed)
    g = generate_graph(args.nodes, args.avg_degree, args.hc_max, rng)
    _atomic_write(args.output, graph_to_json(g))
    print(f"wrote {args.output}: {g.n} nodes, {len(g.links)} links")
    return 0


def cmd_proactive(args) -> int:
    g = load_graph(args.graph)
    rng = Random(args.seed)
    initial = build_proactive_overlay(g, rng)
    closed = swap_closure(initial)
    initial_path = f"{args.output}.initial.json"
    closed_path = f"{args.output}.closed.json"
    _atomic_write(initial_path, overlay_to_json(initial))
    _atomic_write(closed_path, overlay_to_json(closed))
    print(f"wrote {initial_path} ({len(initial)} pairs) and {closed_path} ({len(closed)} pairs)")
    return 0


def _connection_result_payload(result: ConnectionResult) -> dict:
    return {
        "source": result.source,
        "target": result.target,
        "success": result.success,
        "attempts_used": result.attempts_used,
        "failures": result.failures,
        "attempts": [
            {
                "status": out.status,
                "hops": out.hops,
                "qents_generated": out.qents_generated,
                "swaps": out.swaps,
                "new_pairs": [list(p) for p in out.new_pairs],
                "visited": out.visited,
                "trace": [
                    {"at": r.at, "decision": r.decision, "to": r.to, "c1": r.c1, "c2": r.c2}
                    for r in out.trace
                ],
            }
            for out in result.outcomes
        ],
    }


def cmd_connect(args) -> int:
    g, o, rng = _load_state(args)
    c1 = args.c1 if args.c1 is not None else g.n
    c2 = args.c2 if args.c2 is not None else g.n
    result = setup_connection(g, o, args.source, args.target, args.retries, c1, c2, rng)
    text = json.dumps(_connection_result_payload(result), indent=2, sort_keys=True)
    if args.output:
        _atomic_write(args.output, text + "\n")
    else:
        print(text)
    return 0


def cmd_compare(args) -> int:
    g, o, rng = _load_state(args)
    record = compare_costs(g, o, args.source, args.target, rng)
    rows = [
        ("proactive", record.source, record.target, record.proactive_qents,
         record.proactive_swaps, record.proactive_path_record_len),
        ("baseline", record.source, record.target, record.baseline_qents,
         record.baseline_swaps, record.baseline_path_record_len),
    ]
    header = ["method", "source", "target", "qents", "swaps", "path_record_len"]
    if args.format == "json":
        text = json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"
    else:
        lines = [",".join(header)]
        lines += [",".join(str(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    if args.output:
        _atomic_write(args.output, text)
    else:
        print(text, end="")
    return 0


def cmd_experiment(args) -> int:
    overrides = {}
    if args.nodes is not None:
        if args.name == "fig3":
            # sweep sizes 10, 20, ... up to the requested cap
            overrides["nodes"] = tuple(range(10, args.nodes + 1, 10))
        else:
            overrides["nodes"] = (args.nodes,)
    if args.retries is not None:
        overrides["retries"] = tuple(range(1, args.retries + 1))
    if args.connections is not None:
        overrides["connections"] = args.connections
    if args.avg_degree is not None:
        overrides["avg_degree"] = args.avg_degree
    if args.c1 is not None:
        overrides["c1_init"] = args.c1
    if args.c2 is not None:
        overrides["c2_init"] = args.c2
    config = experiment_preset(
        args.name,
        replicates=args.replicates,
        base_seed=args.seed,
        hc_max=args.hc_max,
        **overrides,
    )
    rows = run_experiment(args.name, config)
    text = metrics_to_json(rows) if args.format == "json" else metrics_to_csv(rows)
    _atomic_write(args.output, text)
    print(f"wrote {args.output}: {len(rows)} rows")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qnetsim",
        description="Proactive entanglement distribution and connection setup simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a random connected topology")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--avg-degree", type=float, default=3.0)
    p.add_argument("--hc-max", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("proactive", help="build the proactive overlay and its swap closure")
    p.add_argument("--graph", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="prefix; writes <prefix>.initial.json and <prefix>.closed.json")
    p.set_defaults(func=cmd_proactive)

    p = sub.add_parser("connect", help="run one connection setup and print its result")
    p.add_argument("--graph", required=True)
    p.add_argument("--overlay", help="saved overlay JSON; default builds one from the graph")
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--retries", type=int, default=5)
    p.add_argument("--c1", type=int, default=None, help="cycle-break budget via entangled nodes (default: node count)")
    p.add_argument("--c2", type=int, default=None, help="cycle-break budget via fresh pairs (default: node count)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write the result JSON here instead of stdout")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("compare", help="proactive vs reactive setup costs for one pair")
    p.add_argument("--graph", required=True)
    p.add_argument("--overlay")
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="write here instead of stdout")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("experiment", help="run a named sweep and write its metrics table")
    p.add_argument("name", choices=EXPERIMENT_NAMES)
    p.add_argument("--nodes", type=int, default=None,
                   help="network size (fig3: sweep 10..NODES step 10)")
    p.add_argument("--retries", type=int, default=None, help="sweep retry budgets 1..RETRIES")
    p.add_argument("--connections", type=int, default=None)
    p.add_argument("--avg-degree", type=float, default=None)
    p.add_argument("--hc-max", type=int, default=15)
    p.add_argument("--c1", type=int, default=None)
    p.add_argument("--c2", type=int, default=None)
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, SparsityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front door.

Subcommands: gen, strategy, run, verify, exact, bounds, experiment.
Exit codes: 0 success, 1 usage/parse error, 2 illegal schedule,
3 legal-but-incomplete replay, 4 capability exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .bounds import compute_bounds_report
from .engine import Schedule, run_schedule
from .errors import (
    AcqtimeError,
    IllegalMatching,
    NotABijection,
    PBelowThreshold,
    TooLarge,
)
from .exact import cover_number, exact_ac, exact_bac
from .experiments import ExperimentConfig, run_experiment, write_csv
from .graphs import (
    Caterpillar,
    Graph,
    Tree,
    find_spine,
    gnp_sample,
    random_caterpillar,
    random_tree,
)
from .strategies import (
    caterpillar_strategy,
    general_graph_strategy,
    gnp_team_strategy,
    oscillation_schedule,
    tree_strategy,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ILLEGAL = 2
EXIT_INCOMPLETE = 3
EXIT_CAPABILITY = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="acqtime", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[], help="generate a graph file")
    p.add_argument("--kind", choices=["gnp", "tree", "caterpillar"], default="gnp")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5, help="edge probability (gnp)")
    p.add_argument("--spine-len", type=int, default=None, help="caterpillar spine length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")

    p = sub.add_parser("strategy", help="emit a schedule for a graph")
    p.add_argument("--algo", choices=["oscillation", "team", "caterpillar", "tree", "general"], required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=float, default=None, help="edge probability used to size teams")
    p.add_argument("--mode", choices=["direct", "strict"], default="direct")
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("run", help="replay a schedule and print the report")
    p.add_argument("--graph", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--visits", action="store_true", help="track agent-vertex visits")

    p = sub.add_parser("verify", help="check a schedule: legal and completes")
    p.add_argument("--graph", required=True)
    p.add_argument("--schedule", required=True)

    p = sub.add_parser("exact", help="exact solvers on tiny graphs")
    p.add_argument("quantity", choices=["ac", "bac", "cover"])
    p.add_argument("--graph", required=True)
    p.add_argument("--enable-n6", action="store_true")

    p = sub.add_parser("bounds", help="print the bound formulas as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--eps", type=float, default=1.0)

    p = sub.add_parser("experiment", help="run a config grid to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--workers", type=int, default=None, help="override ACQ_THREADS")

    return parser


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def _load_graph(path: str) -> Graph:
    try:
        return Graph.load(path)
    except (OSError, ValueError) as exc:
        print(f"acqtime: cannot read graph {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_schedule(path: str) -> Schedule:
    try:
        return Schedule.load(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"acqtime: cannot read schedule {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _cmd_gen(args) -> int:
    if args.kind == "gnp":
        if not (0.0 <= args.p <= 1.0):
            print("acqtime: p must be in [0,1]", file=sys.stderr)
            return EXIT_USAGE
        g = gnp_sample(args.n, args.p, args.seed)
    elif args.kind == "tree":
        g = random_tree(args.n, args.seed)
    else:
        spine = args.spine_len if args.spine_len is not None else max(2, args.n // 2)
        g = random_caterpillar(args.n, spine, args.seed).tree
    _emit(g.to_text(), args.output)
    return EXIT_OK


def _as_tree(g: Graph) -> Tree:
    try:
        return Tree(g.n, zip(g.eu.tolist(), g.ev.tolist()))
    except ValueError as exc:
        print(f"acqtime: graph is not a tree: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _cmd_strategy(args) -> int:
    g = _load_graph(args.graph)
    if args.algo == "oscillation":
        sched = oscillation_schedule(g.n)
    elif args.algo == "team":
        if args.p is None:
            print("acqtime: --algo team requires --p", file=sys.stderr)
            return EXIT_USAGE
        sched = gnp_team_strategy(g, args.p, mode=args.mode, eps=args.eps, seed=args.seed)
    elif args.algo == "caterpillar":
        tree = _as_tree(g)
        spine = find_spine(tree)
        if spine is None:
            print("acqtime: graph is not a caterpillar", file=sys.stderr)
            return EXIT_USAGE
        sched = caterpillar_strategy(Caterpillar(tree, spine))
    elif args.algo == "tree":
        sched = tree_strategy(_as_tree(g))
    else:
        sched = general_graph_strategy(g)
    text = json.dumps(sched.to_json_obj()) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def _cmd_run(args) -> int:
    g = _load_graph(args.graph)
    sched = _load_schedule(args.schedule)
    try:
        report = run_schedule(g, sched, track_visits=args.visits)
    except (IllegalMatching, NotABijection) as exc:
        print(f"acqtime: {exc}", file=sys.stderr)
        return EXIT_ILLEGAL
    except ValueError as exc:
        print(f"acqtime: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(report.to_json_obj()))
    return EXIT_OK


def _cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    sched = _load_schedule(args.schedule)
    try:
        report = run_schedule(g, sched)
    except (IllegalMatching, NotABijection) as exc:
        print(f"acqtime: {exc}", file=sys.stderr)
        return EXIT_ILLEGAL
    except ValueError as exc:
        print(f"acqtime: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(report.to_json_obj()))
    return EXIT_OK if report.completed else EXIT_INCOMPLETE


def _cmd_exact(args) -> int:
    g = _load_graph(args.graph)
    fns = {"ac": exact_ac, "bac": exact_bac, "cover": cover_number}
    try:
        value = fns[args.quantity](g, enable_n6=args.enable_n6)
    except TooLarge as exc:
        print(f"acqtime: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except AcqtimeError as exc:
        print(f"acqtime: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(value)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    try:
        report = compute_bounds_report(args.n, args.p, args.eps)
    except (PBelowThreshold, AcqtimeError, ValueError) as exc:
        print(f"acqtime: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(report.to_json_obj()))
    return EXIT_OK


def _cmd_experiment(args) -> int:
    try:
        config = ExperimentConfig.load(args.config)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"acqtime: bad config {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows = run_experiment(config, workers=args.workers)
    write_csv(rows, args.output)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "gen": _cmd_gen,
        "strategy": _cmd_strategy,
        "run": _cmd_run,
        "verify": _cmd_verify,
        "exact": _cmd_exact,
        "bounds": _cmd_bounds,
        "experiment": _cmd_experiment,
    }
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except AcqtimeError as exc:
        print(f"acqtime: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())

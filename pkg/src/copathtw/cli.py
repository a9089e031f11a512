"""Command line front end: ``copathtw solve | verify | selfcheck``.

Exit codes: 0 success, 1 verification/selfcheck failure, 2 input error,
3 internal verification failure (a solver bug trap).
"""

from __future__ import annotations

import argparse
import functools
import json
import os
import sys
import time
from pathlib import Path

from copathtw import checks, copath_packing, copath_set
from copathtw.decomposition import heuristic_decomposition, nicify, parse_td, validate
from copathtw.dp_common import shrink
from copathtw.graph import (
    FormatError,
    Graph,
    parse_weights,
    read_gr,
    verify_packing_solution,
    verify_set_solution,
    weight_of,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def load_graph(graph_path: str, weights_path: str | None, problem: str) -> Graph:
    try:
        weights = parse_weights(_read(weights_path)) if weights_path else None
        if problem == "set":
            return read_gr(_read(graph_path), edge_weights=weights)
        return read_gr(_read(graph_path), vertex_weights=weights)
    except (FormatError, ValueError) as exc:
        raise InputError(str(exc)) from None


def thread_cap() -> int:
    raw = os.environ.get("COPATHTW_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"COPATHTW_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise InputError("COPATHTW_THREADS must be >= 0")
    return value


def _external_kept(g: Graph, problem: str, kept) -> list:
    """1-indexed vertex ids, or 1-indexed ``[u, v]`` edge pairs."""
    if problem == "set":
        return [[g.edges[e][0] + 1, g.edges[e][1] + 1] for e in sorted(kept)]
    return [v + 1 for v in sorted(kept)]


def cmd_solve(args) -> tuple[int, str]:
    thread_cap()
    g = load_graph(args.graph, args.weights, args.problem)
    if args.td:
        try:
            td = parse_td(_read(args.td))
        except FormatError as exc:
            raise InputError(f"{args.td}: {exc}") from None
        report = validate(g, td)
        if not report.ok:
            raise InputError(f"{args.td}: " + "; ".join(v.message for v in report.violations))
    else:
        td = heuristic_decomposition(g, args.heuristic, seed=args.seed)

    t0 = time.perf_counter()
    nice, schedule = nicify(td, g)
    if args.decision is not None:
        g = g.unit_weighted()
    try:
        if args.problem == "set":
            sol = copath_set.solve_set(g, nice, schedule)
            ok = (verify_set_solution(g, sol.kept)
                  and weight_of(g, "edges", sol.kept) == sol.opt_weight)
            total = g.m
        else:
            sol = copath_packing.solve_packing(g, nice, schedule)
            ok = (verify_packing_solution(g, sol.kept)
                  and weight_of(g, "vertices", sol.kept) == sol.opt_weight)
            total = g.n
    except RuntimeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL, ""
    elapsed = time.perf_counter() - t0
    if not ok:
        print("internal error: solver output failed re-verification", file=sys.stderr)
        return EXIT_INTERNAL, ""

    report = {
        "problem": args.problem,
        "n": g.n,
        "m": g.m,
        "width": nice.width,
        "opt_weight": sol.opt_weight,
        "kept": _external_kept(g, args.problem, sol.kept) if args.emit_solution else None,
        "deleted_count": total - len(sol.kept),
    }
    if args.decision is not None:
        report["verdict"] = "YES" if total - sol.opt_weight <= args.decision else "NO"
    if args.stats:
        st = sol.stats
        report["stats"] = {
            "nodes": st.nodes,
            "max_family_size": st.max_family,
            "max_node_entries": st.max_node_entries,
            "size_invariant_violations": st.size_violations,
            "table_sizes": [total for *_, total in st.per_node],
            "wall_seconds": round(elapsed, 6),
        }
    if args.format == "json":
        return EXIT_OK, json.dumps(report, sort_keys=False)
    lines = [f"{k}: {json.dumps(v) if isinstance(v, (list, dict)) else v}"
             for k, v in report.items() if v is not None]
    return EXIT_OK, "\n".join(lines)


def cmd_verify(args) -> tuple[int, str]:
    g = load_graph(args.graph, args.weights, args.problem)
    try:
        data = json.loads(_read(args.solution))
        claimed = int(data["opt_weight"])
        raw = data["kept"]
        if args.problem == "set":
            kept = {g.edge_id(int(u) - 1, int(v) - 1) for u, v in raw}
        else:
            kept = {int(v) - 1 for v in raw}
            if any(not 0 <= v < g.n for v in kept):
                raise ValueError("vertex id out of range")
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.solution}: bad solution file ({exc})") from None
    if args.problem == "set":
        feasible = verify_set_solution(g, kept)
        weight = weight_of(g, "edges", kept)
    else:
        feasible = verify_packing_solution(g, kept)
        weight = weight_of(g, "vertices", kept)
    if not feasible:
        return EXIT_FAIL, "INVALID: kept set is not a linear forest"
    if weight != claimed:
        return EXIT_FAIL, f"INVALID: kept weight {weight} != claimed {claimed}"
    return EXIT_OK, f"OK: weight {weight}"


FAULTS = {
    "none": shrink,
    "drop-empty-bucket": functools.partial(shrink, drop_empty_bucket=True),
}


def cmd_selfcheck(args) -> tuple[int, str]:
    shrinker = FAULTS[args.inject_fault]
    failed = False
    for result in checks.run_all(args.seeds, args.max_n, shrinker=shrinker, quick=args.quick):
        print(result.line(), flush=True)
        for msg in result.failures[:10]:
            print(f"    {msg}")
        failed |= not result.ok
    return (EXIT_FAIL, "selfcheck FAILED") if failed else (EXIT_OK, "selfcheck passed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="copathtw", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve Co-Path Set or Co-Path Packing")
    p.add_argument("--problem", choices=("set", "packing"), required=True)
    p.add_argument("--graph", required=True, help="PACE .gr file")
    p.add_argument("--td", help="PACE .td file (default: heuristic decomposition)")
    p.add_argument("--weights", help="one integer per line: edges (set) or vertices (packing)")
    p.add_argument("--decision", type=int, metavar="K",
                   help="unit weights; answer whether at most K deletions suffice")
    p.add_argument("--emit-solution", action="store_true")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=None, help="tie-break seed for the heuristic")
    p.add_argument("--heuristic", choices=("min-fill", "min-degree"), default="min-fill")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution file")
    p.add_argument("--problem", choices=("set", "packing"), required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--weights")
    p.add_argument("--solution", required=True, help="JSON with opt_weight and kept")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selfcheck", help="run oracle and invariant suites")
    p.add_argument("--seeds", type=int, default=200)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--quick", action="store_true", help="smaller representative/nicify suites")
    p.add_argument("--inject-fault", choices=sorted(FAULTS), default="none",
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, out = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if out:
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Self-check suites shared by ``copathtw selfcheck`` and the acceptance tests.

Each suite returns a :class:`SuiteResult`; ``failures`` holds one
human-readable line per discrepancy naming the seed to replay.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import comb

from copathtw import copath_packing, copath_set
from copathtw.decomposition import (
    FORGET,
    heuristic_decomposition,
    heuristic_path_decomposition,
    is_path_shape,
    nicify,
    validate,
)
from copathtw.dp_common import shrink
from copathtw.graph import Graph
from copathtw.matroid import (
    WeightedSet,
    complete_graph_edges,
    complete_graph_representation,
    max_q_representative,
)
from copathtw.oracle import (
    STRUCTURES,
    brute_packing,
    brute_set,
    check_representative,
    corpus,
    cycle_with_chords,
    grid,
    random_instance,
)

SOLVERS = {
    "set": (copath_set.solve_set, brute_set, copath_set.verified),
    "packing": (copath_packing.solve_packing, brute_packing, copath_packing.verified),
}


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in self.notes.items())
        return f"[{status}] {self.name}: {self.checked} checked, {len(self.failures)} failed, {self.seconds:.2f}s{extra}"


class _timed:
    def __init__(self, result):
        self.result = result

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.result

    def __exit__(self, *exc):
        self.result.seconds = time.perf_counter() - self.t0


def oracle_equivalence(problem: str, count: int = 200, max_n: int = 8, seed: int = 0,
                       shrinker=shrink) -> SuiteResult:
    solve, brute, verified = SOLVERS[problem]
    res = SuiteResult(f"oracle-equivalence[{problem}]")
    with _timed(res):
        for s, g in corpus(count, max_n, seed):
            res.checked += 1
            expect = brute(g)[0]
            try:
                sol = solve(g, shrinker=shrinker)
            except RuntimeError as exc:
                res.failures.append(f"seed={s}: solver error: {exc}")
                continue
            if sol.opt_weight != expect:
                res.failures.append(f"seed={s}: dp={sol.opt_weight} oracle={expect}")
            elif not verified(g, sol):
                res.failures.append(f"seed={s}: emitted solution does not re-verify")
    return res


def decision_consistency(count: int = 200, max_n: int = 8, seed: int = 0) -> SuiteResult:
    from copathtw.graph import verify_packing_solution, verify_set_solution

    res = SuiteResult("decision-consistency")
    with _timed(res):
        for s, g in corpus(count, max_n, seed):
            unit = g.unit_weighted()
            opt_set = brute_set(unit)[0]
            opt_pack = brute_packing(unit)[0]
            nice, schedule = nicify(heuristic_decomposition(g, "min-fill"), g)
            for k in range(g.m + 1):
                res.checked += 1
                yes, deleted = copath_set.decide_set(g, k, nice, schedule)
                kept = set(range(g.m)) - deleted
                if yes != (g.m - opt_set <= k) or not verify_set_solution(g, kept):
                    res.failures.append(f"seed={s} set k={k}: verdict {yes}")
            for k in range(g.n + 1):
                res.checked += 1
                yes, deleted = copath_packing.decide_packing(g, k, nice, schedule)
                kept = set(range(g.n)) - deleted
                if yes != (g.n - opt_pack <= k) or not verify_packing_solution(g, kept):
                    res.failures.append(f"seed={s} packing k={k}: verdict {yes}")
    return res


def random_family(rng: random.Random, k: int, p: int, size: int) -> list[WeightedSet]:
    """Random independent ``p``-edge sets (forests) of ``K_k`` with weights."""
    edges = complete_graph_edges(k)
    out = []
    while len(out) < size:
        cols = tuple(sorted(rng.sample(range(len(edges)), p)))
        parent = list(range(k))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        forest = True
        for c in cols:
            a, b = find(edges[c][0]), find(edges[c][1])
            if a == b:
                forest = False
                break
            parent[a] = b
        if forest:
            out.append(WeightedSet(cols, rng.randint(0, 20), len(out)))
    return out


def representative_property(count: int = 500, seed: int = 0, max_k: int = 5) -> SuiteResult:
    res = SuiteResult("representative-family")
    worst = 0.0
    with _timed(res):
        for i in range(count):
            rng = random.Random(seed + i)
            k = 2 + i % (max_k - 1)
            p = rng.randint(0, k - 1)
            q = k - 1 - p
            ground = complete_graph_representation(k)
            family = random_family(rng, k, p, rng.randint(1, 40))
            kept_ids = max_q_representative(ground, family, p, q)
            kept = [family[j] for j in kept_ids]
            res.checked += 1
            bound = comb(p + q, p)
            worst = max(worst, len(kept) / bound)
            if len(kept) > bound:
                res.failures.append(f"seed={seed + i}: size {len(kept)} > C({p + q},{p})")
            elif not check_representative(ground, family, kept, q):
                res.failures.append(f"seed={seed + i}: k={k} p={p} q={q} not representative")
    res.notes["max_fill"] = f"{worst:.2f}"
    return res


def nicification(count: int = 50, seed: int = 0, max_n: int = 14) -> SuiteResult:
    res = SuiteResult("nicification")
    worst = 0.0
    with _timed(res):
        for i in range(count):
            s = seed + i
            rng = random.Random(s)
            structure = STRUCTURES[i % len(STRUCTURES)]
            g = random_instance(s, rng.randint(4, max_n), structure, p=0.4)
            td = heuristic_decomposition(g, ("min-degree", "min-fill")[i % 2], seed=s)
            res.checked += 1
            problems = _nicify_problems(g, td)
            if problems["ratio"] is not None:
                worst = max(worst, problems["ratio"])
            for msg in problems["errors"]:
                res.failures.append(f"seed={s}: {msg}")
    res.notes["max_nodes_ratio"] = f"{worst:.2f}"
    return res


def _nicify_problems(g: Graph, td) -> dict:
    errors = []
    nice, schedule = nicify(td, g)
    if nice.width != td.width:
        errors.append(f"width {td.width} -> {nice.width}")
    if not validate(g, nice.as_tree_decomposition()).ok:
        errors.append("nicified decomposition fails validation")
    errors += nice.structure_problems()
    bound = 16 * (td.width + 1) * g.n
    if len(nice.nodes) > bound:
        errors.append(f"{len(nice.nodes)} nodes > {bound}")
    seen = [0] * g.m
    for node, ids in schedule.items():
        if nice.nodes[node].kind != FORGET:
            errors.append(f"edges scheduled at non-forget node {node}")
        for e in ids:
            seen[e] += 1
    if any(c != 1 for c in seen):
        errors.append("edge schedule does not cover every edge exactly once")
    ratio = len(nice.nodes) / ((td.width + 1) * g.n) if g.n else None
    return {"errors": errors, "ratio": ratio}


def size_invariant(rows: int = 4, cols: int = 4) -> SuiteResult:
    res = SuiteResult("size-invariant")
    with _timed(res):
        g = grid(rows, cols)
        td = heuristic_decomposition(g, "min-fill")
        res.notes["width"] = td.width
        if td.width > 4:
            res.failures.append(f"heuristic width {td.width} > 4")
        nice, schedule = nicify(td, g)
        for problem, (solve, _, _) in SOLVERS.items():
            sol = solve(g, nice, schedule)
            res.checked += sol.stats.nodes
            if sol.stats.size_violations:
                res.failures.append(f"{problem}: {sol.stats.size_violations} oversized families")
    return res


def path_mode(count: int = 200, max_n: int = 8, seed: int = 0) -> SuiteResult:
    res = SuiteResult("path-mode")
    with _timed(res):
        for s, g in corpus(count, max_n, seed):
            tree = nicify(heuristic_decomposition(g, "min-fill"), g)
            chain = nicify(heuristic_path_decomposition(g), g)
            if not is_path_shape(chain[0]):
                res.failures.append(f"seed={s}: path decomposition nicified with a join")
                continue
            for problem, (solve, _, _) in SOLVERS.items():
                res.checked += 1
                a = solve(g, *tree).opt_weight
                b = solve(g, *chain).opt_weight
                if a != b:
                    res.failures.append(f"seed={s} {problem}: tree={a} path={b}")
    return res


def scaling_graph(width: int, n: int = 12) -> Graph:
    """A cycle with chords whose min-fill decomposition has exactly ``width``."""
    for chords in range(0, 3 * n):
        for s in range(20):
            g = cycle_with_chords(n, chords, s)
            if heuristic_decomposition(g, "min-fill").width == width:
                return g
    raise ValueError(f"no chorded {n}-cycle of width {width} found")


def scaling_witness(widths=(2, 3, 4, 5)) -> SuiteResult:
    res = SuiteResult("scaling-witness")
    with _timed(res):
        for w in widths:
            g = scaling_graph(w)
            nice, schedule = nicify(heuristic_decomposition(g, "min-fill"), g)
            for problem, (solve, _, _) in SOLVERS.items():
                res.checked += 1
                st = solve(g, nice, schedule).stats
                res.notes[f"{problem}_w{w}"] = f"{st.max_family}/{st.max_node_entries}"
                if st.max_family > 2 ** (w + 1):
                    res.failures.append(f"{problem} w={w}: family {st.max_family} > {2 ** (w + 1)}")
                cap = 4 ** (w + 1) * (w + 1) ** 2
                if st.max_node_entries > cap:
                    res.failures.append(f"{problem} w={w}: node entries {st.max_node_entries} > {cap}")
    return res


def run_all(seeds: int = 200, max_n: int = 8, shrinker=shrink, quick: bool = False):
    """Suites driven by ``selfcheck``, yielded as they finish."""
    yield oracle_equivalence("set", seeds, max_n, shrinker=shrinker)
    yield oracle_equivalence("packing", seeds, max_n, shrinker=shrinker)
    yield representative_property(100 if quick else 500)
    yield nicification(20 if quick else 50)
    if not quick:
        yield size_invariant()

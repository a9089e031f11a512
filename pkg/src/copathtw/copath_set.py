"""Weighted Co-Path Set: keep a maximum-weight edge set forming a linear forest.

States label every bag vertex with its degree (0, 1 or 2) in the partial
solution. Edges enter the partial solution only at forget nodes, so
introduce nodes never change an entry and join children are edge-disjoint.
"""

from __future__ import annotations

from itertools import product

from copathtw.decomposition import NiceTreeDecomposition, decompose, edge_schedule
from copathtw.dp_common import (
    Entry,
    Shrinker,
    Solution,
    StateTable,
    add_path_edge,
    forget_in_matching,
    iter_degree_subsets,
    merge_matchings,
    reconstruct,
    shrink,
    shrink_table,
    sweep,
)
from copathtw.graph import Graph, verify_set_solution, weight_of


def leaf_case(node: int = -1) -> StateTable:
    return {(): [Entry((), 0, node=node, tag="leaf")]}


def introduce_case(child: StateTable, child_bag, v: int) -> StateTable:
    """``v`` has no edges yet, so only degree 0 is possible for it."""
    pos = sum(1 for x in child_bag if x < v)
    return {state[:pos] + (0,) + state[pos:]: list(entries)
            for state, entries in child.items()}


def forget_case(g: Graph, child: StateTable, child_bag, v: int, incident,
                node: int = -1, shrinker: Shrinker = shrink) -> StateTable:
    """Forget ``v`` after choosing at most two of its ``incident`` edges.

    ``incident`` holds ids of edges from ``v`` to the remaining bag.
    """
    pos = child_bag.index(v)
    bag = child_bag[:pos] + child_bag[pos + 1:]
    index = {x: i for i, x in enumerate(child_bag)}
    others = [(e, g.edges[e][0] + g.edges[e][1] - v) for e in incident]
    raw: dict[tuple, list[Entry]] = {}
    for state, entries in child.items():
        for chosen in iter_degree_subsets(others):
            if state[pos] + len(chosen) > 2:
                continue
            if any(state[index[w]] == 2 for _, w in chosen):
                continue
            labels = list(state)
            labels[pos] += len(chosen)
            for _, w in chosen:
                labels[index[w]] += 1
            target = tuple(labels[:pos] + labels[pos + 1:])
            gain = sum(g.edge_weights[e] for e, _ in chosen)
            delta = tuple(e for e, _ in chosen)
            bucket = raw.setdefault(target, [])
            for entry in entries:
                matching = entry.matching
                deg = dict(zip(child_bag, state))
                for _, w in chosen:
                    matching = add_path_edge(matching, deg, v, w)
                    if matching is None:
                        break
                    deg[v] += 1
                    deg[w] += 1
                if matching is None:
                    continue
                bucket.append(Entry(forget_in_matching(matching, v), entry.weight + gain,
                                    (entry,), delta, node, "forget"))
    return shrink_table(bag, raw, shrinker)


def join_case(left: StateTable, right: StateTable, bag, node: int = -1,
              shrinker: Shrinker = shrink) -> StateTable:
    raw: dict[tuple, list[Entry]] = {}
    for sl, lentries in left.items():
        for sr in product(*(range(3 - a) for a in sl)):
            rentries = right.get(sr)
            if not rentries:
                continue
            target = tuple(a + b for a, b in zip(sl, sr))
            deg = dict(zip(bag, target))
            bucket = raw.setdefault(target, [])
            for el in lentries:
                for er in rentries:
                    matching = merge_matchings(el.matching, er.matching, deg)
                    if matching is not None:
                        bucket.append(Entry(matching, el.weight + er.weight,
                                            (el, er), (), node, "join"))
    return shrink_table(bag, raw, shrinker)


def solve_set(g: Graph, nice: NiceTreeDecomposition | None = None,
              schedule: dict[int, tuple[int, ...]] | None = None, *,
              shrinker: Shrinker = shrink, keep_tables: bool = False) -> Solution:
    """Maximum-weight edge set whose subgraph is a linear forest.

    Without a decomposition a min-fill heuristic one is built.
    """
    if nice is None:
        nice, schedule = decompose(g)
    elif schedule is None:
        schedule = edge_schedule(g, nice)

    def forget(i, x, kids):
        child_bag = nice.nodes[x.children[0]].bag
        return forget_case(g, kids[0], child_bag, x.vertex, schedule.get(i, ()), i, shrinker)

    root, stats, tables = sweep(
        nice,
        leaf=lambda i, x, kids: leaf_case(i),
        introduce=lambda i, x, kids: introduce_case(kids[0], nice.nodes[x.children[0]].bag, x.vertex),
        forget=forget,
        join=lambda i, x, kids: join_case(kids[0], kids[1], x.bag, i, shrinker),
        keep_tables=keep_tables,
    )
    entries = root.get((), [])
    if not entries:
        raise RuntimeError("no partial solution survived to the root")
    best = max(entries, key=lambda e: e.weight)
    return Solution(best.weight, frozenset(reconstruct(best)), nice.width, stats, tables)


def decide_set(g: Graph, k: int, nice=None, schedule=None) -> tuple[bool, frozenset[int]]:
    """Can at most ``k`` edge deletions leave a linear forest? Unit weights."""
    unit = g.unit_weighted()
    sol = solve_set(unit, nice, schedule)
    deleted = frozenset(range(g.m)) - sol.kept
    assert len(deleted) == g.m - sol.opt_weight
    return len(deleted) <= k, deleted


def verified(g: Graph, sol: Solution) -> bool:
    return (verify_set_solution(g, sol.kept)
            and weight_of(g, "edges", sol.kept) == sol.opt_weight)

"""Weighted Co-Path Packing: keep a maximum-weight vertex set inducing a linear forest.

Bag labels are ``DEL`` for deleted vertices and 0/1/2 for the degree of a
kept vertex in the partial solution. A kept vertex pays its weight when it
is introduced; since both join children contain the bag, join subtracts the
kept bag vertices once.
"""

from __future__ import annotations

from itertools import product

from copathtw.decomposition import NiceTreeDecomposition, decompose, edge_schedule
from copathtw.dp_common import (
    DEL,
    R0,
    Entry,
    Shrinker,
    Solution,
    StateTable,
    add_path_edge,
    forget_in_matching,
    merge_matchings,
    reconstruct,
    shrink,
    shrink_table,
    sweep,
)
from copathtw.graph import Graph, verify_packing_solution, weight_of


def leaf_case_p(node: int = -1) -> StateTable:
    return {(): [Entry((), 0, node=node, tag="leaf")]}


def introduce_case_p(child: StateTable, child_bag, v: int, w_v: int,
                     node: int = -1) -> StateTable:
    pos = sum(1 for x in child_bag if x < v)
    table = {}
    for state, entries in child.items():
        table[state[:pos] + (DEL,) + state[pos:]] = list(entries)
        table[state[:pos] + (R0,) + state[pos:]] = [
            Entry(e.matching, e.weight + w_v, (e,), (v,), node, "introduce")
            for e in entries
        ]
    return table


def forget_case_p(g: Graph, child: StateTable, child_bag, v: int, incident,
                  node: int = -1, shrinker: Shrinker = shrink) -> StateTable:
    """Forget ``v``; if kept, every edge to a kept bag neighbour enters now."""
    pos = child_bag.index(v)
    bag = child_bag[:pos] + child_bag[pos + 1:]
    index = {x: i for i, x in enumerate(child_bag)}
    nbrs = [g.edges[e][0] + g.edges[e][1] - v for e in incident]
    raw: dict[tuple, list[Entry]] = {}
    for state, entries in child.items():
        if state[pos] == DEL:
            target = state[:pos] + state[pos + 1:]
            raw.setdefault(target, []).extend(entries)
            continue
        kept_nbrs = [w for w in nbrs if state[index[w]] != DEL]
        if state[pos] + len(kept_nbrs) > 2 or any(state[index[w]] == 2 for w in kept_nbrs):
            continue
        labels = list(state)
        labels[pos] += len(kept_nbrs)
        for w in kept_nbrs:
            labels[index[w]] += 1
        target = tuple(labels[:pos] + labels[pos + 1:])
        bucket = raw.setdefault(target, [])
        for entry in entries:
            matching = entry.matching
            deg = dict(zip(child_bag, state))
            for w in kept_nbrs:
                matching = add_path_edge(matching, deg, v, w)
                if matching is None:
                    break
                deg[v] += 1
                deg[w] += 1
            if matching is None:
                continue
            bucket.append(Entry(forget_in_matching(matching, v), entry.weight,
                                (entry,), (), node, "forget"))
    return shrink_table(bag, raw, shrinker)


def join_case_p(g: Graph, left: StateTable, right: StateTable, bag,
                node: int = -1, shrinker: Shrinker = shrink) -> StateTable:
    raw: dict[tuple, list[Entry]] = {}
    for sl, lentries in left.items():
        choices = [(DEL,) if a == DEL else range(3 - a) for a in sl]
        overlap = sum(g.vertex_weights[x] for x, a in zip(bag, sl) if a != DEL)
        for sr in product(*choices):
            rentries = right.get(sr)
            if not rentries:
                continue
            target = tuple(DEL if a == DEL else a + b for a, b in zip(sl, sr))
            deg = {x: t for x, t in zip(bag, target) if t != DEL}
            bucket = raw.setdefault(target, [])
            for el in lentries:
                for er in rentries:
                    matching = merge_matchings(el.matching, er.matching, deg)
                    if matching is not None:
                        bucket.append(Entry(matching, el.weight + er.weight - overlap,
                                            (el, er), (), node, "join"))
    return shrink_table(bag, raw, shrinker)


def solve_packing(g: Graph, nice: NiceTreeDecomposition | None = None,
                  schedule: dict[int, tuple[int, ...]] | None = None, *,
                  shrinker: Shrinker = shrink, keep_tables: bool = False) -> Solution:
    """Maximum-weight vertex set inducing a linear forest."""
    if nice is None:
        nice, schedule = decompose(g)
    elif schedule is None:
        schedule = edge_schedule(g, nice)

    def child_bag(x):
        return nice.nodes[x.children[0]].bag

    root, stats, tables = sweep(
        nice,
        leaf=lambda i, x, kids: leaf_case_p(i),
        introduce=lambda i, x, kids: introduce_case_p(
            kids[0], child_bag(x), x.vertex, g.vertex_weights[x.vertex], i),
        forget=lambda i, x, kids: forget_case_p(
            g, kids[0], child_bag(x), x.vertex, schedule.get(i, ()), i, shrinker),
        join=lambda i, x, kids: join_case_p(g, kids[0], kids[1], x.bag, i, shrinker),
        keep_tables=keep_tables,
    )
    entries = root.get((), [])
    if not entries:
        raise RuntimeError("no partial solution survived to the root")
    best = max(entries, key=lambda e: e.weight)
    return Solution(best.weight, frozenset(reconstruct(best)), nice.width, stats, tables)


def decide_packing(g: Graph, k: int, nice=None, schedule=None) -> tuple[bool, frozenset[int]]:
    """Can at most ``k`` vertex deletions leave a linear forest? Unit weights."""
    unit = g.unit_weighted()
    sol = solve_packing(unit, nice, schedule)
    deleted = frozenset(range(g.n)) - sol.kept
    assert len(deleted) == g.n - sol.opt_weight
    return len(deleted) <= k, deleted


def verified(g: Graph, sol: Solution) -> bool:
    return (verify_packing_solution(g, sol.kept)
            and weight_of(g, "vertices", sol.kept) == sol.opt_weight)

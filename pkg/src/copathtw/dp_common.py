"""Machinery shared by both co-path dynamic programs.

A table maps a *state* (one degree label per bag vertex, aligned with the
sorted bag) to a list of :class:`Entry`. An entry summarises one partial
solution by its *matching*: the pairs of in-bag degree-1 vertices that are
the two ends of the same path. A degree-1 vertex missing from every pair has
its other end outside the bag; degree-0 vertices are never paired.

Shrinking views each matching as an edge set of the complete graph on the
degree-0/1 bag vertices and keeps, per pair count ``i``, a max
``(k-1-i)``-representative subfamily in that graphic matroid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from copathtw.matroid import (
    WeightedSet,
    complete_graph_representation,
    edge_column_index,
    max_q_representative,
)

R0, R1, R2, DEL = 0, 1, 2, 3

Matching = tuple[tuple[int, int], ...]  # sorted pairs (u, v), u < v
State = tuple[int, ...]


class Entry:
    """One stored partial solution.

    ``parents`` and ``delta`` form the back-reference: the partial solution
    is the union of ``delta`` over this entry and all its ancestors.
    """

    __slots__ = ("matching", "weight", "parents", "delta", "node", "tag")

    def __init__(self, matching: Matching, weight: int, parents=(), delta=(),
                 node: int = -1, tag: str = ""):
        self.matching = matching
        self.weight = weight
        self.parents = parents
        self.delta = delta
        self.node = node
        self.tag = tag

    def __repr__(self):
        return f"Entry({self.matching}, w={self.weight}, {self.tag}@{self.node})"


StateTable = dict[State, list[Entry]]
Shrinker = Callable[[Sequence[int], list[Entry]], list[Entry]]


def reconstruct(entry: Entry) -> set[int]:
    """Union of all deltas reachable through back-references."""
    out: set[int] = set()
    seen: set[int] = set()
    stack = [entry]
    while stack:
        e = stack.pop()
        if id(e) in seen:
            continue
        seen.add(id(e))
        out.update(e.delta)
        stack.extend(e.parents)
    return out


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def mates(matching: Matching) -> dict[int, int]:
    out = {}
    for u, v in matching:
        out[u] = v
        out[v] = u
    return out


def add_path_edge(matching: Matching, degrees: Mapping[int, int],
                  u: int, v: int) -> Matching | None:
    """Matching after adding edge ``uv``, or None if it closes a cycle.

    ``degrees`` are the degrees *before* the edge; the caller bumps both
    endpoints afterwards and must keep them at most 2.
    """
    if u == v:
        raise ValueError("loop edge")
    mate = mates(matching)
    if mate.get(u) == v:
        return None
    # far end of each endpoint's path; None when it lies outside the bag
    end_u = u if degrees[u] == 0 else mate.get(u)
    end_v = v if degrees[v] == 0 else mate.get(v)
    drop = {u, v}
    pairs = [p for p in matching if p[0] not in drop and p[1] not in drop]
    if end_u is not None and end_v is not None:
        pairs.append(_pair(end_u, end_v))
    return tuple(sorted(pairs))


def forget_in_matching(matching: Matching, v: int) -> Matching:
    return tuple(p for p in matching if v not in p)


def merge_matchings(f1: Matching, f2: Matching,
                    degrees: Mapping[int, int]) -> Matching | None:
    """Combine the matchings of two edge-disjoint partial solutions.

    ``degrees`` gives each bag vertex's degree in the union. Returns None if
    the union contains a cycle, including two paths sharing both ends.
    """
    for u, v in f1 + f2:
        if u not in degrees or v not in degrees:
            raise ValueError(f"pair ({u}, {v}) is outside the bag")
    parent: dict[int, int] = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    pieces: dict[int, int] = {}
    for u, v in f1 + f2:
        ru, rv = find(u), find(v)
        if ru == rv:
            return None
        parent[ru] = rv
        pieces[u] = pieces.get(u, 0) + 1
        pieces[v] = pieces.get(v, 0) + 1
    # each component is a path of pieces; its two ends are the vertices
    # touched by one piece. Such an end is a real path end only if its
    # total degree is 1, otherwise the path continues outside the bag.
    ends: dict[int, list[int | None]] = {}
    for x, c in pieces.items():
        if c == 1:
            ends.setdefault(find(x), []).append(x if degrees[x] == 1 else None)
    out = []
    for a, b in ends.values():
        if a is not None and b is not None:
            out.append(_pair(a, b))
    return tuple(sorted(out))


def shrink(ground: Sequence[int], entries: list[Entry], *,
           drop_empty_bucket: bool = False) -> list[Entry]:
    """Keep a representative subset of ``entries`` for ground ``R0 ∪ R1``.

    ``ground`` is sorted. Output has at most ``2 ** len(ground)`` entries.
    ``drop_empty_bucket`` deliberately breaks the routine (mutation testing).
    """
    if not entries:
        return []
    k = len(ground)
    best: dict[Matching, Entry] = {}
    for e in entries:
        cur = best.get(e.matching)
        if cur is None or e.weight > cur.weight:
            best[e.matching] = e
    if k <= 1:
        top = max(best.values(), key=lambda e: e.weight)
        return [] if drop_empty_bucket and not top.matching else [top]

    pos = {v: i for i, v in enumerate(ground)}
    col = edge_column_index(k)
    matrix = complete_graph_representation(k)
    buckets: dict[int, list[Entry]] = {}
    for e in best.values():
        buckets.setdefault(len(e.matching), []).append(e)
    out = []
    for i in sorted(buckets):
        if i == 0 and drop_empty_bucket:
            continue
        members = buckets[i]
        if len(members) == 1:
            out.extend(members)
            continue
        family = [
            WeightedSet(tuple(sorted(col[_pair(pos[a], pos[b])] for a, b in e.matching)),
                        e.weight, j)
            for j, e in enumerate(members)
        ]
        kept = max_q_representative(matrix, family, i, k - 1 - i)
        out.extend(members[j] for j in sorted(kept))
    return out


def ground_of(bag: Sequence[int], state: State) -> list[int]:
    return [v for v, lab in zip(bag, state) if lab in (R0, R1)]


@dataclass
class SolveStats:
    """Per-node table measurements collected during a solve."""

    nodes: int = 0
    max_family: int = 0
    max_node_entries: int = 0
    size_violations: int = 0
    per_node: list[tuple[str, int, int, int]] = field(default_factory=list)

    def record(self, node: int, kind: str, bag: Sequence[int], table: StateTable):
        total = 0
        largest = 0
        for state, entries in table.items():
            n = len(entries)
            total += n
            largest = max(largest, n)
            if n > 2 ** sum(1 for lab in state if lab in (R0, R1)):
                self.size_violations += 1
        self.nodes += 1
        self.max_family = max(self.max_family, largest)
        self.max_node_entries = max(self.max_node_entries, total)
        self.per_node.append((kind, len(bag), len(table), total))


@dataclass
class Solution:
    opt_weight: int
    kept: frozenset[int]
    width: int
    stats: SolveStats
    tables: dict[int, StateTable] | None = None


def shrink_table(bag: Sequence[int], raw: dict[State, list[Entry]],
                 shrinker: Shrinker) -> StateTable:
    table = {}
    for state in sorted(raw):
        kept = shrinker(ground_of(bag, state), raw[state])
        if kept:
            table[state] = kept
    return table


def iter_degree_subsets(items: Sequence, limit: int = 2) -> Iterable[tuple]:
    """Subsets of ``items`` with at most ``limit`` elements, in index order."""
    yield ()
    n = len(items)
    for i in range(n):
        yield (items[i],)
    if limit >= 2:
        for i in range(n):
            for j in range(i + 1, n):
                yield (items[i], items[j])


def sweep(nice, leaf, introduce, forget, join, *, keep_tables: bool = False):
    """Run the node handlers bottom-up over a nice decomposition.

    Handlers receive ``(node_id, node, child_tables)`` and return a table.
    Returns ``(root_table, stats, tables_or_None)``.
    """
    from copathtw.decomposition import FORGET, INTRODUCE, JOIN, LEAF

    problems = nice.structure_problems()
    if problems:
        raise ValueError("not a nice tree decomposition: " + problems[0])
    handlers = {LEAF: leaf, INTRODUCE: introduce, FORGET: forget, JOIN: join}
    stats = SolveStats()
    live: dict[int, StateTable] = {}
    kept = {} if keep_tables else None
    for i, x in enumerate(nice.nodes):
        table = handlers[x.kind](i, x, [live.pop(c) for c in x.children])
        stats.record(i, x.kind, x.bag, table)
        live[i] = table
        if keep_tables:
            kept[i] = table
    return live[nice.root], stats, kept

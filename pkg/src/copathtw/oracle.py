"""Brute-force references for the DP and the representative-family engine.

Nothing here shares code with the solvers: feasibility is tracked with a
rollback union-find rather than path-end matchings, and matroid
independence is decided by a forest test on the complete graph.
"""

from __future__ import annotations

import math
import random
from itertools import combinations
from typing import Iterator, Sequence

import networkx as nx

from copathtw.graph import Graph
from copathtw.matroid import BinaryMatrix, WeightedSet

STRUCTURES = ("gnp", "grid", "cycle", "tree-plus-edges")


class _RollbackDSU:
    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n
        self.history = []

    def find(self, x):
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        self.history.append(b)
        return True

    def undo(self):
        b = self.history.pop()
        a = self.parent[b]
        self.size[a] -= self.size[b]
        self.parent[b] = b


def brute_set(g: Graph) -> tuple[int, frozenset[int]]:
    """Exact Co-Path Set optimum by pruned search over edge subsets."""
    if g.m > 24:
        raise ValueError("brute_set is limited to m <= 24")
    deg = [0] * g.n
    dsu = _RollbackDSU(g.n)
    suffix = [0] * (g.m + 1)
    for i in range(g.m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + g.edge_weights[i]
    best = [-1, frozenset()]
    chosen: list[int] = []

    def go(i, weight):
        if weight + suffix[i] <= best[0]:
            return
        if i == g.m:
            best[0], best[1] = weight, frozenset(chosen)
            return
        u, v = g.edges[i]
        if deg[u] < 2 and deg[v] < 2 and dsu.union(u, v):
            deg[u] += 1
            deg[v] += 1
            chosen.append(i)
            go(i + 1, weight + g.edge_weights[i])
            chosen.pop()
            deg[u] -= 1
            deg[v] -= 1
            dsu.undo()
        go(i + 1, weight)

    go(0, 0)
    return best[0], best[1]


def brute_packing(g: Graph) -> tuple[int, frozenset[int]]:
    """Exact Co-Path Packing optimum by search over vertex subsets.

    Induced linear forests are closed under taking subsets, so a branch is
    cut as soon as the chosen set stops inducing one.
    """
    if g.n > 20:
        raise ValueError("brute_packing is limited to n <= 20")
    inside = [False] * g.n
    deg = [0] * g.n
    dsu = _RollbackDSU(g.n)
    suffix = [0] * (g.n + 1)
    for v in range(g.n - 1, -1, -1):
        suffix[v] = suffix[v + 1] + g.vertex_weights[v]
    best = [-1, frozenset()]

    def go(v, weight):
        if weight + suffix[v] <= best[0]:
            return
        if v == g.n:
            best[0], best[1] = weight, frozenset(i for i in range(g.n) if inside[i])
            return
        back = [u for u in g.adjacency[v] if inside[u]]
        ok = len(back) <= 2 and all(deg[u] < 2 for u in back)
        merged = 0
        if ok:
            for u in back:
                if not dsu.union(u, v):
                    ok = False
                    break
                merged += 1
        if ok:
            inside[v] = True
            deg[v] = len(back)
            for u in back:
                deg[u] += 1
            go(v + 1, weight + g.vertex_weights[v])
            for u in back:
                deg[u] -= 1
            deg[v] = 0
            inside[v] = False
        for _ in range(merged):
            dsu.undo()
        go(v + 1, weight)

    go(0, 0)
    return best[0], best[1]


# --- representative families -------------------------------------------------

def _column_edges(ground: BinaryMatrix) -> list[tuple[int, ...]]:
    """Read each column back as the set of rows it touches (at most two)."""
    return [tuple(r for r in range(ground.n_rows) if ground[r, c]) for c in range(ground.n_cols)]


def _is_forest(cols: Sequence[int], col_edges, n_rows: int) -> bool:
    # the dropped row acts as one extra vertex, index n_rows
    dsu = _RollbackDSU(n_rows + 1)
    for c in cols:
        ends = col_edges[c]
        if len(ends) == 0:
            return False
        u, v = (ends[0], ends[1]) if len(ends) == 2 else (ends[0], n_rows)
        if not dsu.union(u, v):
            return False
    return True


def check_representative(ground: BinaryMatrix, family: Sequence[WeightedSet],
                         kept: Sequence[WeightedSet], q: int) -> bool:
    """Exhaustively test the max ``q``-representative property.

    ``ground`` must be a graphic representation whose columns touch at most
    two rows (as produced for complete graphs).
    """
    if ground.n_cols > 15:
        raise ValueError("too many columns to enumerate")
    col_edges = _column_edges(ground)
    if any(len(e) > 2 for e in col_edges):
        raise ValueError("ground is not a graphic incidence representation")

    def indep(cols):
        return _is_forest(cols, col_edges, ground.n_rows)

    for size in range(q + 1):
        for y in combinations(range(ground.n_cols), size):
            ys = set(y)
            need = -1
            for x in family:
                if ys.isdisjoint(x.columns) and indep(list(x.columns) + list(y)):
                    need = max(need, x.weight)
            if need < 0:
                continue
            if not any(ys.isdisjoint(x.columns) and x.weight >= need
                       and indep(list(x.columns) + list(y)) for x in kept):
                return False
    return True


# --- instances -------------------------------------------------------------

def from_networkx(h: nx.Graph) -> Graph:
    nodes = sorted(h.nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), [(idx[u], idx[v]) for u, v in h.edges])


def grid(rows: int, cols: int) -> Graph:
    return from_networkx(nx.grid_2d_graph(rows, cols))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def star(r: int) -> Graph:
    return Graph.from_edges(r + 1, [(0, i) for i in range(1, r + 1)])


def petersen() -> Graph:
    return from_networkx(nx.petersen_graph())


def cycle_with_chords(n: int, chords: int, seed: int = 0) -> Graph:
    rng = random.Random(seed)
    edges = {(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n)}
    candidates = [e for e in combinations(range(n), 2) if e not in edges]
    edges |= set(rng.sample(candidates, min(chords, len(candidates))))
    return Graph.from_edges(n, sorted(edges))


def random_instance(seed: int, n: int, structure: str = "gnp", p: float = 0.5) -> Graph:
    """Deterministic random graph per ``(seed, n, structure, p)``.

    ``grid`` uses ``isqrt(n)`` rows and ``n // rows`` columns, so it may have
    fewer than ``n`` vertices.
    """
    rng = random.Random(seed)
    if structure == "gnp":
        return from_networkx(nx.gnp_random_graph(n, p, seed=seed))
    if structure == "grid":
        rows = max(1, math.isqrt(n))
        return grid(rows, max(1, n // rows))
    if structure == "cycle":
        perm = list(range(n))
        rng.shuffle(perm)
        return cycle(n).relabel(perm) if n >= 3 else path(n)
    if structure == "tree-plus-edges":
        edges = {(rng.randrange(v), v) for v in range(1, n)}
        extra = [e for e in combinations(range(n), 2) if e not in edges]
        edges |= set(rng.sample(extra, min(len(extra), rng.randint(1, 2))))
        return Graph.from_edges(n, sorted(edges))
    raise ValueError(f"unknown structure {structure!r}")


def random_weights(g: Graph, seed: int, low: int = 0, high: int = 10) -> Graph:
    rng = random.Random(seed)
    return g.with_weights([rng.randint(low, high) for _ in range(g.n)],
                          [rng.randint(low, high) for _ in range(g.m)])


def corpus(count: int = 200, max_n: int = 8, seed: int = 0) -> Iterator[tuple[int, Graph]]:
    """The seeded mixed corpus used by the self-checks.

    Structures rotate through :data:`STRUCTURES`; odd seeds get random
    weights in ``[0, 10]``, even seeds unit weights.
    """
    for s in range(seed, seed + count):
        rng = random.Random(s)
        structure = STRUCTURES[s % len(STRUCTURES)]
        n = rng.randint(3 if structure != "grid" else 4, max(max_n, 3))
        g = random_instance(s, n, structure, p=rng.choice((0.3, 0.5, 0.7)))
        if s % 2:
            g = random_weights(g, s)
        yield s, g

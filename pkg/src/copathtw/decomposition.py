"""Tree decompositions: PACE ``.td`` I/O, validation, heuristics, nicification.

A nice decomposition is stored as a flat node list in post-order (children
before parents) so the DP can sweep it left to right. Every graph edge is
handed to exactly one forget node through :func:`edge_schedule`: the node
forgetting whichever endpoint leaves the bags first. Bag-internal edges are
therefore never part of the subgraph seen below a node until one endpoint is
forgotten.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_degree, treewidth_min_fill_in

from copathtw.graph import FormatError, Graph

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags plus the tree edges between bag indices (0-indexed)."""

    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...] = ()

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbours(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            nb[a].append(b)
            nb[b].append(a)
        return nb


@dataclass(frozen=True)
class Violation:
    condition: str  # "T1", "T2", "T3" or "tree"
    witness: object
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: tuple[int, ...]  # sorted
    vertex: int | None = None
    children: tuple[int, ...] = ()


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Nodes in post-order; the last node is the root."""

    nodes: tuple[NiceNode, ...]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max((len(x.bag) for x in self.nodes), default=0) - 1

    def parents(self) -> list[int | None]:
        par: list[int | None] = [None] * len(self.nodes)
        for i, node in enumerate(self.nodes):
            for c in node.children:
                par[c] = i
        return par

    def as_tree_decomposition(self) -> TreeDecomposition:
        edges = tuple((c, i) for i, node in enumerate(self.nodes) for c in node.children)
        return TreeDecomposition(tuple(frozenset(x.bag) for x in self.nodes), edges)

    def structure_problems(self) -> list[str]:
        """Violations of the leaf/introduce/forget/join shape rules."""
        problems = []
        if not self.nodes:
            return ["empty decomposition"]
        if self.nodes[self.root].bag:
            problems.append("root bag is not empty")
        seen_child = set()
        for i, x in enumerate(self.nodes):
            if any(c >= i for c in x.children):
                problems.append(f"node {i}: not in post-order")
                continue
            if seen_child & set(x.children):
                problems.append(f"node {i}: child shared with another node")
            seen_child.update(x.children)
            kids = [self.nodes[c].bag for c in x.children]
            if x.kind == LEAF:
                ok = not kids and not x.bag
            elif x.kind == INTRODUCE:
                ok = (len(kids) == 1 and x.vertex not in kids[0]
                      and set(x.bag) == set(kids[0]) | {x.vertex})
            elif x.kind == FORGET:
                ok = (len(kids) == 1 and x.vertex in kids[0]
                      and set(x.bag) == set(kids[0]) - {x.vertex})
            elif x.kind == JOIN:
                ok = len(kids) == 2 and kids[0] == x.bag and kids[1] == x.bag
            else:
                ok = False
            if not ok:
                problems.append(f"node {i}: malformed {x.kind} node")
        if len(seen_child) != len(self.nodes) - 1:
            problems.append("nodes do not form a single rooted tree")
        return problems


# --- .td format ------------------------------------------------------------

def parse_td(text: str) -> TreeDecomposition:
    """Parse PACE ``.td`` text. Vertex and bag ids become 0-indexed.

    Only syntax is checked here; use :func:`validate` against a graph.
    """
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        tok = line.split()
        if not tok or tok[0] in ("c", "#") or tok[0].startswith("#"):
            continue
        if tok[0] == "s":
            if header is not None:
                raise FormatError("duplicate 's td' header", lineno)
            if len(tok) != 5 or tok[1] != "td":
                raise FormatError("header must be 's td <bags> <width+1> <n>'", lineno)
            header = _ints(tok[2:], lineno)
            continue
        if header is None:
            raise FormatError("missing 's td' header before content", lineno)
        if tok[0] == "b":
            vals = _ints(tok[1:], lineno)
            if not vals:
                raise FormatError("bag line without id", lineno)
            bid, verts = vals[0], vals[1:]
            if not 1 <= bid <= header[0]:
                raise FormatError(f"bag id {bid} out of range 1..{header[0]}", lineno)
            if bid - 1 in bags:
                raise FormatError(f"duplicate bag {bid}", lineno)
            if any(not 1 <= v <= header[2] for v in verts):
                raise FormatError(f"vertex id out of range 1..{header[2]}", lineno)
            bags[bid - 1] = frozenset(v - 1 for v in verts)
        else:
            vals = _ints(tok, lineno)
            if len(vals) != 2:
                raise FormatError("tree edge line must have two bag ids", lineno)
            a, b = vals
            if not (1 <= a <= header[0] and 1 <= b <= header[0]):
                raise FormatError("tree edge references unknown bag", lineno)
            edges.append((a - 1, b - 1))
    if header is None:
        raise FormatError("missing 's td' header")
    nbags = header[0]
    missing = [i + 1 for i in range(nbags) if i not in bags]
    if missing:
        raise FormatError(f"bags declared but not listed: {missing[:5]}")
    return TreeDecomposition(tuple(bags[i] for i in range(nbags)), tuple(edges))


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def write_td(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, bag in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1), *(str(v + 1) for v in sorted(bag))]))
    lines += [f"{a + 1} {b + 1}" for a, b in td.tree_edges]
    return "\n".join(lines) + "\n"


# --- validation ------------------------------------------------------------

def validate(g: Graph, td: TreeDecomposition) -> ValidationReport:
    """Check tree shape and conditions T1-T3, collecting a witness for each failure."""
    report = ValidationReport()
    nb = len(td.bags)
    if nb == 0:
        report.violations.append(Violation("tree", None, "no bags"))
        return report
    if len(td.tree_edges) != nb - 1 or not _connected(nb, td.neighbours()):
        report.violations.append(
            Violation("tree", len(td.tree_edges), "bag graph is not a tree"))

    covered = set().union(*td.bags)
    for v in range(g.n):
        if v not in covered:
            report.violations.append(Violation("T1", v, f"vertex {v} is in no bag"))
    for v in sorted(covered - set(range(g.n))):
        report.violations.append(Violation("T1", v, f"bag vertex {v} not in graph"))

    holders: dict[int, list[int]] = {}
    for i, bag in enumerate(td.bags):
        for v in bag:
            holders.setdefault(v, []).append(i)
    for u, v in g.edges:
        hu = holders.get(u, ())
        if not any(v in td.bags[i] for i in hu):
            report.violations.append(Violation("T2", (u, v), f"edge ({u}, {v}) not covered"))

    nbrs = td.neighbours()
    for v, nodes in sorted(holders.items()):
        if not _connected_subset(set(nodes), nbrs):
            report.violations.append(
                Violation("T3", v, f"bags holding vertex {v} are not connected"))
    return report


def _connected(count: int, nbrs: list[list[int]]) -> bool:
    return _connected_subset(set(range(count)), nbrs)


def _connected_subset(nodes: set[int], nbrs: list[list[int]]) -> bool:
    if not nodes:
        return True
    start = next(iter(nodes))
    seen = {start}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for y in nbrs[x]:
            if y in nodes and y not in seen:
                seen.add(y)
                todo.append(y)
    return seen == nodes


# --- heuristics ------------------------------------------------------------

def heuristic_decomposition(g: Graph, strategy: str = "min-degree",
                            seed: int | None = None) -> TreeDecomposition:
    """Elimination-ordering decomposition (no optimality claim).

    ``seed`` permutes vertex ids before running the heuristic, which changes
    how ties are broken; ``None`` keeps the natural order.
    """
    if strategy == "min-degree":
        heuristic = treewidth_min_degree
    elif strategy == "min-fill":
        heuristic = treewidth_min_fill_in
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if g.n == 0:
        return TreeDecomposition((frozenset(),), ())

    perm = list(range(g.n))
    if seed is not None:
        random.Random(seed).shuffle(perm)
    inv = {p: v for v, p in enumerate(perm)}
    nxg = nx.Graph()
    nxg.add_nodes_from(sorted(perm))
    nxg.add_edges_from((perm[u], perm[v]) for u, v in g.edges)
    _, tree = heuristic(nxg)

    order = sorted(tree.nodes, key=lambda b: sorted(b))
    index = {b: i for i, b in enumerate(order)}
    bags = tuple(frozenset(inv[x] for x in b) for b in order)
    edges = tuple(sorted(tuple(sorted((index[a], index[b]))) for a, b in tree.edges))
    return TreeDecomposition(bags, edges)


def heuristic_path_decomposition(g: Graph) -> TreeDecomposition:
    """Path decomposition from a greedy vertex-separation ordering.

    Vertices are placed one at a time, always picking the one that leaves the
    fewest placed vertices with unplaced neighbours (ties: lowest id). Bag
    ``i`` is the ``i``-th vertex plus the placed vertices still waiting for a
    neighbour.
    """
    if g.n == 0:
        return TreeDecomposition((frozenset(),), ())
    unplaced_nbrs = [g.degree(v) for v in range(g.n)]
    placed = [False] * g.n
    active: set[int] = set()
    bags = []

    def active_after(v):
        out = {a for a in active if unplaced_nbrs[a] - (v in g.adjacency[a]) > 0}
        if unplaced_nbrs[v] > 0:
            out.add(v)
        return out

    for _ in range(g.n):
        v = min((u for u in range(g.n) if not placed[u]),
                key=lambda u: (len(active_after(u)), u))
        bags.append(frozenset(active | {v}))
        nxt = active_after(v)
        placed[v] = True
        for u in g.adjacency[v]:
            unplaced_nbrs[u] -= 1
        active = nxt
    edges = tuple((i, i + 1) for i in range(len(bags) - 1))
    return TreeDecomposition(tuple(bags), edges)


# --- nicification ----------------------------------------------------------

def _compact(td: TreeDecomposition) -> tuple[list[frozenset[int]], list[set[int]]]:
    """Contract tree edges whose one bag is contained in the other."""
    bags = list(td.bags)
    nbrs = [set(x) for x in td.neighbours()]
    alive = set(range(len(bags)))
    changed = True
    while changed:
        changed = False
        for a in sorted(alive):
            for b in sorted(nbrs[a]):
                if bags[a] <= bags[b]:
                    for c in nbrs[a] - {b}:
                        nbrs[c].discard(a)
                        nbrs[c].add(b)
                        nbrs[b].add(c)
                    nbrs[b].discard(a)
                    nbrs[a] = set()
                    alive.discard(a)
                    changed = True
                    break
    keep = sorted(alive)
    renum = {old: i for i, old in enumerate(keep)}
    return ([bags[i] for i in keep],
            [{renum[j] for j in nbrs[i]} for i in keep])


def nicify(td: TreeDecomposition, g: Graph | None = None):
    """Turn a valid decomposition into a nice one of the same width.

    Returns ``(nice, schedule)`` where ``schedule`` maps every forget node to
    the ids of the graph edges entering there (empty when ``g`` is None).

    The root is chosen as a tree leaf so path-shaped inputs stay join-free;
    nodes with several children get left-deep binary joins.
    """
    if g is not None:
        report = validate(g, td)
        if not report.ok:
            raise ValueError("invalid tree decomposition: "
                             + "; ".join(v.message for v in report.violations[:3]))
    bags, nbrs = _compact(td)
    nodes: list[NiceNode] = []

    def add(kind, bag, vertex=None, children=()):
        nodes.append(NiceNode(kind, tuple(sorted(bag)), vertex, tuple(children)))
        return len(nodes) - 1

    root = min(range(len(bags)), key=lambda i: (len(nbrs[i]) > 1, i))
    # iterative post-order over the compacted tree
    order, parent = [], {root: None}
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in sorted(nbrs[x], reverse=True):
            if y not in parent:
                parent[y] = x
                stack.append(y)
    top: dict[int, int] = {}
    for x in reversed(order):
        bag = bags[x]
        kids = sorted(y for y in nbrs[x] if parent.get(y) == x)
        if not kids:
            cur = add(LEAF, ())
            cur_bag = set()
            for v in sorted(bag):
                cur_bag.add(v)
                cur = add(INTRODUCE, cur_bag, v, (cur,))
            top[x] = cur
            continue
        branches = []
        for y in kids:
            cur, cur_bag = top.pop(y), set(bags[y])
            for v in sorted(bags[y] - bag):
                cur_bag.discard(v)
                cur = add(FORGET, cur_bag, v, (cur,))
            for v in sorted(bag - bags[y]):
                cur_bag.add(v)
                cur = add(INTRODUCE, cur_bag, v, (cur,))
            branches.append(cur)
        cur = branches[0]
        for other in branches[1:]:
            cur = add(JOIN, bag, None, (cur, other))
        top[x] = cur
    cur, cur_bag = top[root], set(bags[root])
    for v in sorted(bags[root]):
        cur_bag.discard(v)
        cur = add(FORGET, cur_bag, v, (cur,))
    nice = NiceTreeDecomposition(tuple(nodes))
    schedule = edge_schedule(g, nice) if g is not None else {}
    return nice, schedule


def edge_schedule(g: Graph, nice: NiceTreeDecomposition) -> dict[int, tuple[int, ...]]:
    """Map each forget node to the edges between its vertex and its bag."""
    schedule = {}
    for i, x in enumerate(nice.nodes):
        if x.kind == FORGET:
            bag = set(x.bag)
            schedule[i] = tuple(sorted(g.edge_id(x.vertex, w)
                                       for w in g.adjacency[x.vertex] if w in bag))
    return schedule


def is_path_shape(nice: NiceTreeDecomposition) -> bool:
    return all(x.kind != JOIN for x in nice.nodes)


def introduced_sets(nice: NiceTreeDecomposition) -> list[frozenset[int]]:
    """``V_t`` for every node: all vertices appearing at or below it."""
    out: list[frozenset[int]] = []
    for x in nice.nodes:
        below = set(x.bag)
        for c in x.children:
            below |= out[c]
        out.append(frozenset(below))
    return out


def decompose(g: Graph, td: TreeDecomposition | None = None, *,
              strategy: str = "min-fill", seed: int | None = None,
              path: bool = False):
    """Convenience: pick or build a decomposition and nicify it."""
    if td is None:
        td = heuristic_path_decomposition(g) if path else heuristic_decomposition(g, strategy, seed)
    return nicify(td, g)

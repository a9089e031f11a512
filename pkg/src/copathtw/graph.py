"""Simple undirected weighted graphs, linear-forest checks and PACE ``.gr`` I/O.

A *linear forest* is a graph whose every component is a path: maximum degree
at most two and no cycle. Both co-path problems ask for a maximum-weight
linear forest; the edge version keeps an edge set, the vertex version keeps
an induced vertex set.

For the edge version "induced" adds nothing: a chord between two kept path
vertices is only part of the kept subgraph if it is itself a kept edge, in
which case it already shows up as a cycle or a degree-3 vertex. So checking
max degree and acyclicity of the kept subgraph is exact for both problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from networkx.utils import UnionFind

INT64_MAX = 2**63 - 1


class FormatError(ValueError):
    """Malformed input file. ``lineno`` is 1-based, 0 when not line specific."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph with dense vertex ids ``0..n-1``.

    Edges are stored canonically as ``(u, v)`` with ``u < v``, sorted, so edge
    ids are reproducible. Build instances through :meth:`from_edges`.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)
    vertex_weights: tuple[int, ...] = field(repr=False)
    edge_weights: tuple[int, ...] = field(repr=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        vertex_weights: Sequence[int] | None = None,
        edge_weights: Sequence[int] | None = None,
    ) -> "Graph":
        """Canonicalize and validate.

        ``edge_weights`` follow the order of ``edges`` as given and are
        carried along when edges are sorted.
        """
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        raw = list(edges)
        if edge_weights is not None and len(edge_weights) != len(raw):
            raise ValueError(f"expected {len(raw)} edge weights, got {len(edge_weights)}")
        if vertex_weights is not None and len(vertex_weights) != n:
            raise ValueError(f"expected {n} vertex weights, got {len(vertex_weights)}")

        keyed = {}
        for i, (u, v) in enumerate(raw):
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in keyed:
                raise ValueError(f"parallel edge {key}")
            keyed[key] = 1 if edge_weights is None else _check_weight(edge_weights[i])
        canon = tuple(sorted(keyed))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        vw = (1,) * n if vertex_weights is None else tuple(_check_weight(w) for w in vertex_weights)
        return cls(
            n=n,
            edges=canon,
            adjacency=tuple(tuple(sorted(a)) for a in adj),
            vertex_weights=vw,
            edge_weights=tuple(keyed[e] for e in canon),
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_id(self, u: int, v: int) -> int:
        """Id of edge ``{u, v}``; ``KeyError`` if absent."""
        return self._edge_index[(u, v) if u < v else (v, u)]

    @property
    def _edge_index(self) -> dict[tuple[int, int], int]:
        try:
            return self.__dict__["_eidx"]
        except KeyError:
            idx = {e: i for i, e in enumerate(self.edges)}
            object.__setattr__(self, "_eidx", idx)
            return idx

    def with_weights(
        self,
        vertex_weights: Sequence[int] | None = None,
        edge_weights: Sequence[int] | None = None,
    ) -> "Graph":
        """Copy with replaced weights (``None`` resets to unit weights).

        Here ``edge_weights`` are indexed by edge id.
        """
        return Graph.from_edges(self.n, self.edges, vertex_weights, edge_weights)

    def unit_weighted(self) -> "Graph":
        return self.with_weights()

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Isomorphic copy where old vertex ``v`` becomes ``perm[v]``."""
        vw = [0] * self.n
        for v, w in enumerate(self.vertex_weights):
            vw[perm[v]] = w
        return Graph.from_edges(
            self.n,
            [(perm[u], perm[v]) for u, v in self.edges],
            vw,
            self.edge_weights,
        )


def _check_weight(w) -> int:
    w = int(w)
    if w < 0:
        raise ValueError(f"negative weight {w}")
    if w > INT64_MAX:
        raise OverflowError(f"weight {w} exceeds 64-bit range")
    return w


def is_linear_forest(g: Graph) -> bool:
    if any(len(a) > 2 for a in g.adjacency):
        return False
    return _acyclic(g.n, g.edges)


def _acyclic(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    uf = UnionFind(range(n))
    for u, v in edges:
        if uf[u] == uf[v]:
            return False
        uf.union(u, v)
    return True


def edge_subgraph(g: Graph, kept: Iterable[int]) -> Graph:
    """Graph formed by the kept edges and their endpoints.

    Endpoints are renumbered compactly in increasing original id.
    """
    ids = sorted(set(kept))
    for e in ids:
        if not 0 <= e < g.m:
            raise ValueError(f"edge id {e} out of range (m={g.m})")
    verts = sorted({x for e in ids for x in g.edges[e]})
    new_id = {v: i for i, v in enumerate(verts)}
    return Graph.from_edges(
        len(verts),
        [(new_id[g.edges[e][0]], new_id[g.edges[e][1]]) for e in ids],
        [g.vertex_weights[v] for v in verts],
        [g.edge_weights[e] for e in ids],
    )


def induced_subgraph(g: Graph, kept: Iterable[int]) -> Graph:
    """Subgraph induced by ``kept``, renumbered compactly."""
    verts = sorted(set(kept))
    for v in verts:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex id {v} out of range (n={g.n})")
    new_id = {v: i for i, v in enumerate(verts)}
    ids = [i for i, (u, v) in enumerate(g.edges) if u in new_id and v in new_id]
    return Graph.from_edges(
        len(verts),
        [(new_id[g.edges[e][0]], new_id[g.edges[e][1]]) for e in ids],
        [g.vertex_weights[v] for v in verts],
        [g.edge_weights[e] for e in ids],
    )


def verify_set_solution(g: Graph, kept: Iterable[int]) -> bool:
    return is_linear_forest(edge_subgraph(g, kept))


def verify_packing_solution(g: Graph, kept: Iterable[int]) -> bool:
    return is_linear_forest(induced_subgraph(g, kept))


def weight_of(g: Graph, kind: str, ids: Iterable[int]) -> int:
    """Total weight of a vertex (``kind="vertices"``) or edge set."""
    if kind == "vertices":
        weights = g.vertex_weights
    elif kind == "edges":
        weights = g.edge_weights
    else:
        raise ValueError(f"kind must be 'vertices' or 'edges', not {kind!r}")
    total = sum(weights[i] for i in set(ids))
    if total > INT64_MAX:
        raise OverflowError("weight sum exceeds 64-bit range")
    return total


# --- PACE .gr format -------------------------------------------------------

def parse_gr(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Parse ``.gr`` text into ``(n, edges)`` with 0-indexed, file-ordered edges."""
    n = m = None
    edges: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        tok = line.split()
        if not tok or tok[0] in ("c", "#") or tok[0].startswith("#"):
            continue
        if tok[0] == "p":
            if n is not None:
                raise FormatError("duplicate header", lineno)
            if len(tok) != 4 or tok[1] != "tw":
                raise FormatError("header must be 'p tw <n> <m>'", lineno)
            n, m = _ints(tok[2:], lineno)
            continue
        if n is None:
            raise FormatError("edge line before 'p tw' header", lineno)
        if len(tok) != 2:
            raise FormatError("edge line must have two vertex ids", lineno)
        u, v = _ints(tok, lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"vertex id out of range 1..{n}", lineno)
        if u == v:
            raise FormatError("self-loop", lineno)
        edges.append((u - 1, v - 1))
    if n is None:
        raise FormatError("missing 'p tw' header")
    if len(edges) != m:
        raise FormatError(f"header declares {m} edges, found {len(edges)}")
    if len({(min(e), max(e)) for e in edges}) != len(edges):
        raise FormatError("parallel edges are not supported")
    return n, edges


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        out = [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None
    if any(x < 0 for x in out):
        raise FormatError("negative value", lineno)
    return out


def read_gr(text: str, vertex_weights=None, edge_weights=None) -> Graph:
    """Parse ``.gr`` text into a :class:`Graph`.

    Edge weights are matched to edge lines in file order.
    """
    n, edges = parse_gr(text)
    return Graph.from_edges(n, edges, vertex_weights, edge_weights)


def write_gr(g: Graph) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    lines += [f"{u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_weights(text: str) -> list[int]:
    """One non-negative integer per line; blank and comment lines ignored."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s[0] in "c#":
            continue
        try:
            w = int(s)
        except ValueError:
            raise FormatError(f"expected an integer weight, got {s!r}", lineno) from None
        if w < 0:
            raise FormatError("negative weight", lineno)
        out.append(w)
    return out

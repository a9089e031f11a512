"""GF(2) linear algebra for graphic matroids of complete graphs.

Bit vectors are plain Python ints: bit ``i`` of a row is column ``i``, bit
``i`` of a column vector is row ``i``.

The representative-family routine follows the exterior-algebra approach:
each ``p``-set of columns is mapped to its vector of ``p x p`` minors (the
*wedge vector*), members are scanned in non-increasing weight order, and a
member survives iff its wedge vector is not in the span of those already
kept. Surviving members form a max ``q``-representative family of size at
most ``C(p + q, p)`` when the matrix has rank ``p + q``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Any, Hashable, Iterable, Sequence

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BinaryMatrix:
    n_rows: int
    n_cols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n_rows:
            raise ValueError("row count does not match storage")
        limit = 1 << self.n_cols
        if any(r < 0 or r >= limit for r in self.rows):
            raise ValueError("row has bits beyond n_cols")

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return (self.rows[r] >> c) & 1

    def column(self, c: int) -> int:
        bits = 0
        for r, row in enumerate(self.rows):
            if (row >> c) & 1:
                bits |= 1 << r
        return bits


@dataclass(frozen=True)
class WeightedSet:
    columns: tuple[int, ...]
    weight: int
    payload: Any = None


def complete_graph_edges(k: int) -> tuple[tuple[int, int], ...]:
    """Edges of ``K_k`` in column order: lexicographic ``(u, v)``, ``u < v``."""
    return tuple(combinations(range(k), 2))


@lru_cache(maxsize=None)
def edge_column_index(k: int) -> dict[tuple[int, int], int]:
    return {e: i for i, e in enumerate(complete_graph_edges(k))}


@lru_cache(maxsize=None)
def complete_graph_representation(k: int) -> BinaryMatrix:
    """Vertex-edge incidence matrix of ``K_k`` over GF(2), last vertex row dropped.

    The dropped row is the sum of the others, so rank stays ``k - 1`` and a
    column set is independent iff its edges form a forest.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    edges = complete_graph_edges(k)
    rows = []
    for r in range(max(k - 1, 0)):
        bits = 0
        for c, (u, v) in enumerate(edges):
            if u == r or v == r:
                bits |= 1 << c
        rows.append(bits)
    return BinaryMatrix(len(rows), len(edges), tuple(rows))


def _rank(vectors: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    for x in vectors:
        while x:
            top = x.bit_length() - 1
            if top not in basis:
                basis[top] = x
                break
            x ^= basis[top]
    return len(basis)


def gf2_rank(m: BinaryMatrix, columns: Iterable[int]) -> int:
    cols = list(columns)
    for c in cols:
        if not 0 <= c < m.n_cols:
            raise ValueError(f"column {c} out of range")
    return _rank(m.column(c) for c in cols)


@lru_cache(maxsize=200_000)
def _wedge(m: BinaryMatrix, cols: tuple[int, ...]) -> int:
    p = len(cols)
    # row r restricted to the chosen columns, as a p-bit int
    sub = []
    for row in m.rows:
        bits = 0
        for j, c in enumerate(cols):
            if (row >> c) & 1:
                bits |= 1 << j
        sub.append(bits)
    out = 0
    for idx, rows in enumerate(combinations(range(m.n_rows), p)):
        if _rank(sub[r] for r in rows) == p:
            out |= 1 << idx
    return out


def wedge_vector(m: BinaryMatrix, columns: Sequence[int]) -> int:
    """All ``p x p`` minors of the chosen columns over GF(2), as a bit vector.

    Bit ``j`` is the determinant on the ``j``-th row subset in
    ``itertools.combinations(range(n_rows), p)`` order. The vector is zero
    iff the columns are dependent.
    """
    cols = tuple(sorted(columns))
    if len(cols) > m.n_rows:
        raise ValueError(f"p={len(cols)} exceeds the {m.n_rows} rows")
    return _wedge(m, cols)


def max_q_representative(
    ground: BinaryMatrix,
    family: Sequence[WeightedSet],
    p: int,
    q: int,
) -> list[Hashable]:
    """Payloads of a max ``q``-representative subfamily of ``family``.

    Every member must have exactly ``p`` columns and ``p + q`` must equal the
    number of rows of ``ground`` (its rank). Ties in weight keep insertion
    order, so results are reproducible. Dependent members are dropped.
    """
    if p + q != ground.n_rows:
        raise ValueError(f"p + q = {p + q} but ground matrix has rank {ground.n_rows}")
    for s in family:
        if len(s.columns) != p:
            raise ValueError(f"member {s.payload!r} has {len(s.columns)} columns, expected {p}")
    order = sorted(range(len(family)), key=lambda i: -family[i].weight)
    if not order:
        return []
    if p == 0:
        return [family[order[0]].payload]

    kept = []
    basis: dict[int, int] = {}
    limit = comb(p + q, p)
    for i in order:
        x = wedge_vector(ground, family[i].columns)
        if x == 0:
            log.debug("dropping dependent member %r", family[i].payload)
            continue
        while x:
            top = x.bit_length() - 1
            if top not in basis:
                basis[top] = x
                kept.append(family[i].payload)
                break
            x ^= basis[top]
        if len(kept) == limit:
            break
    assert len(kept) <= limit
    return kept

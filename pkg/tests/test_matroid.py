import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copathtw.checks import random_family
from copathtw.matroid import (
    BinaryMatrix,
    WeightedSet,
    complete_graph_edges,
    complete_graph_representation,
    gf2_rank,
    max_q_representative,
    wedge_vector,
)
from copathtw.oracle import check_representative


def _acyclic(k, edges):
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in edges:
        a, b = find(u), find(v)
        if a == b:
            return False
        parent[a] = b
    return True


def test_k2_matrix():
    m = complete_graph_representation(2)
    assert (m.n_rows, m.n_cols, m.rows) == (1, 1, (1,))


def test_small_and_degenerate_sizes():
    assert complete_graph_representation(0).n_rows == 0
    assert complete_graph_representation(1).n_cols == 0
    m = complete_graph_representation(5)
    assert (m.n_rows, m.n_cols) == (4, 10)


def test_triangle_dependent():
    m = complete_graph_representation(3)
    assert gf2_rank(m, range(3)) == 2
    assert m.column(0) ^ m.column(1) ^ m.column(2) == 0


def test_rank_examples():
    m = complete_graph_representation(3)
    assert gf2_rank(m, []) == 0
    assert gf2_rank(m, [1]) == 1
    with pytest.raises(ValueError):
        gf2_rank(m, [7])


def test_k4_spanning_trees_have_rank_three():
    m = complete_graph_representation(4)
    edges = complete_graph_edges(4)
    trees = [cols for cols in combinations(range(6), 3)
             if _acyclic(4, [edges[c] for c in cols])]
    assert len(trees) == 16
    assert all(gf2_rank(m, cols) == 3 for cols in trees)


@pytest.mark.parametrize("k", range(1, 7))
def test_forest_iff_independent_exhaustive(k):
    m = complete_graph_representation(k)
    edges = complete_graph_edges(k)
    for mask in range(1 << len(edges)):
        cols = [c for c in range(len(edges)) if mask >> c & 1]
        if len(cols) > k:
            continue
        assert (gf2_rank(m, cols) == len(cols)) == _acyclic(k, [edges[c] for c in cols])


def test_matrix_validation():
    with pytest.raises(ValueError):
        BinaryMatrix(2, 2, (1,))
    with pytest.raises(ValueError):
        BinaryMatrix(1, 2, (4,))
    m = BinaryMatrix(2, 3, (0b101, 0b011))
    assert m[0, 0] == 1 and m[0, 1] == 0 and m[1, 1] == 1
    assert m.column(0) == 0b11 and m.column(2) == 0b01


def test_wedge_p0():
    assert wedge_vector(complete_graph_representation(4), []) == 1


def test_wedge_single_column_is_column():
    m = complete_graph_representation(3)
    for c in range(3):
        assert wedge_vector(m, [c]) == m.column(c)


def test_wedge_k4_disjoint_edges_bruteforce():
    m = complete_graph_representation(4)
    edges = complete_graph_edges(4)
    s = [edges.index((0, 1)), edges.index((2, 3))]
    expect = 0
    for j, (r1, r2) in enumerate(combinations(range(3), 2)):
        det = (m[r1, s[0]] * m[r2, s[1]] + m[r1, s[1]] * m[r2, s[0]]) % 2
        expect |= det << j
    assert wedge_vector(m, s) == expect
    assert expect != 0


def test_wedge_zero_iff_dependent():
    for k in (3, 4, 5):
        m = complete_graph_representation(k)
        for p in range(k):
            for cols in combinations(range(m.n_cols), p):
                assert (wedge_vector(m, cols) == 0) == (gf2_rank(m, cols) < p)


def test_wedge_too_many_columns():
    with pytest.raises(ValueError):
        wedge_vector(complete_graph_representation(3), [0, 1, 2])


def test_p0_keeps_max():
    m = complete_graph_representation(4)
    fam = [WeightedSet((), w, i) for i, w in enumerate([3, 9, 9, 1])]
    assert max_q_representative(m, fam, 0, 3) == [1]


def test_k3_three_edges():
    m = complete_graph_representation(3)
    fam = [WeightedSet((c,), w, c) for c, w in zip(range(3), (5, 3, 1))]
    kept_ids = max_q_representative(m, fam, 1, 1)
    assert len(kept_ids) <= 2 and 0 in kept_ids
    assert check_representative(m, fam, [fam[i] for i in kept_ids], 1)


def test_k5_random_forty():
    rng = random.Random(7)
    m = complete_graph_representation(5)
    fam = random_family(rng, 5, 2, 40)
    kept_ids = max_q_representative(m, fam, 2, 2)
    assert len(kept_ids) <= comb(4, 2)
    assert check_representative(m, fam, [fam[i] for i in kept_ids], 2)


def test_dependent_members_dropped():
    m = complete_graph_representation(3)
    fam = [WeightedSet((0, 1), 9, "a")]
    m4 = complete_graph_representation(4)
    tri = [WeightedSet((0, 1, 3), 9, "tri"), WeightedSet((0, 1, 2), 1, "star")]
    assert max_q_representative(m4, tri, 3, 0) == ["star"]
    assert max_q_representative(m, fam, 2, 0) == ["a"]


def test_argument_errors():
    m = complete_graph_representation(4)
    with pytest.raises(ValueError):
        max_q_representative(m, [WeightedSet((0,), 1, 0)], 1, 1)
    with pytest.raises(ValueError):
        max_q_representative(m, [WeightedSet((0, 1), 1, 0)], 1, 2)
    assert max_q_representative(m, [], 1, 2) == []


def test_check_representative_examples():
    m = complete_graph_representation(3)
    fam = [WeightedSet((c,), 1, c) for c in range(3)]
    assert check_representative(m, fam, fam, 1)
    assert not check_representative(m, fam, [], 0)


families = st.integers(2, 5).flatmap(lambda k: st.tuples(
    st.just(k), st.integers(0, k - 1), st.integers(1, 30), st.integers(0, 10 ** 6)))


@settings(max_examples=60, deadline=None)
@given(families)
def test_representative_properties(params):
    k, p, size, seed = params
    q = k - 1 - p
    m = complete_graph_representation(k)
    fam = random_family(random.Random(seed), k, p, size)
    kept_ids = max_q_representative(m, fam, p, q)
    assert len(kept_ids) <= comb(p + q, p)
    kept = [fam[i] for i in kept_ids]
    assert check_representative(m, fam, kept, q)
    # idempotent on its own output
    assert sorted(max_q_representative(m, kept, p, q)) == sorted(kept_ids)
    # positive scaling does not change the choice
    scaled = [WeightedSet(x.columns, 3 * x.weight, x.payload) for x in fam]
    assert max_q_representative(m, scaled, p, q) == kept_ids

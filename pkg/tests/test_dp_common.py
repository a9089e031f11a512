import random
from itertools import combinations

import pytest

from copathtw.dp_common import (
    Entry,
    add_path_edge,
    forget_in_matching,
    iter_degree_subsets,
    merge_matchings,
    reconstruct,
    shrink,
)
from copathtw.matroid import WeightedSet, complete_graph_representation, edge_column_index
from copathtw.oracle import check_representative

A, B, C, D, U, V = 1, 2, 3, 4, 5, 6


def test_add_edge_closing_path_rejected():
    assert add_path_edge(((A, B),), {A: 1, B: 1}, A, B) is None


def test_add_edge_concatenates():
    deg = {A: 1, B: 1, C: 1, D: 1}
    assert add_path_edge(((A, B), (C, D)), deg, B, C) == ((A, D),)


def test_add_edge_between_isolated():
    assert add_path_edge((), {A: 0, B: 0}, A, B) == ((A, B),)


def test_add_edge_to_outside_end():
    # B is a path end whose other end left the bag
    assert add_path_edge((), {A: 0, B: 1}, A, B) == ()
    assert add_path_edge((), {A: 1, B: 1}, A, B) == ()


def test_add_edge_loop():
    with pytest.raises(ValueError):
        add_path_edge((), {A: 0}, A, A)


def test_forget_examples():
    assert forget_in_matching(((U, V),), V) == ()
    assert forget_in_matching((), V) == ()
    assert forget_in_matching(((A, B), (U, V)), V) == ((A, B),)


def test_merge_examples():
    assert merge_matchings(((A, B),), ((A, B),), {A: 2, B: 2}) is None
    assert merge_matchings(((A, B),), ((B, C),), {A: 1, B: 2, C: 1}) == ((A, C),)
    deg = {A: 2, B: 2, C: 2, D: 2}
    assert merge_matchings(((A, B), (C, D)), ((B, C), (D, A)), deg) is None


def test_merge_neutral_and_outside_ends():
    f = ((A, B),)
    assert merge_matchings(f, (), {A: 1, B: 1, C: 0}) == f
    # B continues on the other side towards a forgotten vertex
    assert merge_matchings(((A, B),), (), {A: 1, B: 2}) == ()


def test_merge_bag_mismatch():
    with pytest.raises(ValueError):
        merge_matchings(((A, B),), (), {A: 1})


def test_reconstruct_shared_ancestors():
    leaf = Entry((), 0, delta=(1,))
    left = Entry((), 0, (leaf,), (2,))
    right = Entry((), 0, (leaf,), (3,))
    assert reconstruct(Entry((), 0, (left, right), (4,))) == {1, 2, 3, 4}


def test_degree_subsets():
    assert list(iter_degree_subsets("abc")) == [(), ("a",), ("b",), ("c",),
                                                ("a", "b"), ("a", "c"), ("b", "c")]
    assert list(iter_degree_subsets("ab", 1)) == [(), ("a",), ("b",)]


def test_shrink_small_ground_keeps_max():
    es = [Entry((), 2), Entry((), 7), Entry((), 5)]
    assert [e.weight for e in shrink([], es)] == [7]
    assert [e.weight for e in shrink([A], es)] == [7]
    assert shrink([A, B], []) == []


def test_shrink_empty_matchings_keep_max():
    es = [Entry((), w) for w in (1, 4, 3)]
    assert [e.weight for e in shrink([A, B, C], es)] == [4]


def test_shrink_dedup_keeps_heavier():
    es = [Entry(((A, B),), 1), Entry(((A, B),), 6)]
    assert [e.weight for e in shrink([A, B], es)] == [6]


def test_fault_drops_empty_bucket():
    es = [Entry((), 9), Entry(((A, B),), 1)]
    assert len(shrink([A, B, C], es)) == 2
    assert [e.weight for e in shrink([A, B, C], es, drop_empty_bucket=True)] == [1]


def _random_matchings(rng, ground, count):
    out = []
    for _ in range(count):
        verts = list(ground)
        rng.shuffle(verts)
        pairs = rng.randint(0, len(verts) // 2)
        m = tuple(sorted(tuple(sorted(verts[2 * i:2 * i + 2])) for i in range(pairs)))
        out.append(Entry(m, rng.randint(0, 30)))
    return out


def _bucket_family(ground, entries, i):
    pos = {v: j for j, v in enumerate(ground)}
    col = edge_column_index(len(ground))
    return [WeightedSet(tuple(sorted(col[(pos[a], pos[b])] for a, b in e.matching)),
                        e.weight, e)
            for e in entries if len(e.matching) == i]


@pytest.mark.parametrize("seed", range(5))
def test_shrink_k4_hundred_entries(seed):
    rng = random.Random(seed)
    ground = [2, 5, 7, 9]
    entries = _random_matchings(rng, ground, 100)
    out = shrink(ground, entries)
    assert len(out) <= 16
    assert all(any(o is e for e in entries) for o in out)
    m = complete_graph_representation(4)
    for i in range(3):
        fam = _bucket_family(ground, entries, i)
        kept = _bucket_family(ground, out, i)
        assert check_representative(m, fam, kept, 3 - i)


@pytest.mark.parametrize("k", [2, 3, 5])
def test_shrink_dominates_exhaustively(k):
    rng = random.Random(k)
    ground = list(range(10, 10 + k))
    entries = _random_matchings(rng, ground, 60)
    out = shrink(ground, entries)
    assert len(out) <= 2 ** k
    m = complete_graph_representation(k)
    for i in range(k // 2 + 1):
        assert check_representative(m, _bucket_family(ground, entries, i),
                                    _bucket_family(ground, out, i), k - 1 - i)


def test_all_matchings_of_four_within_bound():
    ground = [0, 1, 2, 3]
    ms = [()] + [((a, b),) for a, b in combinations(ground, 2)] + \
         [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    out = shrink(ground, [Entry(m, 1) for m in ms])
    assert len(out) <= 16

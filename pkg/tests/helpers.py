"""Checks shared by the DP test modules."""

import networkx as nx

from copathtw.dp_common import DEL, reconstruct


def subtree_nodes(nice):
    below = []
    for x in nice.nodes:
        s = set()
        for c in x.children:
            s |= below[c] | {c}
        below.append(s)
    return [b | {i} for i, b in enumerate(below)]


def check_tables(g, nice, schedule, tables, problem):
    """Every entry's labels and matching agree with its reconstruction."""
    subtree = subtree_nodes(nice)
    for i, x in enumerate(nice.nodes):
        scheduled = [e for j in subtree[i] for e in schedule.get(j, ())]
        for state, entries in tables[i].items():
            for entry in entries:
                got = reconstruct(entry)
                h = nx.Graph()
                if problem == "set":
                    h.add_edges_from(g.edges[e] for e in got)
                    weight = sum(g.edge_weights[e] for e in got)
                else:
                    h.add_nodes_from(got)
                    h.add_edges_from(g.edges[e] for e in scheduled
                                     if g.edges[e][0] in got and g.edges[e][1] in got)
                    weight = sum(g.vertex_weights[v] for v in got)
                    for v, lab in zip(x.bag, state):
                        assert (lab == DEL) == (v not in got)
                assert weight == entry.weight
                assert nx.is_forest(h) if h.number_of_nodes() else True
                assert all(d <= 2 for _, d in h.degree)
                for v, lab in zip(x.bag, state):
                    if lab != DEL:
                        assert (h.degree[v] if v in h else 0) == lab
                ends = [v for v, lab in zip(x.bag, state) if lab == 1]
                comp = {v: min(nx.node_connected_component(h, v)) for v in ends}
                expect = tuple(sorted((a, b) for a in ends for b in ends
                                      if a < b and comp[a] == comp[b]))
                assert entry.matching == expect

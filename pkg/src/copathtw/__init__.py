"""Exact treewidth DP for weighted Co-Path Set and Co-Path Packing."""

from copathtw.graph import (
    Graph,
    edge_subgraph,
    induced_subgraph,
    is_linear_forest,
    verify_packing_solution,
    verify_set_solution,
    weight_of,
)
from copathtw.decomposition import (
    NiceTreeDecomposition,
    TreeDecomposition,
    decompose,
    heuristic_decomposition,
    heuristic_path_decomposition,
    nicify,
    validate,
)
from copathtw.copath_set import decide_set, solve_set
from copathtw.copath_packing import decide_packing, solve_packing

__all__ = [
    "Graph",
    "NiceTreeDecomposition",
    "TreeDecomposition",
    "decide_packing",
    "decide_set",
    "decompose",
    "edge_subgraph",
    "heuristic_decomposition",
    "heuristic_path_decomposition",
    "induced_subgraph",
    "is_linear_forest",
    "nicify",
    "solve_packing",
    "solve_set",
    "validate",
    "verify_packing_solution",
    "verify_set_solution",
    "weight_of",
]

__version__ = "0.1.0"

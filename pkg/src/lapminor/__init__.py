"""Sparse, well-connected graph learning by maximizing the Laplacian minor."""

from .costs import CostConfig, cost_table
from .graph import (
    DisconnectedGraphError,
    Edge,
    EdgeSet,
    GraphState,
    build_laplacian,
    is_connected_support,
    log_tree_weight,
    objective,
)
from .solver import SelectionRule, SolverConfig, SolverTrace, solve
from .spanning_tree import TreeInit, mst_initialize
from .topology import TopologySpec, complete_edge_set, knn_edge_set, validate_connected

__all__ = [
    "CostConfig",
    "DisconnectedGraphError",
    "Edge",
    "EdgeSet",
    "GraphState",
    "SelectionRule",
    "SolverConfig",
    "SolverTrace",
    "TopologySpec",
    "TreeInit",
    "build_laplacian",
    "complete_edge_set",
    "cost_table",
    "is_connected_support",
    "knn_edge_set",
    "log_tree_weight",
    "mst_initialize",
    "objective",
    "solve",
    "validate_connected",
]

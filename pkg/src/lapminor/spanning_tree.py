"""Optimal spanning-tree initialization.

On a fixed tree T, det Q = n * prod_e w_e, so

    F(T, w) = -log n - sum_e log w_e + sum_e h_e w_e,

which each edge minimizes independently at w_e = 1 / h_e, leaving

    F(T) = -log n + sum_{e in T} log h_e + (n - 1).

The best tree is therefore the minimum spanning tree under h (log is monotone).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import DisconnectedGraphError, Edge, EdgeSet, UnionFind, components


@dataclass(frozen=True)
class TreeInit:
    tree_index: np.ndarray  # positions of the tree edges inside the EdgeSet
    tree_edges: tuple[Edge, ...]
    w0: np.ndarray  # 1 / h_e for the tree edges
    F0: float

    def full_weights(self, m: int) -> np.ndarray:
        w = np.zeros(m)
        w[self.tree_index] = self.w0
        return w


def kruskal(edge_set: EdgeSet) -> np.ndarray:
    """Indices of the MST edges, ties broken by (h, i, j)."""
    order = np.lexsort((edge_set.tails, edge_set.heads, edge_set.costs))
    uf = UnionFind(edge_set.n)
    picked = []
    for k in order.tolist():
        if uf.union(int(edge_set.heads[k]), int(edge_set.tails[k])):
            picked.append(k)
            if len(picked) == edge_set.n - 1:
                break
    if len(picked) != edge_set.n - 1:
        comps = components(edge_set.n, edge_set.heads, edge_set.tails)
        raise DisconnectedGraphError(
            f"candidate topology disconnected ({len(comps)} components); no spanning tree", comps
        )
    return np.array(sorted(picked), dtype=np.intp)


def initial_objective(tree: TreeInit, n: int) -> float:
    # w0 = 1/h, so sum log h = -sum log w0
    return -math.log(n) - float(np.log(tree.w0).sum()) + (n - 1)


def mst_initialize(edge_set: EdgeSet) -> TreeInit:
    idx = kruskal(edge_set)
    h = edge_set.costs[idx]
    F0 = -math.log(edge_set.n) + float(np.log(h).sum()) + (edge_set.n - 1)
    return TreeInit(idx, tuple(edge_set.edges[k] for k in idx), 1.0 / h, F0)

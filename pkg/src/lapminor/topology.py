"""Candidate edge sets: complete graph, K nearest neighbours, or a user file.

Large costs force small or zero optimal weights, so dropping expensive pairs
before optimizing loses little; KNN on the cost table does exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .costs import CostConfig, cost_rows, pair_costs
from .graph import DisconnectedGraphError, EdgeSet, components

KINDS = ("complete", "knn", "file")


@dataclass
class TopologySpec:
    kind: str = "complete"
    K: Optional[int] = None
    path: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown topology {self.kind!r}; choose from {KINDS}")
        if self.kind == "knn" and (self.K is None or self.K < 1):
            raise ValueError("knn topology needs K >= 1")
        if self.kind == "file" and not self.path:
            raise ValueError("file topology needs an edge-list path")


def complete_edge_set(H) -> EdgeSet:
    H = np.asarray(H, dtype=float)
    n = H.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    return EdgeSet(n, zip(iu.tolist(), ju.tolist()), H[iu, ju])


def _neighbours(row: np.ndarray, i: int, K: int) -> np.ndarray:
    row = row.copy()
    row[i] = np.inf
    # stable sort: equal costs resolve to the smaller node index
    return np.argsort(row, kind="stable")[:K]


def knn_edge_set(H, K: int) -> EdgeSet:
    """Union-symmetrized KNN graph: (i, j) kept if either endpoint ranks the other in its K cheapest."""
    H = np.asarray(H, dtype=float)
    n = H.shape[0]
    if not 1 <= K <= n - 1:
        raise ValueError(f"K must be in [1, {n - 1}], got {K}")
    pairs = set()
    for i in range(n):
        for j in _neighbours(H[i], i, K).tolist():
            pairs.add((min(i, j), max(i, j)))
    edges = sorted(pairs)
    idx = np.array(edges, dtype=np.intp)
    return EdgeSet(n, edges, H[idx[:, 0], idx[:, 1]])


def knn_edge_set_streaming(X, cfg: CostConfig, K: int) -> EdgeSet:
    """Same result as ``knn_edge_set(cost_table(X, cfg), K)`` with O(n K) memory.

    ``cfg.sigma`` must be resolved for the Gaussian family.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if not 1 <= K <= n - 1:
        raise ValueError(f"K must be in [1, {n - 1}], got {K}")
    found = {}
    for i, row in cost_rows(X, cfg):
        for j in _neighbours(row, i, K).tolist():
            found[(min(i, j), max(i, j))] = float(row[j])
    edges = sorted(found)
    # recompute per pair so the stored cost does not depend on which row found it
    return EdgeSet(n, edges, pair_costs(X, cfg, edges))


def validate_connected(edge_set: EdgeSet) -> None:
    comps = components(edge_set.n, edge_set.heads, edge_set.tails)
    if len(comps) > 1:
        listing = "; ".join(
            "{" + ", ".join(map(str, c[:8])) + (", ..." if len(c) > 8 else "") + "}" for c in comps
        )
        raise DisconnectedGraphError(
            f"candidate topology disconnected: increase K or supply more edges "
            f"({len(comps)} components: {listing})",
            comps,
        )


def read_edge_file(path) -> tuple[int | None, list[tuple[int, int]], Optional[np.ndarray]]:
    """Parse ``i j [h]`` lines (tab or space separated, ``#`` comments).

    Returns (n from a ``# n=`` header or None, pairs, costs or None when no line has h).
    Mixed files (some lines with h, some without) are rejected.
    """
    n = None
    pairs, hs = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("n="):
                        n = int(tok[2:])
                continue
            parts = line.split()
            if len(parts) not in (2, 3, 5):
                raise ValueError(f"{path}:{lineno}: expected 'i j [h]', got {line!r}")
            pairs.append((int(parts[0]), int(parts[1])))
            # 5 columns = our own i j w h r output; the cost is column 4
            hs.append(float(parts[3]) if len(parts) == 5 else (float(parts[2]) if len(parts) == 3 else None))
    have = [h is not None for h in hs]
    if any(have) and not all(have):
        raise ValueError(f"{path}: either every line or no line must carry a cost")
    return n, pairs, (np.array(hs) if hs and all(have) else None)


def edge_set_from_file(path, X=None, cfg: CostConfig | None = None, n: int | None = None) -> EdgeSet:
    file_n, pairs, h = read_edge_file(path)
    if X is not None:
        n = np.asarray(X).shape[0]
    n = n or file_n or (max(max(p) for p in pairs) + 1 if pairs else None)
    if n is None:
        raise ValueError(f"{path}: empty edge file")
    if h is None:
        if X is None or cfg is None:
            raise ValueError(f"{path}: no costs in file and no data to compute them")
        h = pair_costs(X, cfg, pairs)
    return EdgeSet(n, pairs, h)

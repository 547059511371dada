"""Weighted undirected graphs, combinatorial Laplacians and the matrix-tree theorem."""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import scipy.linalg

ROW_SUM_TOL = 1e-12


class DisconnectedGraphError(ValueError):
    """Raised when an operation needs a connected (irreducible) graph."""

    def __init__(self, message: str, components: list[list[int]] | None = None):
        super().__init__(message)
        self.components = components or []


class Edge(NamedTuple):
    i: int
    j: int


class UnionFind:
    """Disjoint sets with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def components(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for a in range(len(self.parent)):
            groups.setdefault(self.find(a), []).append(a)
        return sorted(groups.values(), key=lambda c: c[0])


@dataclass(frozen=True)
class EdgeSet:
    """Candidate topology: ``n`` nodes, undirected edges with i < j, positive costs.

    Edges given as (j, i) are canonicalized to (i, j). Self loops, repeated
    pairs and non-positive or non-finite costs are rejected.
    """

    n: int
    edges: tuple[Edge, ...]
    costs: np.ndarray
    heads: np.ndarray = field(init=False, repr=False, compare=False)
    tails: np.ndarray = field(init=False, repr=False, compare=False)

    def __init__(self, n: int, edges: Iterable[Sequence[int]], costs: Iterable[float]):
        n = int(n)
        if n < 2:
            raise ValueError(f"need at least 2 nodes, got n={n}")
        canon = []
        seen = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self loop on node {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) out of range for n={n}")
            e = Edge(min(a, b), max(a, b))
            if e in seen:
                raise ValueError(f"edge {tuple(e)} listed twice")
            seen.add(e)
            canon.append(e)
        h = np.array(list(costs), dtype=float).reshape(-1)
        if h.shape[0] != len(canon):
            raise ValueError(f"{len(canon)} edges but {h.shape[0]} costs")
        if not np.all(np.isfinite(h)):
            raise ValueError("edge costs must be finite")
        bad = np.flatnonzero(h <= 0)
        if bad.size:
            e = canon[bad[0]]
            raise ValueError(
                f"edge {tuple(e)} has cost {h[bad[0]]!r}; costs must be positive "
                "(use alpha > 0 or remove duplicate feature rows)"
            )
        h.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "costs", h)
        heads = np.array([e.i for e in canon], dtype=np.intp)
        tails = np.array([e.j for e in canon], dtype=np.intp)
        heads.setflags(write=False)
        tails.setflags(write=False)
        object.__setattr__(self, "heads", heads)
        object.__setattr__(self, "tails", tails)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def subset(self, idx: Iterable[int]) -> EdgeSet:
        idx = list(idx)
        return EdgeSet(self.n, [self.edges[k] for k in idx], self.costs[idx])


@dataclass(frozen=True)
class GraphState:
    edge_set: EdgeSet
    w: np.ndarray
    L: np.ndarray
    Q: np.ndarray

    @property
    def n(self) -> int:
        return self.edge_set.n


def laplacian(n: int, heads: np.ndarray, tails: np.ndarray, w: np.ndarray) -> np.ndarray:
    L = np.zeros((n, n))
    np.add.at(L, (heads, tails), -w)
    L += L.T
    L[np.diag_indices(n)] = -L.sum(axis=1)
    return L


def build_laplacian(edge_set: EdgeSet, w) -> GraphState:
    """Assemble L = sum_e w_e g_e g_e^T and Q = L + J/n."""
    w = np.array(w, dtype=float).reshape(-1)
    if w.shape[0] != edge_set.m:
        raise ValueError(f"expected {edge_set.m} weights, got {w.shape[0]}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("edge weights must be finite and nonnegative")
    n = edge_set.n
    L = laplacian(n, edge_set.heads, edge_set.tails, w)
    scale = max(1.0, float(np.abs(L).max(initial=0.0)))
    assert np.abs(L.sum(axis=1)).max() <= ROW_SUM_TOL * scale
    Q = L + 1.0 / n
    w.setflags(write=False)
    return GraphState(edge_set, w, L, Q)


def components(n: int, heads, tails, w=None) -> list[list[int]]:
    """Connected components of the support {e : w_e > 0} (all edges if w is None)."""
    uf = UnionFind(n)
    for k, (a, b) in enumerate(zip(heads, tails)):
        if w is None or w[k] > 0:
            uf.union(int(a), int(b))
    return uf.components()


def is_connected_support(edge_set: EdgeSet, w) -> bool:
    w = np.asarray(w, dtype=float)
    uf = UnionFind(edge_set.n)
    for k in np.flatnonzero(w > 0):
        uf.union(int(edge_set.heads[k]), int(edge_set.tails[k]))
        if uf.count == 1:
            return True
    return uf.count == 1


def logdet_spd(Q: np.ndarray) -> float:
    """log det of a symmetric positive-definite matrix via Cholesky."""
    try:
        c, _ = scipy.linalg.cho_factor(Q, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise DisconnectedGraphError("strengthened Laplacian is not positive definite") from exc
    return 2.0 * float(np.log(np.diag(c)).sum())


def _require_connected(state: GraphState) -> None:
    es = state.edge_set
    if not is_connected_support(es, state.w):
        comps = components(es.n, es.heads, es.tails, state.w)
        raise DisconnectedGraphError(
            f"graph is disconnected ({len(comps)} components); spanning-tree weight is 0",
            comps,
        )


def log_tree_weight(state: GraphState) -> float:
    """log of the total spanning-tree weight, log det(Q) - log n."""
    _require_connected(state)
    return logdet_spd(state.Q) - math.log(state.n)


def objective(state: GraphState) -> float:
    """F(L) = -log det(Q) + sum_e h_e w_e."""
    _require_connected(state)
    return -logdet_spd(state.Q) + float(state.edge_set.costs @ state.w)


def write_edge_tsv(path, edge_set: EdgeSet, w, r) -> None:
    """Write ``# n=.. m=..`` then one ``i j w h r`` line per edge (floats round-trip exactly)."""
    lines = [f"# n={edge_set.n} m={edge_set.m}"]
    for k, e in enumerate(edge_set.edges):
        lines.append(
            f"{e.i}\t{e.j}\t{float(w[k])!r}\t{float(edge_set.costs[k])!r}\t{float(r[k])!r}"
        )
    atomic_write(path, "\n".join(lines) + "\n")


def read_edge_tsv(path) -> tuple[EdgeSet, np.ndarray, np.ndarray]:
    """Inverse of :func:`write_edge_tsv`; returns (edge_set, w, r)."""
    n = None
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("n="):
                        n = int(tok[2:])
                continue
            rows.append(line.split("\t"))
    if n is None:
        raise ValueError(f"{path}: missing '# n=<n> m=<m>' header")
    edges = [(int(r[0]), int(r[1])) for r in rows]
    w = np.array([float(r[2]) for r in rows])
    h = np.array([float(r[3]) for r in rows])
    r = np.array([float(r[4]) for r in rows])
    return EdgeSet(n, edges, h), w, r


def atomic_write(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

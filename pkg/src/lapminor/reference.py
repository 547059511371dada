"""Slow, independent oracles for tests: spanning-tree enumeration and projected gradient."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import DisconnectedGraphError, EdgeSet, laplacian, logdet_spd

MAX_ENUM_NODES = 8


@dataclass
class OracleResult:
    w_star: np.ndarray
    F_star: float
    iterations: int
    stationarity: float


def enumerate_spanning_trees(edge_set: EdgeSet) -> list[tuple[int, ...]]:
    """All spanning trees as tuples of edge indices (include/exclude recursion)."""
    n, m = edge_set.n, edge_set.m
    if n > MAX_ENUM_NODES:
        raise ValueError(f"enumeration limited to n <= {MAX_ENUM_NODES}, got n={n}")
    ends = list(zip(edge_set.heads.tolist(), edge_set.tails.tolist()))
    trees = []

    def find(parent, a):
        while parent[a] != a:
            a = parent[a]
        return a

    def rec(k, parent, chosen):
        if len(chosen) == n - 1:
            trees.append(tuple(chosen))
            return
        if m - k < n - 1 - len(chosen):
            return
        a, b = ends[k]
        ra, rb = find(parent, a), find(parent, b)
        if ra != rb:
            p2 = list(parent)
            p2[ra] = rb
            chosen.append(k)
            rec(k + 1, p2, chosen)
            chosen.pop()
        rec(k + 1, parent, chosen)

    rec(0, list(range(n)), [])
    return trees


def brute_force_omega(edge_set: EdgeSet, w) -> float:
    """Sum over spanning trees of the product of their weights."""
    w = np.asarray(w, dtype=float)
    return float(sum(math.prod(w[list(t)]) for t in enumerate_spanning_trees(edge_set)))


def dense_objective(edge_set: EdgeSet, w) -> float:
    """F(w) from scratch; +inf when Q is not positive definite."""
    n = edge_set.n
    Q = laplacian(n, edge_set.heads, edge_set.tails, np.asarray(w, dtype=float)) + 1.0 / n
    try:
        return -logdet_spd(Q) + float(edge_set.costs @ w)
    except DisconnectedGraphError:
        return math.inf


def _grad_hess(edge_set: EdgeSet, w: np.ndarray, hessian: bool = True):
    """Gradient h - r and Hessian (g_e^T S g_f)^2 of F from a dense inverse."""
    n = edge_set.n
    a, b = edge_set.heads, edge_set.tails
    Q = laplacian(n, a, b, w) + 1.0 / n
    S = np.linalg.inv(Q)
    G = S[:, a] - S[:, b]
    r = G[a, np.arange(len(a))] - G[b, np.arange(len(a))]
    if not hessian:
        return edge_set.costs - r, None
    M = G[a] - G[b]
    return edge_set.costs - r, M * M


def _stationarity(w, g) -> float:
    return float(np.abs(w - np.maximum(w - g, 0.0)).max(initial=0.0))


def projected_gradient_solve(
    edge_set: EdgeSet,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    w0=None,
) -> OracleResult:
    """Minimize F over w >= 0 by projected (two-metric Newton) gradient steps.

    Coordinates sitting at zero with a positive gradient are held by a plain
    gradient step; the rest move along the reduced Newton direction. Every step
    is projected onto w >= 0 and accepted by Armijo backtracking (c = 0.5,
    shrink 0.5). If the Newton step cannot be accepted, a plain projected
    gradient step is used instead. Stops when max |w - P(w - grad)| <= tol.
    Starts from w_e = 1/h_e on every candidate edge unless ``w0`` is given.
    """
    h = edge_set.costs
    w = 1.0 / h if w0 is None else np.array(w0, dtype=float)
    F = dense_objective(edge_set, w)
    if not math.isfinite(F):
        raise DisconnectedGraphError("oracle start point is not connected")

    def armijo(w, F, g, d, step):
        slack = 8 * np.finfo(float).eps * abs(F)
        for _ in range(60):
            w_new = np.maximum(w + step * d, 0.0)
            F_new = dense_objective(edge_set, w_new)
            if F_new <= F + 0.5 * float(g @ (w_new - w)) + slack:
                return w_new, F_new
            step *= 0.5
        return None

    for it in range(max_iter):
        g, H = _grad_hess(edge_set, w)
        stat = _stationarity(w, g)
        if stat <= tol:
            return OracleResult(w, F, it, stat)
        eps = min(1e-6, stat)
        held = (w <= eps) & (g > 0)
        free = ~held
        d = -g.copy()
        if free.any():
            try:
                d[free] = -np.linalg.solve(H[np.ix_(free, free)], g[free])
            except np.linalg.LinAlgError:
                pass
        out = armijo(w, F, g, d, 1.0)
        if out is None:
            out = armijo(w, F, g, -g, 1.0)
        if out is None:
            raise RuntimeError("projected gradient: backtracking exhausted")
        w, F = out
    g, _ = _grad_hess(edge_set, w, hessian=False)
    raise RuntimeError(
        f"projected gradient did not reach tol={tol} (stationarity {_stationarity(w, g):.3g})"
    )

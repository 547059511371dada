"""Dense inverse of the strengthened Laplacian kept current under rank-one edge updates.

Every effective resistance is read off the inverse in O(1):
r_ij = S_ii + S_jj - 2 S_ij. An edge-weight change costs one O(n^2)
Sherman-Morrison update; a periodic O(n^3) refresh bounds rounding drift.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg
from scipy.linalg.blas import dger

from .graph import DisconnectedGraphError, GraphState


def _spd_inverse(Q: np.ndarray) -> tuple[np.ndarray, float]:
    """Inverse (Fortran order) and log-determinant of an SPD matrix."""
    try:
        c = scipy.linalg.cho_factor(Q, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise DisconnectedGraphError("initial graph not connected") from exc
    inv = scipy.linalg.cho_solve(c, np.eye(Q.shape[0]), check_finite=False)
    inv = np.asfortranarray(0.5 * (inv + inv.T))
    return inv, 2.0 * float(np.log(np.diag(c[0])).sum())


class SigmaMatrix:
    """Maintains ``sigma = Q^{-1}``.

    ``q`` is a private copy of Q updated in O(1) per edge change, so a refresh
    can re-invert without the caller. ``logdet`` follows the determinant
    lemma between refreshes and is recomputed at each refresh.
    ``refresh_every`` counts non-trivial rank-one updates; ``None`` disables
    automatic refresh.
    """

    def __init__(self, Q: np.ndarray, refresh_every: int | None = None):
        self.q = np.array(Q, dtype=float)
        self.n = self.q.shape[0]
        self.refresh_every = refresh_every
        self.updates_since_refresh = 0
        self.refreshes = 0
        self.sigma, self.logdet = _spd_inverse(self.q)

    def resistance(self, i: int, j: int) -> float:
        S = self.sigma
        return S[i, i] + S[j, j] - 2.0 * S[i, j]

    def resistances(self, heads, tails) -> np.ndarray:
        S = self.sigma
        d = np.diag(S)
        return d[heads] + d[tails] - 2.0 * S[heads, tails]

    def update(self, i: int, j: int, delta: float, r: float | None = None) -> None:
        """Apply Q <- Q + delta g g^T with g = e_i - e_j.

        ``r`` is the current resistance of (i, j) if the caller already has it.
        """
        if delta == 0.0:
            return
        S = self.sigma
        if r is None:
            r = S[i, i] + S[j, j] - 2.0 * S[i, j]
        denom = 1.0 + delta * r
        if not denom > 0.0:
            raise RuntimeError(
                f"rank-one update would make Q singular (1 + delta*r = {denom!r}); solver bug"
            )
        u = S[:, i] - S[:, j]
        self.sigma = dger(-delta / denom, u, u, a=S, overwrite_a=1)
        q = self.q
        q[i, i] += delta
        q[j, j] += delta
        q[i, j] -= delta
        q[j, i] -= delta
        self.logdet += math.log1p(delta * r)
        self.updates_since_refresh += 1
        if self.refresh_every is not None and self.updates_since_refresh >= self.refresh_every:
            self.refresh()

    def refresh(self, Q: np.ndarray | None = None) -> None:
        """Re-invert from scratch (from ``Q`` if given, else the tracked copy)."""
        if Q is not None:
            self.q = np.array(Q, dtype=float)
        self.sigma, self.logdet = _spd_inverse(self.q)
        self.updates_since_refresh = 0
        self.refreshes += 1

    def residual(self) -> float:
        """max |Q sigma - I|."""
        return float(np.abs(self.q @ self.sigma - np.eye(self.n)).max())


def init_sigma(Q: np.ndarray, refresh_every: int | None = None) -> SigmaMatrix:
    return SigmaMatrix(Q, refresh_every)


def refresh(state: GraphState, refresh_every: int | None = None) -> SigmaMatrix:
    return SigmaMatrix(state.Q, refresh_every)


def effective_resistance(sigma: SigmaMatrix, e) -> float:
    return sigma.resistance(int(e[0]), int(e[1]))


def edge_resistances(state: GraphState) -> np.ndarray:
    """Resistances of every candidate edge from a fresh inverse."""
    es = state.edge_set
    return SigmaMatrix(state.Q).resistances(es.heads, es.tails)


def updated_resistance(sigma_before: SigmaMatrix, e, delta: float, f) -> float:
    """Resistance of ``f`` after changing the weight of ``e`` by ``delta``,
    from pre-update resistances only:

        r_f' = r_f - delta * z / (1 + delta * r_e),
        z = (r_it - r_is + r_js - r_jt)^2 / 4  with e = (i, j), f = (s, t).

    Used as an independent check of the Sherman-Morrison path.
    """
    i, j = int(e[0]), int(e[1])
    s, t = int(f[0]), int(f[1])

    def res(a, b):
        return 0.0 if a == b else sigma_before.resistance(a, b)

    r_e = res(i, j)
    r_f = res(s, t)
    z = (-res(i, s) + res(i, t) + res(j, s) - res(j, t)) ** 2 / 4.0
    return r_f - delta * z / (1.0 + delta * r_e)

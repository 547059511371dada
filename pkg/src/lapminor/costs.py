"""Edge costs h_ij computed from a data matrix X (rows = node features, columns = signals).

Three families are provided:

* ``gmrf``: alpha + mean squared difference of rows,
* ``lp_variation``: mean of |x_ik - x_jk|^p over the columns,
* ``gaussian_kernel``: exp(||x_i - x_j||^2 / sigma^2).

Note the sign of the Gaussian exponent: the cost *grows* with distance, so it is
the reciprocal of the usual exp(-d^2 / sigma^2) similarity kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

FAMILIES = ("gmrf", "lp_variation", "gaussian_kernel")
_ALIASES = {"lp": "lp_variation", "gaussian": "gaussian_kernel"}
# largest exponent with a finite float64 exp()
_MAX_EXPONENT = math.log(np.finfo(float).max)


class CostOverflowError(OverflowError):
    pass


@dataclass
class CostConfig:
    family: str = "gaussian_kernel"
    alpha: Optional[float] = None
    p: float = 2.0
    sigma: Optional[float] = None  # None -> median pairwise distance

    def __post_init__(self):
        self.family = _ALIASES.get(self.family, self.family)
        if self.family not in FAMILIES:
            raise ValueError(f"unknown cost family {self.family!r}; choose from {FAMILIES}")
        if self.family == "gmrf":
            if self.alpha is None:
                raise ValueError("gmrf cost needs an explicit alpha >= 0")
            if self.alpha < 0:
                raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.family == "lp_variation" and not self.p > 0:
            raise ValueError(f"p must be > 0, got {self.p}")
        if self.sigma is not None and not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")


def check_data(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"data matrix must be 2-D, got shape {X.shape}")
    n, N = X.shape
    if n < 2 or N < 1:
        raise ValueError(f"need n >= 2 rows and N >= 1 columns, got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("data matrix has non-finite entries")
    return X


def _row_blocks(X: np.ndarray, fn, rows=None) -> Iterator[tuple[int, np.ndarray]]:
    for i in range(X.shape[0]) if rows is None else rows:
        yield i, fn(X - X[i])


def sq_distances(X) -> np.ndarray:
    """Squared Euclidean distances between rows, exact zeros for identical rows."""
    X = check_data(X)
    D = np.empty((X.shape[0],) * 2)
    for i, row in _row_blocks(X, lambda d: np.einsum("ij,ij->i", d, d)):
        D[i] = row
    return np.minimum(D, D.T)


def median_sigma(X) -> float:
    """Median of the pairwise Euclidean distances (i < j)."""
    D = sq_distances(X)
    iu = np.triu_indices(D.shape[0], k=1)
    s = float(np.sqrt(np.median(D[iu])))
    if s <= 0:
        raise ValueError("median pairwise distance is zero; pass sigma explicitly")
    return s


def gmrf_cost(X, alpha: float) -> np.ndarray:
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    X = check_data(X)
    return alpha + sq_distances(X) / X.shape[1]


def lp_variation_cost(X, p: float) -> np.ndarray:
    if not p > 0:
        raise ValueError(f"p must be > 0, got {p}")
    X = check_data(X)
    H = np.empty((X.shape[0],) * 2)
    for i, row in _row_blocks(X, lambda d: np.mean(np.abs(d) ** p, axis=1)):
        H[i] = row
    return np.minimum(H, H.T)


def _gaussian_from_sq(D: np.ndarray, sigma: float) -> np.ndarray:
    expo = D / sigma**2
    worst = float(expo.max(initial=0.0))
    if worst > _MAX_EXPONENT:
        raise CostOverflowError(
            f"cost overflow: increase sigma (largest exponent {worst:.4g} > {_MAX_EXPONENT:.4g})"
        )
    return np.exp(expo)


def gaussian_kernel_cost(X, sigma: Optional[float] = None) -> np.ndarray:
    X = check_data(X)
    D = sq_distances(X)
    if sigma is None:
        iu = np.triu_indices(D.shape[0], k=1)
        sigma = float(np.sqrt(np.median(D[iu])))
        if sigma <= 0:
            raise ValueError("median pairwise distance is zero; pass sigma explicitly")
    elif not sigma > 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    return _gaussian_from_sq(D, sigma)


def cost_table(X, cfg: CostConfig) -> np.ndarray:
    """Full symmetric n x n cost table for ``cfg``; the diagonal is never used."""
    if cfg.family == "gmrf":
        return gmrf_cost(X, cfg.alpha)
    if cfg.family == "lp_variation":
        return lp_variation_cost(X, cfg.p)
    return gaussian_kernel_cost(X, cfg.sigma)


def cost_rows(X, cfg: CostConfig, rows=None) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (i, costs from node i to every node) one row at a time.

    For the Gaussian family ``cfg.sigma`` must already be resolved.
    """
    X = check_data(X)
    N = X.shape[1]
    if cfg.family == "gmrf":
        fn = lambda d: cfg.alpha + np.einsum("ij,ij->i", d, d) / N  # noqa: E731
    elif cfg.family == "lp_variation":
        fn = lambda d: np.mean(np.abs(d) ** cfg.p, axis=1)  # noqa: E731
    else:
        if cfg.sigma is None:
            raise ValueError("resolve sigma (e.g. median_sigma) before streaming rows")
        fn = lambda d: _gaussian_from_sq(np.einsum("ij,ij->i", d, d), cfg.sigma)  # noqa: E731
    yield from _row_blocks(X, fn, rows)


def pair_costs(X, cfg: CostConfig, pairs) -> np.ndarray:
    """Costs for an explicit list of (i, j) pairs."""
    X = check_data(X)
    pairs = np.asarray(pairs, dtype=np.intp).reshape(-1, 2)
    d = X[pairs[:, 0]] - X[pairs[:, 1]]
    if cfg.family == "gmrf":
        return cfg.alpha + np.einsum("ij,ij->i", d, d) / X.shape[1]
    if cfg.family == "lp_variation":
        return np.mean(np.abs(d) ** cfg.p, axis=1)
    sigma = cfg.sigma if cfg.sigma is not None else median_sigma(X)
    return _gaussian_from_sq(np.einsum("ij,ij->i", d, d), sigma)

"""Clustered Gaussian point clouds standing in for real feature data."""

from __future__ import annotations

import numpy as np


def make_clusters(
    n: int, k_clusters: int = 3, dim: int = 5, seed: int = 0, spread: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """``n`` points in ``k_clusters`` isotropic unit-variance blobs.

    Cluster centres are drawn from N(0, spread^2 I). Returns (X, labels) with
    labels assigned round-robin so cluster sizes differ by at most one.
    """
    if n < 2 or k_clusters < 1 or dim < 1:
        raise ValueError("need n >= 2, k_clusters >= 1, dim >= 1")
    rng = np.random.default_rng(seed)
    centres = rng.normal(0.0, spread, size=(k_clusters, dim))
    labels = np.arange(n) % k_clusters
    X = centres[labels] + rng.normal(size=(n, dim))
    return X, labels

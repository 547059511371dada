import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lapminor.costs import (
    CostConfig,
    CostOverflowError,
    cost_rows,
    cost_table,
    gaussian_kernel_cost,
    gmrf_cost,
    lp_variation_cost,
    median_sigma,
    pair_costs,
)
from lapminor.graph import laplacian


def test_gmrf_examples():
    X = np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]])
    H = gmrf_cost(X, 0.3)
    assert H[0, 1] == 0.3
    assert gmrf_cost(np.array([[0.0], [1.0]]), 0.0)[0, 1] == 1.0


def test_gmrf_trace_identity(rng):
    # sum_e h_e w_e == tr(L S) + alpha ||w||_1 with S = X X^T / N on the complete graph
    n, N, alpha = 7, 11, 0.4
    X = rng.normal(size=(n, N))
    H = gmrf_cost(X, alpha)
    iu, ju = np.triu_indices(n, 1)
    w = rng.uniform(0, 2, iu.size)
    L = laplacian(n, iu, ju, w)
    S = X @ X.T / N
    assert math.isclose(float(H[iu, ju] @ w), float(np.trace(L @ S)) + alpha * w.sum(), rel_tol=1e-12)


def test_lp_examples():
    assert lp_variation_cost(np.array([[0.0], [2.0]]), 1.0)[0, 1] == 2.0
    assert lp_variation_cost(np.array([[0.0, 0.0], [1.0, 3.0]]), 1.0)[0, 1] == 2.0


def test_lp2_equals_gmrf_without_alpha(rng):
    X = rng.normal(size=(8, 5))
    np.testing.assert_allclose(lp_variation_cost(X, 2.0), gmrf_cost(X, 0.0), rtol=1e-12, atol=1e-15)


def test_gaussian_examples():
    X = np.array([[0.0, 0.0], [0.0, 0.0], [3.0, 4.0]])
    H = gaussian_kernel_cost(X, sigma=5.0)
    assert H[0, 1] == 1.0
    assert math.isclose(H[0, 2], math.e, rel_tol=1e-15)


def test_gaussian_monotone_in_distance(rng):
    X = rng.normal(size=(12, 3))
    D = np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1))
    H = gaussian_kernel_cost(X, 1.3)
    iu = np.triu_indices(12, 1)
    order = np.argsort(D[iu])
    assert np.all(np.diff(H[iu][order]) >= 0)
    assert H[iu].min() >= 1.0


def test_gaussian_overflow():
    X = np.array([[0.0], [100.0]])
    with pytest.raises(CostOverflowError, match="increase sigma"):
        gaussian_kernel_cost(X, sigma=1.0)


def test_median_sigma():
    X = np.array([[0.0], [1.0], [3.0]])
    # distances 1, 2, 3
    assert median_sigma(X) == 2.0
    np.testing.assert_allclose(gaussian_kernel_cost(X), gaussian_kernel_cost(X, 2.0))


def test_config_validation():
    with pytest.raises(ValueError, match="explicit alpha"):
        CostConfig("gmrf")
    with pytest.raises(ValueError, match="p must be"):
        CostConfig("lp", p=0.0)
    with pytest.raises(ValueError, match="unknown cost"):
        CostConfig("cosine")
    assert CostConfig("lp").family == "lp_variation"


families = st.sampled_from(
    [CostConfig("gmrf", alpha=0.5), CostConfig("lp", p=1.5), CostConfig("gaussian", sigma=2.0)]
)


@given(seed=st.integers(0, 2**32 - 1), cfg=families)
def test_tables_symmetric_and_permutation_equivariant(seed, cfg):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(9, 4))
    H = cost_table(X, cfg)
    np.testing.assert_array_equal(H, H.T)
    p = rng.permutation(9)
    np.testing.assert_allclose(cost_table(X[p], cfg), H[np.ix_(p, p)], rtol=1e-12)


@given(seed=st.integers(0, 2**32 - 1), alpha=st.floats(0, 5))
def test_gmrf_is_lp2_plus_alpha(seed, alpha):
    X = np.random.default_rng(seed).normal(size=(6, 3))
    np.testing.assert_allclose(gmrf_cost(X, alpha), lp_variation_cost(X, 2.0) + alpha, rtol=1e-12)


@given(seed=st.integers(0, 2**32 - 1), cfg=families)
def test_rows_and_pairs_agree_with_table(seed, cfg):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(7, 3))
    H = cost_table(X, cfg)
    for i, row in cost_rows(X, cfg):
        off = np.arange(7) != i
        np.testing.assert_allclose(row[off], H[i, off], rtol=1e-12)
    pairs = [(0, 3), (6, 2)]
    np.testing.assert_allclose(pair_costs(X, cfg, pairs), [H[0, 3], H[6, 2]], rtol=1e-12)

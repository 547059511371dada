import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_connected_edge_set, random_positive_weights
from lapminor.graph import (
    DisconnectedGraphError,
    EdgeSet,
    build_laplacian,
    is_connected_support,
    log_tree_weight,
    objective,
    read_edge_tsv,
    write_edge_tsv,
)
from lapminor.reference import brute_force_omega
from lapminor.resistance import edge_resistances


def complete(n, h=1.0):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return EdgeSet(n, pairs, [h] * len(pairs))


def test_single_edge_laplacian():
    s = build_laplacian(EdgeSet(2, [(0, 1)], [1.0]), [1.0])
    np.testing.assert_array_equal(s.L, [[1, -1], [-1, 1]])
    np.testing.assert_allclose(s.Q, [[1.5, -0.5], [-0.5, 1.5]])


def test_path_laplacian():
    s = build_laplacian(EdgeSet(3, [(0, 1), (1, 2)], [1, 1]), [1, 1])
    assert np.abs(s.L.sum(axis=1)).max() <= 1e-12
    assert s.L[0, 2] == 0


def test_zero_weights_give_zero_laplacian():
    s = build_laplacian(EdgeSet(3, [(0, 1), (1, 2)], [1, 1]), [0, 0])
    assert not s.L.any()


@pytest.mark.parametrize(
    "w, msg", [([1.0, 2.0], "expected 1 weights"), ([-1.0], "nonnegative")]
)
def test_build_laplacian_rejects(w, msg):
    with pytest.raises(ValueError, match=msg):
        build_laplacian(EdgeSet(2, [(0, 1)], [1.0]), w)


def test_edge_set_validation():
    es = EdgeSet(3, [(2, 0)], [1.0])
    assert es.edges[0] == (0, 2)
    with pytest.raises(ValueError, match="self loop"):
        EdgeSet(3, [(1, 1)], [1.0])
    with pytest.raises(ValueError, match="twice"):
        EdgeSet(3, [(0, 1), (1, 0)], [1.0, 1.0])
    with pytest.raises(ValueError, match="must be positive"):
        EdgeSet(3, [(0, 1)], [0.0])
    with pytest.raises(ValueError, match="out of range"):
        EdgeSet(3, [(0, 3)], [1.0])


def test_connectivity_examples():
    path = EdgeSet(3, [(0, 1), (1, 2)], [1, 1])
    assert is_connected_support(path, [1, 1])
    assert not is_connected_support(EdgeSet(3, [(0, 1)], [1]), [1])
    tri = EdgeSet(3, [(0, 1), (1, 2), (0, 2)], [1, 1, 1])
    assert is_connected_support(tri, [1, 1, 0])
    assert not is_connected_support(tri, [1, 0, 0])


def test_log_tree_weight_counts():
    assert math.isclose(log_tree_weight(build_laplacian(complete(3), np.ones(3))), math.log(3), abs_tol=1e-12)
    assert math.isclose(log_tree_weight(build_laplacian(complete(4), np.ones(6))), math.log(16), abs_tol=1e-12)


def test_log_tree_weight_of_tree(rng):
    es = EdgeSet(5, [(0, 1), (1, 2), (1, 3), (3, 4)], np.ones(4))
    w = rng.uniform(0.1, 3.0, 4)
    assert math.isclose(log_tree_weight(build_laplacian(es, w)), np.log(w).sum(), abs_tol=1e-12)


def test_disconnected_is_refused():
    es = EdgeSet(4, [(0, 1), (2, 3)], [1, 1])
    state = build_laplacian(es, [1, 1])
    with pytest.raises(DisconnectedGraphError) as info:
        log_tree_weight(state)
    assert info.value.components == [[0, 1], [2, 3]]
    with pytest.raises(DisconnectedGraphError):
        objective(state)
    assert brute_force_omega(es, [1, 1]) == 0.0


def test_objective_two_nodes():
    s = build_laplacian(EdgeSet(2, [(0, 1)], [1.0]), [1.0])
    assert math.isclose(objective(s), -math.log(2) + 1, abs_tol=1e-14)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6))
def test_objective_on_tree_at_inverse_costs(seed, n):
    rng = np.random.default_rng(seed)
    pairs = [(int(rng.integers(k)), k) for k in range(1, n)]
    h = rng.uniform(0.1, 5.0, n - 1)
    state = build_laplacian(EdgeSet(n, pairs, h), 1.0 / h)
    expected = -math.log(n) + np.log(h).sum() + (n - 1)
    assert math.isclose(objective(state), expected, abs_tol=1e-10)


@given(seed=st.integers(0, 2**32 - 1), c=st.floats(0.1, 10.0))
def test_objective_tree_scaling(seed, c):
    rng = np.random.default_rng(seed)
    n = 5
    pairs = [(int(rng.integers(k)), k) for k in range(1, n)]
    h = rng.uniform(0.1, 5.0, n - 1)
    w = rng.uniform(0.1, 2.0, n - 1)
    es = EdgeSet(n, pairs, h)
    diff = objective(build_laplacian(es, c * w)) - objective(build_laplacian(es, w))
    expected = -(n - 1) * math.log(c) + (c - 1) * float(h @ w)
    assert math.isclose(diff, expected, abs_tol=1e-9)


@settings(max_examples=60)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(3, 7))
def test_matrix_tree_matches_enumeration(seed, n):
    rng = np.random.default_rng(seed)
    es = random_connected_edge_set(rng, n)
    w = random_positive_weights(rng, es.m)
    omega = math.exp(log_tree_weight(build_laplacian(es, w)))
    assert math.isclose(omega, brute_force_omega(es, w), rel_tol=1e-9)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 12), c=st.floats(0.05, 20.0))
def test_weight_scaling_adds_log_c(seed, n, c):
    rng = np.random.default_rng(seed)
    es = random_connected_edge_set(rng, n)
    w = random_positive_weights(rng, es.m)
    a = log_tree_weight(build_laplacian(es, w))
    b = log_tree_weight(build_laplacian(es, c * w))
    assert math.isclose(b - a, (n - 1) * math.log(c), abs_tol=1e-9)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 15))
def test_foster_identity(seed, n):
    rng = np.random.default_rng(seed)
    es = random_connected_edge_set(rng, n, density=0.3)
    w = random_positive_weights(rng, es.m)
    w[rng.random(es.m) < 0.2] = 0.0
    state = build_laplacian(es, w)
    if not is_connected_support(es, w):
        return
    assert abs(float(w @ edge_resistances(state)) - (n - 1)) <= 1e-8


def test_edge_tsv_round_trip(tmp_path, rng):
    es = random_connected_edge_set(rng, 6)
    w = random_positive_weights(rng, es.m)
    r = edge_resistances(build_laplacian(es, w))
    path = tmp_path / "edges.tsv"
    write_edge_tsv(path, es, w, r)
    assert path.read_text().splitlines()[0] == f"# n=6 m={es.m}"
    es2, w2, r2 = read_edge_tsv(path)
    assert es2.edges == es.edges
    np.testing.assert_array_equal(es2.costs, es.costs)
    np.testing.assert_array_equal(w2, w)
    np.testing.assert_array_equal(r2, r)

import numpy as np
import pytest

from lapminor.graph import EdgeSet

ACCEPTANCE_LINES = []


def random_connected_edge_set(rng, n, density=0.5, cost_range=(0.2, 3.0)):
    """Random spanning tree plus each remaining pair with probability ``density``."""
    perm = rng.permutation(n)
    pairs = set()
    for k in range(1, n):
        a, b = perm[k], perm[rng.integers(k)]
        pairs.add((min(a, b), max(a, b)))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                pairs.add((i, j))
    pairs = sorted(pairs)
    h = rng.uniform(*cost_range, size=len(pairs))
    return EdgeSet(n, pairs, h)


def random_positive_weights(rng, m, high=2.0):
    # uniform on (0, high]
    return high - rng.uniform(0.0, high, size=m)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

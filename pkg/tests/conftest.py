import numpy as np
import pytest

from dycla.graph import GraphSnapshot


def random_small_graph(rng, n_min=3, n_max=6, p=0.3, max_edges=12, directed=True):
    """Random graph small enough for exhaustive live-edge enumeration."""
    n = int(rng.integers(n_min, n_max + 1))
    while True:
        mask = rng.random((n, n)) < p
        np.fill_diagonal(mask, False)
        if not directed:
            mask = np.triu(mask, 1)
        edges = [(int(u), int(v)) for u, v in zip(*np.nonzero(mask))]
        stored = len(edges) if directed else 2 * len(edges)
        if 1 <= stored <= max_edges:
            return GraphSnapshot(n, edges, directed)


@pytest.fixture
def star():
    """Directed star 0 -> {1, 2, 3}; every edge fires with probability 1."""
    return GraphSnapshot(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def half_graph():
    """0 -> 1 <- 2: seed {0} reaches 1 with probability 1/2."""
    return GraphSnapshot(3, [(0, 1), (2, 1)])


# one line per acceptance criterion, echoed after the test summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

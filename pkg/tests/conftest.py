import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cfcc import generators as gen
from cfcc.graph import Graph

settings.register_profile("cfcc", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("cfcc")


@st.composite
def connected_graphs(draw, min_n=2, max_n=12, weighted=True):
    """A random spanning tree plus random extra edges, optionally weighted."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    parents = [int(rng.integers(0, i)) for i in range(1, n)]
    u = list(range(1, n))
    v = parents
    extra = int(rng.integers(0, n * (n - 1) // 2 + 1))
    u += rng.integers(0, n, extra).tolist()
    v += rng.integers(0, n, extra).tolist()
    w = rng.uniform(0.5, 2.0, len(u)) if weighted and draw(st.booleans()) else None
    return Graph.from_arrays(n, u, v, w)


@st.composite
def graph_with_group(draw, min_n=3, max_n=12, max_size=None):
    """A connected graph and a nonempty proper vertex subset."""
    g = draw(connected_graphs(min_n=min_n, max_n=max_n))
    limit = g.n - 1 if max_size is None else min(max_size, g.n - 1)
    size = draw(st.integers(1, limit))
    S = draw(st.permutations(range(g.n)))[:size]
    return g, sorted(S)


@pytest.fixture
def p3():
    return gen.path(3)


@pytest.fixture
def p4():
    return gen.path(4)


@pytest.fixture
def k3():
    return gen.complete(3)


@pytest.fixture
def k4():
    return gen.complete(4)


@pytest.fixture
def k33():
    return gen.complete_bipartite(3, 3)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("tests.test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)

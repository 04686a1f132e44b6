import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cfcc import generators as gen
from cfcc.centrality import (
    ClosenessValue,
    er_sum_exact,
    group_closeness,
    group_closeness_exact,
    marginal_gain_exact,
    marginal_gains_exact,
    prefix_traces,
)
from cfcc.errors import NumericalDegeneracyError, PreconditionError
from cfcc.graph import Graph
from cfcc.laplacian import assemble, dense_inverse, ground, pseudoinverse
from cfcc.oracle import grounded_trace, pairwise_er_sums

from .conftest import connected_graphs, graph_with_group


@pytest.mark.parametrize("g, S, trace, closeness", [
    (gen.path(3), [1], 2.0, 1.5),
    (gen.path(3), [0], 3.0, 1.0),
    (gen.complete(4), [0, 1, 2], 1 / 3, 12.0),
])
@pytest.mark.parametrize("method", ["dense", "solve"])
def test_group_closeness_examples(g, S, trace, closeness, method):
    val = group_closeness_exact(g, S, method)
    assert val.trace == pytest.approx(trace, rel=1e-9)
    assert val.closeness == pytest.approx(closeness, rel=1e-9)
    assert val.closeness * val.trace == pytest.approx(g.n, rel=1e-12)
    assert val.vertices == frozenset(S)


def test_group_closeness_hutchinson_on_constant_form(p3):
    val = group_closeness(p3, [1], "hutchinson", probes=5, rng=0)
    assert val.closeness == pytest.approx(1.5, abs=1e-12)
    assert val.method == "hutchinson"


@pytest.mark.parametrize("S", [[], [0, 1, 2], [7]])
def test_group_closeness_rejects_bad_groups(p3, S):
    with pytest.raises(PreconditionError):
        group_closeness_exact(p3, S)


def test_group_closeness_rejects_disconnected():
    g = Graph.from_edges(4, [(0, 1, 1), (2, 3, 1)])
    with pytest.raises(PreconditionError):
        group_closeness_exact(g, [0])


def test_closeness_value_needs_positive_trace():
    with pytest.raises(NumericalDegeneracyError):
        ClosenessValue.from_trace(3, [0], 0.0)


@pytest.mark.parametrize("g, expected", [
    (gen.path(3), [3, 2, 3]),
    (gen.complete(3), [4 / 3] * 3),
    (gen.path(2), [1, 1]),
])
def test_er_sum_examples(g, expected):
    np.testing.assert_allclose(er_sum_exact(g, pseudoinverse(assemble(g))), expected, rtol=1e-12)


def test_er_sum_rejects_wrong_shape(p3):
    with pytest.raises(PreconditionError):
        er_sum_exact(p3, np.eye(2))


@given(connected_graphs(min_n=2, max_n=14))
def test_er_sum_matches_pairwise_definition(g):
    fast = er_sum_exact(g, pseudoinverse(assemble(g)))
    np.testing.assert_allclose(fast, pairwise_er_sums(g), rtol=1e-9)


@given(connected_graphs(min_n=2, max_n=12))
def test_singleton_closeness_is_n_over_er_sum(g):
    er = pairwise_er_sums(g)
    for u in range(g.n):
        assert group_closeness_exact(g, [u]).closeness == pytest.approx(g.n / er[u], rel=1e-9)


def test_marginal_gain_examples(p3, p4):
    inv = dense_inverse(ground(assemble(p3), [1]))
    assert marginal_gain_exact(inv, 0) == pytest.approx(1.0)
    inv = dense_inverse(ground(assemble(p4), [1]))
    gains = {u: marginal_gain_exact(inv, u) for u in (0, 2, 3)}
    assert gains == pytest.approx({0: 1.0, 2: 2.0, 3: 2.5})
    assert grounded_trace(p4, [1]) - grounded_trace(p4, [1, 3]) == pytest.approx(2.5)
    with pytest.raises(PreconditionError):
        marginal_gain_exact(inv, 1)


@given(graph_with_group(min_n=3, max_n=12, max_size=4), st.data())
def test_gain_formula_equals_trace_difference(case, data):
    g, S = case
    rest = [u for u in range(g.n) if u not in S]
    assume(len(rest) >= 2)
    u = data.draw(st.sampled_from(rest))
    inv = dense_inverse(ground(assemble(g), S))
    direct = grounded_trace(g, S) - grounded_trace(g, S + [u])
    assert marginal_gain_exact(inv, u) == pytest.approx(direct, rel=1e-9, abs=1e-9)
    vec = marginal_gains_exact(inv)
    assert vec[inv.position[u]] == pytest.approx(direct, rel=1e-9, abs=1e-9)


@given(connected_graphs(min_n=4, max_n=12), st.data())
def test_trace_is_monotone_and_supermodular(g, data):
    perm = data.draw(st.permutations(range(g.n)))
    t = data.draw(st.integers(1, g.n - 2))
    s = data.draw(st.integers(1, t))
    S, T, w = sorted(perm[:s]), sorted(perm[:t]), perm[t]
    assert grounded_trace(g, S) >= grounded_trace(g, T) - 1e-9
    gain_S = grounded_trace(g, S) - grounded_trace(g, S + [w])
    gain_T = grounded_trace(g, T) - grounded_trace(g, T + [w])
    assert gain_S >= gain_T - 1e-9


def test_prefix_traces_dense_and_hutchinson_agree():
    g = gen.random_connected(40, 0.15, 4)
    order = [3, 17, 25, 8]
    dense, m1 = prefix_traces(g, order, "dense")
    assert m1 == "dense"
    expected = [grounded_trace(g, order[:i]) for i in range(1, 5)]
    np.testing.assert_allclose(dense, expected, rtol=1e-10)
    est, m2 = prefix_traces(g, order, "hutchinson", probes=400, rng=2)
    assert m2 == "hutchinson"
    np.testing.assert_allclose(est, expected, rtol=0.1)
    _, m3 = prefix_traces(g, order, "auto", cap=10)
    assert m3 == "hutchinson"

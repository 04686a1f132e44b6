"""Simple selection heuristics to compare the greedy algorithms against."""

from __future__ import annotations

import time

import numpy as np

from .centrality import er_sum_exact, prefix_traces
from .graph import Graph
from .greedy_exact import Selection, _check_k
from .laplacian import DENSE_CAP, assemble, pseudoinverse
from .sketch import SketchConfig, er_sums_est

__all__ = ["random_selection", "top_degree", "top_centrality", "single_closeness"]


def _finish(g, chosen, elapsed, name, config, evaluate, cap, probes, seed, scores=()):
    traces, method = [], "none"
    if evaluate != "none":
        traces, method = prefix_traces(g, chosen, evaluate, cap=cap, probes=probes,
                                       rng=np.random.default_rng(seed))
    return Selection(
        vertices=[int(u) for u in chosen],
        traces=traces,
        closeness=[g.n / t for t in traces],
        step_times=[elapsed],
        algorithm=name,
        config=config,
        scores=[float(s) for s in scores],
        trace_method=method,
    )


def random_selection(g: Graph, k: int, seed: int = 42, *, evaluate: str = "auto",
                     cap: int = DENSE_CAP, probes: int = 100) -> Selection:
    """``k`` distinct vertices uniformly at random."""
    _check_k(g, k)
    t0 = time.perf_counter()
    chosen = np.random.default_rng(seed).choice(g.n, size=k, replace=False)
    elapsed = time.perf_counter() - t0
    return _finish(g, chosen, elapsed, "random", {"k": k, "seed": seed}, evaluate, cap, probes, seed)


def top_degree(g: Graph, k: int, *, evaluate: str = "auto", cap: int = DENSE_CAP,
               probes: int = 100, seed: int = 42) -> Selection:
    """The ``k`` vertices of largest weighted degree, ties to the smaller id."""
    _check_k(g, k)
    t0 = time.perf_counter()
    deg = g.degrees
    chosen = np.lexsort((np.arange(g.n), -deg))[:k]
    elapsed = time.perf_counter() - t0
    return _finish(g, chosen, elapsed, "top-degree", {"k": k}, evaluate, cap, probes, seed,
                   deg[chosen])


def single_closeness(g: Graph, *, cap: int = DENSE_CAP, cfg: SketchConfig | None = None) -> np.ndarray:
    """``C(u) = n / sum_v er(u, v)`` for every vertex.

    Exact through the pseudoinverse when ``n <= cap``, otherwise estimated
    with the sketched resistance sums.
    """
    if g.n <= cap:
        er = er_sum_exact(g, pseudoinverse(assemble(g), cap))
    else:
        er = er_sums_est(g, cfg or SketchConfig())
    return g.n / er


def top_centrality(g: Graph, k: int, *, evaluate: str = "auto", cap: int = DENSE_CAP,
                   probes: int = 100, cfg: SketchConfig | None = None, seed: int = 42) -> Selection:
    """The ``k`` vertices of largest individual closeness, ties to the smaller id."""
    _check_k(g, k)
    t0 = time.perf_counter()
    c = single_closeness(g, cap=cap, cfg=cfg)
    chosen = np.lexsort((np.arange(g.n), -c))[:k]
    elapsed = time.perf_counter() - t0
    return _finish(g, chosen, elapsed, "top-cent", {"k": k}, evaluate, cap, probes, seed, c[chosen])

"""Randomized greedy selection driven by sketched estimates.

The first vertex minimizes estimated effective-resistance sums; each later
vertex maximizes estimated marginal gains. Every estimate costs a batch of
Laplacian solves, so a run is nearly linear in the number of edges.
"""

from __future__ import annotations

import time

import numpy as np

from .centrality import prefix_traces
from .graph import Graph
from .greedy_exact import Selection, _check_k, pick_best
from .laplacian import DENSE_CAP, SolveStats
from .sketch import SketchConfig, er_sums_est, gains_est, with_epsilon

__all__ = ["approx_greedy", "EVALUATIONS"]

EVALUATIONS = ("auto", "dense", "hutchinson", "none")


def approx_greedy(g: Graph, k: int, cfg: SketchConfig | None = None, rng=None, *,
                  evaluate: str = "auto", cap: int = DENSE_CAP, probes: int = 100,
                  stats: SolveStats | None = None) -> Selection:
    """Pick ``k`` vertices with sketched effective-resistance sums and gains.

    Parameters
    ----------
    g : Graph
        Connected input graph.
    k : int
        Number of vertices, ``1 <= k < n``.
    cfg : SketchConfig
        ``cfg.epsilon`` is the overall accuracy; the first step runs the
        resistance-sum estimator at ``epsilon / 3`` and the gain steps at
        ``epsilon / 2``.
    rng : int or numpy.random.SeedSequence, optional
        Master seed; defaults to ``cfg.seed``. Step ``i`` uses the child
        stream with spawn key ``(i,)``, so steps are independent and runs
        are reproducible.
    evaluate : {"auto", "dense", "hutchinson", "none"}
        How prefix traces are reported after selection. ``"auto"`` uses
        dense inversion when ``n - 1 <= cap`` and Hutchinson otherwise.
    stats : SolveStats, optional
        Accumulates iteration counts and residuals of the selection solves.
    """
    cfg = cfg or SketchConfig()
    _check_k(g, k)
    if evaluate not in EVALUATIONS:
        raise ValueError(f"unknown evaluation {evaluate!r}")
    root = rng if isinstance(rng, np.random.SeedSequence) else np.random.SeedSequence(
        cfg.seed if rng is None else rng)

    def substream(i):
        return np.random.SeedSequence(root.entropy, spawn_key=root.spawn_key + (i,))

    stats = stats if stats is not None else SolveStats()
    times, scores = [], []

    t0 = time.perf_counter()
    r = er_sums_est(g, with_epsilon(cfg, cfg.epsilon / 3), substream(0), stats=stats)
    u = pick_best(r, maximize=False)
    chosen = [u]
    scores.append(float(r[u]))
    times.append(time.perf_counter() - t0)

    gain_cfg = with_epsilon(cfg, cfg.epsilon / 2)
    for i in range(1, k):
        t0 = time.perf_counter()
        gains = gains_est(g, chosen, gain_cfg, substream(i), stats=stats)
        u = pick_best(gains, maximize=True)
        chosen.append(u)
        scores.append(float(gains[u]))
        times.append(time.perf_counter() - t0)

    config = {"k": k, **cfg.as_dict(), "solve_stats": stats.as_dict()}
    traces: list[float] = []
    method = "none"
    if evaluate != "none":
        traces, method = prefix_traces(g, chosen, evaluate, cap=cap, probes=probes,
                                       rng=np.random.default_rng(substream(k)),
                                       solver=cfg.solver)
    return Selection(
        vertices=chosen,
        traces=traces,
        closeness=[g.n / t for t in traces],
        step_times=times,
        algorithm="approx",
        config=config,
        scores=scores,
        trace_method=method,
    )

"""Exact group current-flow closeness, effective-resistance sums and gains.

The closeness of a vertex group ``S`` is ``C(S) = n / tr(L_{-S}^{-1})``: the
diagonal entry of ``L_{-S}^{-1}`` at ``u`` is the effective resistance
between ``u`` and the grounded set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NumericalDegeneracyError, PreconditionError
from .graph import Graph
from .laplacian import (
    DENSE_CAP,
    DenseInverse,
    Solver,
    SolveStats,
    assemble,
    dense_inverse,
    ground,
    hutchinson_trace,
    rank1_ground_update,
)

__all__ = [
    "ClosenessValue",
    "group_closeness_exact",
    "group_closeness",
    "er_sum_exact",
    "marginal_gain_exact",
    "marginal_gains_exact",
    "prefix_traces",
]


@dataclass(frozen=True)
class ClosenessValue:
    vertices: frozenset
    trace: float
    closeness: float
    method: str = "dense"
    stderr: float = 0.0

    @classmethod
    def from_trace(cls, n, S, trace, method="dense", stderr=0.0):
        if not trace > 0:
            raise NumericalDegeneracyError(f"trace {trace!r} must be positive")
        return cls(frozenset(S), float(trace), n / float(trace), method, stderr)


def _check_group(g: Graph, S) -> frozenset:
    S = frozenset(int(u) for u in S)
    if not S:
        raise PreconditionError("vertex group must be nonempty")
    if len(S) >= g.n:
        raise PreconditionError("vertex group must be a proper subset of V")
    if min(S) < 0 or max(S) >= g.n:
        raise PreconditionError("vertex id out of range")
    if not g.is_connected():
        raise PreconditionError("group closeness requires a connected graph")
    return S


def group_closeness_exact(g: Graph, S: Iterable[int], method: str = "auto", *,
                          cap: int = DENSE_CAP, solver: str = "jacobi",
                          delta: float = 1e-8) -> ClosenessValue:
    """``C(S)`` from the exact trace of ``L_{-S}^{-1}``.

    ``method="dense"`` inverts ``L_{-S}``; ``"solve"`` sums
    ``e_u^T L_{-S}^{-1} e_u`` over per-vertex solves (tolerance ``delta``);
    ``"auto"`` picks dense below ``cap``.
    """
    S = _check_group(g, S)
    gl = ground(assemble(g), S)
    if method == "auto":
        method = "dense" if gl.dim <= cap else "solve"
    if method == "dense":
        trace = dense_inverse(gl, cap).trace()
    elif method == "solve":
        slv = Solver(gl, method=solver)
        trace = 0.0
        step = slv.block_size
        for s in range(0, gl.dim, step):
            e = min(s + step, gl.dim)
            E = np.zeros((gl.dim, e - s))
            E[np.arange(s, e), np.arange(e - s)] = 1.0
            X = slv(E, delta, certified=False)
            trace += float(X[np.arange(s, e), np.arange(e - s)].sum())
    else:
        raise PreconditionError(f"unknown method {method!r}")
    return ClosenessValue.from_trace(g.n, S, trace, method)


def group_closeness(g: Graph, S: Iterable[int], method: str = "auto", *, probes: int = 100,
                    rng=None, cap: int = DENSE_CAP, solver: str = "jacobi",
                    delta: float = 1e-8) -> ClosenessValue:
    """Like :func:`group_closeness_exact` but also accepts ``method="hutchinson"``."""
    if method != "hutchinson":
        return group_closeness_exact(g, S, method, cap=cap, solver=solver, delta=delta)
    S = _check_group(g, S)
    est = hutchinson_trace(ground(assemble(g), S), probes, delta, rng, method=solver)
    return ClosenessValue.from_trace(g.n, S, est.trace, "hutchinson", est.stderr)


def er_sum_exact(g: Graph, Ldag: np.ndarray) -> np.ndarray:
    """``sum_v er(u, v)`` for every ``u`` from a dense pseudoinverse."""
    n = g.n
    if Ldag.shape != (n, n):
        raise PreconditionError("pseudoinverse shape does not match the graph")
    diag = np.diagonal(Ldag)
    return n * diag + diag.sum()


def marginal_gain_exact(inv: DenseInverse, u: int) -> float:
    """``tr(L_{-S}^{-1}) - tr(L_{-(S+u)}^{-1}) = |inv e_u|^2 / inv[u, u]``."""
    if u in inv.grounded:
        raise PreconditionError(f"vertex {u} is already grounded")
    col = inv.matrix[:, inv.position[u]]
    return float(col @ col / col[inv.position[u]])


def marginal_gains_exact(inv: DenseInverse) -> np.ndarray:
    """Gains of all non-grounded vertices, aligned with ``inv.vertices``."""
    M = inv.matrix
    return np.einsum("ij,ij->j", M, M) / np.diagonal(M)


def prefix_traces(g: Graph, order: Sequence[int], method: str = "auto", *, cap: int = DENSE_CAP,
                  probes: int = 100, rng=None, solver: str = "jacobi", delta: float = 1e-8,
                  stats: SolveStats | None = None) -> tuple[list[float], str]:
    """``tr(L_{-S_i}^{-1})`` for every prefix ``S_i`` of ``order``.

    ``"dense"`` inverts once for the first vertex and then applies rank-one
    updates; ``"hutchinson"`` estimates each prefix independently. ``"auto"``
    chooses dense when ``n - 1 <= cap``. Returns the traces and the method used.
    """
    L = assemble(g)
    if method == "auto":
        method = "dense" if g.n - 1 <= cap else "hutchinson"
    traces = []
    if method == "dense":
        inv = dense_inverse(ground(L, [order[0]]), cap)
        traces.append(inv.trace())
        for u in order[1:]:
            inv = rank1_ground_update(inv, int(u))
            traces.append(inv.trace())
    elif method == "hutchinson":
        rng = np.random.default_rng(rng)
        for i in range(1, len(order) + 1):
            est = hutchinson_trace(ground(L, order[:i]), probes, delta, rng, method=solver, stats=stats)
            traces.append(est.trace)
    else:
        raise PreconditionError(f"unknown evaluation method {method!r}")
    return traces, method

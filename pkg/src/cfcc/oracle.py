"""Brute-force references for small graphs.

Everything here recomputes from scratch with ``numpy.linalg`` (general LU
inverse and SVD pseudoinverse), sharing no code path with the Cholesky
inverses and rank-one updates used by the selection algorithms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .centrality import ClosenessValue
from .errors import EnumerationCapError, PreconditionError
from .graph import Graph
from .greedy_exact import Selection, _check_k, pick_best

__all__ = [
    "ENUMERATION_CAP",
    "dense_laplacian",
    "grounded_trace",
    "pairwise_er_sums",
    "brute_force_optimum",
    "naive_greedy",
    "Violation",
    "SupermodularityReport",
    "check_monotone_supermodular",
    "is_vertex_cover",
    "CoverVerdict",
    "vertex_cover_equality_check",
]

ENUMERATION_CAP = 2_000_000
COVER_TOL = 1e-9
CHAIN_TOL = 1e-9


def dense_laplacian(g: Graph) -> np.ndarray:
    L = np.zeros((g.n, g.n))
    for u, v, w in g.edges:
        L[u, v] -= w
        L[v, u] -= w
        L[u, u] += w
        L[v, v] += w
    return L


def _keep(n, S):
    keep = np.ones(n, dtype=bool)
    keep[list(S)] = False
    return np.flatnonzero(keep)


def _grounded_inverse(L: np.ndarray, S) -> tuple[np.ndarray, np.ndarray]:
    idx = _keep(L.shape[0], S)
    return np.linalg.inv(L[np.ix_(idx, idx)]), idx


def grounded_trace(g: Graph, S) -> float:
    """``tr(L_{-S}^{-1})`` by a general dense inverse."""
    inv, _ = _grounded_inverse(dense_laplacian(g), S)
    return float(np.trace(inv))


def pairwise_er_sums(g: Graph) -> np.ndarray:
    """``sum_v (e_u - e_v)^T L^+ (e_u - e_v)`` summed pair by pair."""
    P = np.linalg.pinv(dense_laplacian(g), hermitian=True)
    d = np.diagonal(P)
    er = d[:, None] + d[None, :] - 2 * P
    return er.sum(axis=1)


def brute_force_optimum(g: Graph, k: int, *, cap: int = ENUMERATION_CAP) -> tuple[tuple[int, ...], ClosenessValue]:
    """Best ``k``-subset by exhaustive search; ties to the lexicographically smallest set."""
    _check_k(g, k)
    total = math.comb(g.n, k)
    if total > cap:
        raise EnumerationCapError(f"C({g.n},{k}) = {total} subsets exceeds the enumeration cap {cap}")
    L = dense_laplacian(g)
    subsets = list(itertools.combinations(range(g.n), k))
    d = g.n - k
    traces = np.empty(total)
    batch = max(1, 4_000_000 // max(d * d, 1))
    for s in range(0, total, batch):
        chunk = subsets[s:s + batch]
        idx = np.array([_keep(g.n, S) for S in chunk])
        mats = L[idx[:, :, None], idx[:, None, :]]
        traces[s:s + len(chunk)] = np.trace(np.linalg.inv(mats), axis1=1, axis2=2)
    best = pick_best(traces, maximize=False)
    S = subsets[best]
    return S, ClosenessValue.from_trace(g.n, S, traces[best], "brute-force")


def naive_greedy(g: Graph, k: int) -> Selection:
    """Greedy with a fresh inverse for every candidate at every step."""
    _check_k(g, k)
    L = dense_laplacian(g)
    chosen: list[int] = []
    traces, scores = [], []
    current = None
    for _ in range(k):
        cand = np.full(g.n, np.nan)
        for w in range(g.n):
            if w not in chosen:
                inv, _ = _grounded_inverse(L, chosen + [w])
                cand[w] = np.trace(inv)
        if current is None:
            u = pick_best(cand, maximize=False)
            scores.append(float(cand[u]))
        else:
            gains = current - cand
            u = pick_best(gains, maximize=True)
            scores.append(float(gains[u]))
        chosen.append(u)
        current = float(cand[u])
        traces.append(current)
    return Selection(chosen, traces, [g.n / t for t in traces], [], "naive", {"k": k}, scores, "exact")


@dataclass(frozen=True)
class Violation:
    """A sampled chain ``S <= T``, ``w`` not in ``T`` breaking a claimed inequality."""

    kind: str
    S: tuple
    T: tuple
    w: int
    lhs: float
    rhs: float
    entry: tuple | None = None


@dataclass
class SupermodularityReport:
    trials: int = 0
    entry_checks: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_monotone_supermodular(g: Graph, trials: int, rng=None, *, entries_per_trial: int = 3,
                                tol: float = CHAIN_TOL) -> SupermodularityReport:
    """Sample chains ``S <= T``, ``w`` outside ``T`` and test the trace and its entries.

    For the trace: ``tr(S) >= tr(T)`` and
    ``tr(S) - tr(S+w) >= tr(T) - tr(T+w)``. For random ``(u, v)`` outside
    ``T + w`` the same two inequalities are tested entrywise on the inverses.
    """
    n = g.n
    if n > 12:
        raise PreconditionError("check_monotone_supermodular is meant for n <= 12")
    if n < 3 or not g.is_connected():
        raise PreconditionError("need a connected graph with at least 3 vertices")
    rng = np.random.default_rng(rng)
    L = dense_laplacian(g)
    report = SupermodularityReport()

    def full(S):
        inv, idx = _grounded_inverse(L, S)
        out = np.zeros((n, n))
        out[np.ix_(idx, idx)] = inv
        return out

    for _ in range(trials):
        perm = rng.permutation(n)
        t_size = int(rng.integers(1, n - 1))
        s_size = int(rng.integers(1, t_size + 1))
        T = tuple(sorted(int(x) for x in perm[:t_size]))
        S = tuple(sorted(int(x) for x in rng.choice(T, s_size, replace=False)))
        w = int(perm[t_size])
        iS, iT = full(S), full(T)
        iSw, iTw = full(S + (w,)), full(T + (w,))
        report.trials += 1
        trS, trT, trSw, trTw = (float(np.trace(m)) for m in (iS, iT, iSw, iTw))
        if trS < trT - tol:
            report.violations.append(Violation("monotone", S, T, w, trS, trT))
        if trS - trSw < trT - trTw - tol:
            report.violations.append(Violation("supermodular", S, T, w, trS - trSw, trT - trTw))
        outside = perm[t_size + 1:]
        for _ in range(entries_per_trial if len(outside) else 0):
            u, v = (int(x) for x in rng.choice(outside, 2))
            report.entry_checks += 1
            if iS[u, v] < iT[u, v] - tol:
                report.violations.append(Violation("entry-monotone", S, T, w, iS[u, v], iT[u, v], (u, v)))
            lhs, rhs = iS[u, v] - iSw[u, v], iT[u, v] - iTw[u, v]
            if lhs < rhs - tol:
                report.violations.append(Violation("entry-supermodular", S, T, w, lhs, rhs, (u, v)))
    return report


def is_vertex_cover(g: Graph, S) -> bool:
    """Direct edge test: every edge has an endpoint in ``S``."""
    mark = np.zeros(g.n, dtype=bool)
    mark[list(S)] = True
    return bool(np.all(mark[g.heads] | mark[g.tails]))


@dataclass(frozen=True)
class CoverVerdict:
    equality: bool
    is_cover: bool
    closeness: float
    bound: float

    @property
    def agrees(self) -> bool:
        return self.equality == self.is_cover


def vertex_cover_equality_check(g: Graph, S, *, tol: float = COVER_TOL) -> CoverVerdict:
    """Compare ``C(S)`` with ``3n/(n - |S|)`` on a connected unit-weight 3-regular graph."""
    if not g.is_connected() or not np.all(g.edge_counts == 3) or g.w_min != 1.0 or g.w_max != 1.0:
        raise PreconditionError("vertex_cover_equality_check needs a connected unit-weight 3-regular graph")
    S = sorted(set(int(u) for u in S))
    if not S or len(S) >= g.n:
        raise PreconditionError("S must be a nonempty proper subset")
    c = g.n / grounded_trace(g, S)
    bound = 3 * g.n / (g.n - len(S))
    return CoverVerdict(abs(c - bound) <= tol, is_vertex_cover(g, S), c, bound)

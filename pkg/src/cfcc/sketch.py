"""Johnson-Lindenstrauss estimators for effective-resistance sums and gains.

Both estimators write the wanted quantity as a squared column norm of a
matrix ``M S^{-1}`` (``S`` a Laplacian or grounded Laplacian), then shrink
``M`` to a few rows with a random Gaussian projection and compute the
product with one linear solve per projected row.

Two degenerate modes exist for testing: ``projection="identity"`` replaces
the random projection by the identity (no dimension reduction) and
``exact_solves=True`` replaces iterative solves by dense Cholesky. With both
switched on the estimates equal the exact quantities up to round-off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .errors import PreconditionError
from .graph import Graph
from .laplacian import GroundedLaplacian, Solver, SolveStats, assemble, ground, incidence, sddm_split

__all__ = [
    "SketchConfig",
    "JlSketch",
    "gaussian_projection",
    "sketch_rows",
    "ersums_delta",
    "gains_deltas",
    "er_sums_est",
    "gains_est",
    "gains_parts",
]

# Columns of a projection are drawn in chunks of this many, so large
# projections never need to exist in memory at once.
_CHUNK = 4096
DELTA_FLOOR = 1e-12


@dataclass(frozen=True)
class SketchConfig:
    """Accuracy and randomness settings for the sketch estimators.

    Attributes
    ----------
    epsilon : float
        Target relative accuracy, ``0 < epsilon <= 1/2``.
    jl_factor : float or None
        Projection rows per ``ln n``. ``None`` uses the row count from the
        JL bound, which is enormous for small ``epsilon``.
    delta : float or None
        Relative residual for every solve. ``None`` selects the worst-case
        schedules (clamped below at ``1e-12``) with certified stopping.
    seed : int
        Master seed, used whenever no explicit generator is passed.
    projection : {"gaussian", "identity"}
    exact_solves : bool
        Dense Cholesky instead of iterative solves.
    solver : {"jacobi", "lu", "dense"}
    """

    epsilon: float = 0.3
    jl_factor: float | None = 20.0
    delta: float | None = 1e-8
    seed: int = 42
    projection: str = "gaussian"
    exact_solves: bool = False
    solver: str = "jacobi"
    maxiter: int | None = None

    def __post_init__(self):
        if not 0 < self.epsilon <= 0.5:
            raise PreconditionError(f"epsilon must lie in (0, 1/2], got {self.epsilon}")
        if self.jl_factor is not None and not self.jl_factor > 0:
            raise PreconditionError("jl_factor must be positive")
        if self.delta is not None and not self.delta > 0:
            raise PreconditionError("delta must be positive")
        if self.projection not in ("gaussian", "identity"):
            raise PreconditionError(f"unknown projection {self.projection!r}")

    @property
    def solver_method(self) -> str:
        return "dense" if self.exact_solves else self.solver

    def as_dict(self) -> dict:
        return {
            "epsilon": self.epsilon, "jl_factor": self.jl_factor, "delta": self.delta,
            "seed": self.seed, "projection": self.projection, "exact_solves": self.exact_solves,
            "solver": self.solver,
        }


@dataclass(frozen=True, eq=False)
class JlSketch:
    """A ``q x d`` Gaussian matrix with unit-norm columns."""

    q: int
    matrix: np.ndarray
    seed: object = None


def _gaussian_chunks(q, d, rng):
    """Yield ``(start, stop, G)`` with ``G = Q[:, start:stop].T``."""
    for s in range(0, d, _CHUNK):
        e = min(s + _CHUNK, d)
        G = rng.standard_normal((e - s, q))
        G /= np.linalg.norm(G, axis=1, keepdims=True)
        yield s, e, G


def gaussian_projection(q: int, d: int, rng=None) -> JlSketch:
    """Draw ``N(0, 1)`` entries, then scale every column to unit length."""
    if q < 1 or d < 1:
        raise PreconditionError("projection dimensions must be positive")
    seed = rng if not isinstance(rng, np.random.Generator) else None
    rng = np.random.default_rng(rng)
    Q = np.empty((q, d))
    for s, e, G in _gaussian_chunks(q, d, rng):
        Q[:, s:e] = G.T
    return JlSketch(q, Q, seed)


def sketch_rows(n: int, epsilon: float, jl_factor: float | None) -> int:
    """Projection rows: ``ceil(jl_factor ln n)`` or the JL bound for ``epsilon``."""
    logn = math.log(max(n, 2))
    if jl_factor is not None:
        return max(1, math.ceil(jl_factor * logn))
    return math.ceil(4.0 / (epsilon**2 / 2 - epsilon**3 / 3) * logn)


def ersums_delta(n, epsilon, w_min, w_max) -> float:
    eps = epsilon
    d = eps / (9 * n**2) * math.sqrt((1 - eps / 3) * w_min / ((1 + eps / 3) * w_max))
    return max(d, DELTA_FLOOR)


def gains_deltas(n, epsilon, w_min, w_max) -> tuple[float, float, float]:
    eps = epsilon
    d1 = w_min * eps / (27 * w_max * n**4) * math.sqrt((1 - eps / 9) / ((1 + eps / 9) * n))
    d2 = 1.0 / (4 * n**4 * w_max) * math.sqrt(eps * w_min**1.5 / (9 * n))
    d1, d2 = max(d1, DELTA_FLOOR), max(d2, DELTA_FLOOR)
    return d1, d2, d2


def _streams(rng, seed, count):
    """``count`` independent generators derived from ``rng`` (or ``seed``)."""
    if isinstance(rng, np.random.Generator):
        return rng.spawn(count)
    if isinstance(rng, np.random.SeedSequence):
        ss = rng
    else:
        ss = np.random.SeedSequence(seed if rng is None else rng)
    return [np.random.default_rng(c) for c in ss.spawn(count)]


def _projected_rhs(M: sp.csr_matrix, q: int, rng, identity: bool) -> np.ndarray:
    """``(Q M)^T`` for a ``q x d`` projection ``Q`` and sparse ``d x k`` ``M``."""
    d, k = M.shape
    if identity:
        return np.ascontiguousarray(M.T.toarray())
    Y = np.zeros((k, q))
    if d == 0:
        return Y
    MT = M.T.tocsr()
    for s, e, G in _gaussian_chunks(q, d, rng):
        Y += MT[:, s:e] @ G
    return Y


def _row_norms_sq(Z):
    return np.einsum("ij,ij->i", Z, Z)


def er_sums_est(g: Graph, cfg: SketchConfig, rng=None, *, stats: SolveStats | None = None) -> np.ndarray:
    """Estimate ``sum_v er(u, v)`` for every vertex ``u``.

    Uses ``er``-sum ``= n L^+[u,u] + tr(L^+)`` and
    ``L^+[u,u] = |W^{1/2} B L^+ e_u|^2``; the ``m``-dimensional columns are
    projected to ``q`` rows before solving. ``cfg.epsilon`` is the accuracy
    of this routine itself.
    """
    if not g.is_connected():
        raise PreconditionError("er_sums_est requires a connected graph")
    n = g.n
    eps = cfg.epsilon
    L = assemble(g)
    inc = incidence(g)
    M = (sp.diags(np.sqrt(inc.weights)) @ inc.B).tocsr()
    q = sketch_rows(n, eps / 3, cfg.jl_factor)
    if cfg.delta is None:
        delta, certified = ersums_delta(n, eps, g.w_min, g.w_max), True
    else:
        delta, certified = cfg.delta, False
    (stream,) = _streams(rng, cfg.seed, 1)
    Y = _projected_rhs(M, q, stream, cfg.projection == "identity")
    solver = Solver(L, method=cfg.solver_method, maxiter=cfg.maxiter, stats=stats)
    Z = solver(Y, delta, certified)
    diag = _row_norms_sq(Z)
    return n * diag + diag.sum()


def gains_parts(g: Graph, S, cfg: SketchConfig, rng=None, *,
                stats: SolveStats | None = None) -> tuple[GroundedLaplacian, np.ndarray, np.ndarray]:
    """Numerator and denominator estimates behind :func:`gains_est`.

    Returns ``(gl, num, den)`` aligned with ``gl.vertices``, where ``num``
    estimates ``|L_{-S}^{-1} e_u|^2`` and ``den`` estimates
    ``e_u^T L_{-S}^{-1} e_u`` through the split ``L_{-S} = B'^T W' B' + X``.
    """
    n = g.n
    eps = cfg.epsilon
    gl = ground(assemble(g), S)
    split = sddm_split(gl)
    dim = gl.dim
    rows = sketch_rows(n, eps / 9, cfg.jl_factor)
    if cfg.delta is None:
        d1, d2, d3 = gains_deltas(n, eps, g.w_min, g.w_max)
        certified = True
    else:
        d1 = d2 = d3 = cfg.delta
        certified = False
    identity = cfg.projection == "identity"
    rng_p, rng_q, rng_r = _streams(rng, cfg.seed, 3)

    m_rows = (sp.diags(np.sqrt(split.weights)) @ split.B).tocsr()
    support = np.flatnonzero(split.x > 0)
    x_rows = sp.csr_matrix((np.sqrt(split.x[support]), (np.arange(len(support)), support)),
                           shape=(len(support), dim))

    Y1 = _projected_rhs(sp.identity(dim, format="csr"), rows, rng_p, identity)
    Y2 = _projected_rhs(m_rows, rows, rng_q, identity)
    Y3 = _projected_rhs(x_rows, rows, rng_r, identity)

    solver = Solver(gl, method=cfg.solver_method, maxiter=cfg.maxiter, stats=stats)
    num = _row_norms_sq(solver(Y1, d1, certified))
    den = np.zeros(dim)
    if Y2.shape[1]:
        den += _row_norms_sq(solver(Y2, d2, certified))
    if Y3.shape[1]:
        den += _row_norms_sq(solver(Y3, d3, certified))
    return gl, num, den


def gains_est(g: Graph, S, cfg: SketchConfig, rng=None, *, stats: SolveStats | None = None) -> np.ndarray:
    """Estimate the trace decrease ``tr(L_{-S}^{-1}) - tr(L_{-(S+u)}^{-1})`` for all ``u``.

    Returns a length-``n`` array with NaN at the grounded vertices.
    """
    if not S:
        raise PreconditionError("gains_est needs a nonempty grounded set")
    gl, num, den = gains_parts(g, S, cfg, rng, stats=stats)
    out = np.full(g.n, np.nan)
    out[gl.vertices] = num / den
    return out


def with_epsilon(cfg: SketchConfig, epsilon: float) -> SketchConfig:
    return replace(cfg, epsilon=epsilon)

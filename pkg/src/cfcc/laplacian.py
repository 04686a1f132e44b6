"""Linear algebra on graph Laplacians and grounded Laplacians.

A grounded Laplacian ``L_{-S}`` is the principal submatrix of ``L`` with the
rows and columns of the vertex set ``S`` removed. For a connected graph and
nonempty ``S`` it is symmetric positive definite with an entrywise positive
inverse, which is what makes the greedy machinery in this package work.

Iterative solves use block preconditioned conjugate gradient. The
preconditioner is pluggable:

``"jacobi"``
    diagonal scaling (default);
``"lu"``
    a sparse LU factorization applied as preconditioner, so PCG converges in
    one or two iterations. Cheap on low-dimensional meshes and geometric
    graphs, hopeless on expanders because of fill-in;
``"dense"``
    Cholesky on the dense matrix, no iteration at all. Used by tests as an
    "exact solve".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import lapack

from . import _kernels
from .errors import DenseCapError, NumericalDegeneracyError, PreconditionError, SolverError
from .graph import Graph

__all__ = [
    "DENSE_CAP",
    "LaplacianMatrix",
    "IncidenceFactorization",
    "GroundedLaplacian",
    "SddmSplit",
    "DenseInverse",
    "SolveStats",
    "Solver",
    "TraceEstimate",
    "assemble",
    "incidence",
    "ground",
    "sddm_split",
    "solve",
    "residual_tolerance",
    "dense_inverse",
    "pseudoinverse",
    "rank1_ground_update",
    "hutchinson_trace",
    "dump_coordinates",
]

DENSE_CAP = 20000
# Relative residuals below this are not reliably reachable in double precision.
RESIDUAL_FLOOR = 1e-14
SOLVERS = ("jacobi", "lu", "dense")


@dataclass(frozen=True, eq=False)
class LaplacianMatrix:
    """``L = D - A`` of a weighted graph, kept with the graph it came from."""

    matrix: sp.csr_matrix
    graph: Graph

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def w_min(self) -> float:
        return self.graph.w_min

    @property
    def w_max(self) -> float:
        return self.graph.w_max

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True, eq=False)
class IncidenceFactorization:
    """``L = B^T W B`` with ``B`` the signed m x n incidence matrix.

    Edge ``(u, v)`` with ``u < v`` has head ``u`` (+1) and tail ``v`` (-1).
    """

    B: sp.csr_matrix
    weights: np.ndarray

    def laplacian(self) -> sp.csr_matrix:
        return (self.B.T @ sp.diags(self.weights) @ self.B).tocsr()


@dataclass(frozen=True, eq=False)
class GroundedLaplacian:
    """``L_{-S}``: rows/columns of ``grounded`` removed.

    ``vertices[i]`` is the graph vertex of row ``i``; ``position[u]`` is the
    row of vertex ``u`` or ``-1`` if ``u`` is grounded.
    """

    matrix: sp.csr_matrix
    grounded: frozenset
    vertices: np.ndarray
    position: np.ndarray
    laplacian: LaplacianMatrix

    @property
    def dim(self) -> int:
        return len(self.vertices)

    @property
    def n(self) -> int:
        return self.laplacian.n

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True, eq=False)
class SddmSplit:
    """``L_{-S} = B'^T W' B' + Diag(x)``.

    ``B'`` is the incidence matrix of the graph induced on ``V - S`` (columns
    indexed like the rows of the grounded Laplacian) and ``x[i]`` is the total
    weight from row ``i`` into ``S``.
    """

    B: sp.csr_matrix
    weights: np.ndarray
    x: np.ndarray

    def reassemble(self) -> sp.csr_matrix:
        return (self.B.T @ sp.diags(self.weights) @ self.B + sp.diags(self.x)).tocsr()


@dataclass(frozen=True, eq=False)
class DenseInverse:
    """Dense ``(L_{-S})^{-1}`` indexed like :class:`GroundedLaplacian`."""

    matrix: np.ndarray
    grounded: frozenset
    vertices: np.ndarray
    position: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.vertices)

    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def entry(self, u: int, v: int) -> float:
        return float(self.matrix[self.position[u], self.position[v]])


def assemble(g: Graph) -> LaplacianMatrix:
    """``L = B^T W B``, so the incidence factorization reproduces it bit for bit."""
    mat = incidence(g).laplacian()
    mat.sort_indices()
    return LaplacianMatrix(mat, g)


def incidence(g: Graph) -> IncidenceFactorization:
    m = g.m
    rows = np.repeat(np.arange(m), 2)
    cols = np.column_stack([g.heads, g.tails]).ravel()
    vals = np.tile([1.0, -1.0], m)
    B = sp.csr_matrix((vals, (rows, cols)), shape=(m, g.n))
    return IncidenceFactorization(B, np.array(g.weights))


def _as_vertex_set(S, n) -> frozenset:
    S = frozenset(int(u) for u in S)
    if any(u < 0 or u >= n for u in S):
        raise PreconditionError(f"vertex set contains ids outside 0..{n - 1}")
    return S


def ground(L: LaplacianMatrix, S: Iterable[int]) -> GroundedLaplacian:
    """Principal submatrix of ``L`` with the rows/columns of ``S`` removed."""
    n = L.n
    S = _as_vertex_set(S, n)
    if not S:
        raise PreconditionError("grounded set must be nonempty")
    if len(S) >= n:
        raise PreconditionError("grounded set must be a proper subset of V")
    mask = np.ones(n, dtype=bool)
    mask[list(S)] = False
    vertices = np.flatnonzero(mask)
    position = np.full(n, -1, dtype=np.int64)
    position[vertices] = np.arange(len(vertices))
    sub = L.matrix[vertices][:, vertices].tocsr()
    sub.sort_indices()
    return GroundedLaplacian(sub, S, vertices, position, L)


def sddm_split(gl: GroundedLaplacian) -> SddmSplit:
    mat = gl.matrix
    x = np.asarray(mat.sum(axis=1)).ravel()
    # Row sums of rows not adjacent to S cancel to round-off only.
    x[np.abs(x) <= 1e-12 * mat.diagonal()] = 0.0
    x = np.maximum(x, 0.0)
    upper = sp.triu(mat, k=1).tocoo()
    keep = upper.data != 0
    r, c, w = upper.row[keep], upper.col[keep], -upper.data[keep]
    m = len(w)
    B = sp.csr_matrix(
        (np.tile([1.0, -1.0], m), (np.repeat(np.arange(m), 2), np.column_stack([r, c]).ravel())),
        shape=(m, gl.dim),
    )
    return SddmSplit(B, w, x)


# ---------------------------------------------------------------- solving


@dataclass
class SolveStats:
    """Counters accumulated across solver calls."""

    rhs: int = 0
    blocks: int = 0
    iterations: int = 0
    max_residual: float = 0.0

    def record(self, columns, iterations, residual):
        self.rhs += columns
        self.blocks += 1
        self.iterations += iterations
        if residual > self.max_residual:
            self.max_residual = float(residual)

    def as_dict(self) -> dict:
        return {"rhs": self.rhs, "blocks": self.blocks, "iterations": self.iterations,
                "max_residual": self.max_residual}


def residual_tolerance(delta: float, n: int, w_min: float, w_max: float, certified: bool = True) -> float:
    """Relative 2-norm residual that guarantees M-norm relative error ``delta``.

    ``|x - x*|_M / |x*|_M <= sqrt(kappa) |r| / |b|`` and the eigenvalues of any
    grounded Laplacian (and the nonzero ones of ``L``) lie in
    ``[w_min / n^2, n^2 w_max]``. Without ``certified`` the residual itself is
    held to ``delta``, which is what practical runs want.
    """
    if delta <= 0:
        raise PreconditionError("solver tolerance must be positive")
    if not certified:
        return float(delta)
    return max(delta * math.sqrt(w_min / w_max) / n**2, RESIDUAL_FLOOR)


def _cholesky_inverse_inplace(a: np.ndarray) -> np.ndarray:
    """Overwrite SPD Fortran-ordered ``a`` with its inverse, symmetrized."""
    c, info = lapack.dpotrf(a, lower=False, overwrite_a=True, clean=False)
    if info != 0:
        raise NumericalDegeneracyError(f"matrix is not positive definite (potrf info={info})")
    inv, info = lapack.dpotri(c, lower=False, overwrite_c=True)
    if info != 0:
        raise NumericalDegeneracyError(f"inversion failed (potri info={info})")
    # potri fills the upper triangle only; mirror it block by block.
    d = inv.shape[0]
    step = 512
    for s in range(0, d, step):
        e = min(s + step, d)
        inv[e:, s:e] = inv[s:e, e:].T
        blk = inv[s:e, s:e]
        inv[s:e, s:e] = np.triu(blk) + np.triu(blk, 1).T
    return inv


class Solver:
    """Reusable solver for a fixed Laplacian or grounded Laplacian.

    Builds the preconditioner once; each call solves a vector or a block of
    right-hand sides (columns).

    Parameters
    ----------
    M : GroundedLaplacian or LaplacianMatrix
    method : {"jacobi", "lu", "dense"}
    maxiter : int, optional
        Iteration cap per block; default ``10 * dim + 200``.
    stats : SolveStats, optional
        Accumulates iteration counts and achieved residuals.
    block_size : int
        Maximum number of columns iterated together.
    """

    def __init__(self, M, method: str = "jacobi", maxiter: int | None = None,
                 stats: SolveStats | None = None, block_size: int = 256):
        if method not in SOLVERS:
            raise PreconditionError(f"unknown solver {method!r}; choose from {SOLVERS}")
        self.method = method
        self.stats = stats
        self.block_size = block_size
        self.singular = isinstance(M, LaplacianMatrix)
        if self.singular:
            if not M.graph.is_connected():
                raise PreconditionError("Laplacian solves require a connected graph")
            self.n = M.n
            g = M.graph
        elif isinstance(M, GroundedLaplacian):
            self.n = M.n
            g = M.laplacian.graph
        else:
            raise PreconditionError("solve expects a LaplacianMatrix or GroundedLaplacian")
        self.w_min, self.w_max = g.w_min, g.w_max
        A = M.matrix.tocsr()
        if A.indices.dtype != np.int32 and A.nnz < 2**31:
            A = sp.csr_matrix((A.data, A.indices.astype(np.int32), A.indptr.astype(np.int32)), shape=A.shape)
        self.A = A
        self.dim = A.shape[0]
        self.maxiter = maxiter if maxiter is not None else 10 * self.dim + 200
        self._dinv = 1.0 / A.diagonal()
        self._lu = None
        self._chol = None
        if method == "lu":
            inner = A[1:, 1:] if self.singular else A
            self._lu = spla.splu(inner.tocsc(), permc_spec="MMD_AT_PLUS_A",
                                 diag_pivot_thresh=0.0, options={"SymmetricMode": True})
        elif method == "dense":
            inner = A[1:, 1:] if self.singular else A
            self._chol = sla.cho_factor(inner.toarray(), lower=False)

    @staticmethod
    def _project(X):
        X -= X.mean(axis=0)
        return X

    def _apply_exact(self, R):
        """Exact inverse (pseudoinverse for Laplacians) through the factorization."""
        solve = self._lu.solve if self._lu is not None else (lambda b: sla.cho_solve(self._chol, b))
        if not self.singular:
            return np.ascontiguousarray(solve(R))
        Rp = self._project(R.copy())
        Y = np.zeros_like(Rp)
        # Grounding vertex 0 solves L y = r exactly for zero-sum r.
        Y[1:] = solve(Rp[1:])
        return self._project(Y)

    def _precondition(self, R):
        if self.method == "jacobi":
            Z = R * self._dinv[:, None]
            return self._project(Z) if self.singular else Z
        return self._apply_exact(R)

    def tolerance(self, delta, certified=True):
        return residual_tolerance(delta, self.n, self.w_min, self.w_max, certified)

    def __call__(self, b, delta: float = 1e-8, certified: bool = True) -> np.ndarray:
        """Solve ``M x = b`` (pseudoinverse solution for Laplacians)."""
        b = np.asarray(b, dtype=np.float64)
        vector = b.ndim == 1
        B = b[:, None] if vector else b
        if B.shape[0] != self.dim:
            raise PreconditionError(f"right-hand side has {B.shape[0]} rows, expected {self.dim}")
        tol = self.tolerance(delta, certified)
        out = np.empty(B.shape)
        for s in range(0, B.shape[1], self.block_size):
            blk = np.array(B[:, s:s + self.block_size], dtype=np.float64, order="C")
            out[:, s:s + blk.shape[1]] = self._solve_block(blk, tol)
        return out[:, 0] if vector else out

    def _solve_block(self, B, tol):
        if self.singular:
            self._project(B)
        c = B.shape[1]
        bnorm = np.sqrt(np.einsum("ij,ij->j", B, B))
        if self.method == "dense":
            X = self._apply_exact(B)
            iterations = 0
        else:
            X, iterations = self._pcg(B, bnorm, tol)
        if self.singular:
            self._project(X)
        R = B - self.A @ X
        with np.errstate(invalid="ignore", divide="ignore"):
            res = np.where(bnorm > 0, np.sqrt(np.einsum("ij,ij->j", R, R)) / bnorm, 0.0)
        if self.stats is not None:
            self.stats.record(c, iterations, float(res.max()) if c else 0.0)
        return X

    def _pcg(self, B, bnorm, tol):
        A = self.A
        n, c = B.shape
        X = np.zeros_like(B)
        R = B.copy()
        Z = np.ascontiguousarray(self._precondition(R))
        P = Z.copy()
        AP = np.empty_like(B)
        rz = np.einsum("ij,ij->j", R, Z)
        rr = bnorm**2
        target = tol * bnorm
        pap = np.empty(c)
        rz_new = np.empty(c)
        fused = self.method == "jacobi" and not self.singular
        for it in range(self.maxiter + 1):
            active = np.sqrt(rr) > target
            if not active.any():
                return X, it
            if it == self.maxiter:
                break
            _kernels.spmm_dot(A.indptr, A.indices, A.data, P, AP, pap)
            ok = active & (pap > 0)
            alpha = np.zeros(c)
            alpha[ok] = rz[ok] / pap[ok]
            if fused:
                _kernels.update_xrz_jacobi(X, R, Z, P, AP, alpha, self._dinv, rz_new, rr)
            else:
                _kernels.update_xr(X, R, P, AP, alpha, rr)
                Z = np.ascontiguousarray(self._precondition(R))
                rz_new = np.einsum("ij,ij->j", R, Z)
            ok = active & (rz > 0)
            beta = np.zeros(c)
            beta[ok] = rz_new[ok] / rz[ok]
            _kernels.update_p(P, Z, beta)
            rz, rz_new = rz_new, rz
        worst = float(np.max(np.sqrt(rr) / np.where(bnorm > 0, bnorm, 1.0)))
        raise SolverError("conjugate gradient did not converge", residual=worst, iterations=self.maxiter)


def solve(M, b, delta: float = 1e-8, *, method: str = "jacobi", certified: bool = True,
          maxiter: int | None = None, stats: SolveStats | None = None) -> np.ndarray:
    """One-shot solve; see :class:`Solver` for reuse across many right-hand sides.

    The returned ``x`` satisfies ``|x - M^{-1} b|_M <= delta |M^{-1} b|_M``
    (through :func:`residual_tolerance`) when ``certified`` is true; otherwise
    the relative residual is at most ``delta``.
    """
    return Solver(M, method=method, maxiter=maxiter, stats=stats)(b, delta, certified)


# ---------------------------------------------------------------- dense paths


def dense_inverse(gl: GroundedLaplacian, cap: int = DENSE_CAP) -> DenseInverse:
    if gl.dim > cap:
        raise DenseCapError(gl.dim, cap)
    a = np.asfortranarray(gl.matrix.toarray())
    inv = _cholesky_inverse_inplace(a)
    return DenseInverse(np.ascontiguousarray(inv), gl.grounded, gl.vertices, gl.position)


def pseudoinverse(L: LaplacianMatrix, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense ``L^+`` via ``(L + 11^T/n)^{-1} - 11^T/n``."""
    n = L.n
    if n > cap:
        raise DenseCapError(n, cap)
    if not L.graph.is_connected():
        raise PreconditionError("pseudoinverse requires a connected graph")
    a = np.asfortranarray(L.matrix.toarray())
    a += 1.0 / n
    inv = _cholesky_inverse_inplace(a)
    inv -= 1.0 / n
    return np.ascontiguousarray(inv)


def rank1_ground_update(inv: DenseInverse, u: int) -> DenseInverse:
    """Inverse for ``S + u`` from the inverse for ``S`` in O(d^2).

    Removes row/column ``u`` from ``inv - inv e_u e_u^T inv / inv[u, u]``.
    """
    if u in inv.grounded or not (0 <= u < len(inv.position)):
        raise PreconditionError(f"vertex {u} is already grounded or out of range")
    i = int(inv.position[u])
    M = inv.matrix
    pivot = M[i, i]
    if not pivot > 0:
        raise NumericalDegeneracyError(f"diagonal entry {pivot!r} of the inverse is not positive")
    keep = np.ones(inv.dim, dtype=bool)
    keep[i] = False
    idx = np.flatnonzero(keep)
    s = M[idx, i] / math.sqrt(pivot)
    new = M[np.ix_(idx, idx)]
    step = 2048
    for a in range(0, len(idx), step):
        new[a:a + step] -= np.outer(s[a:a + step], s)
    position = np.array(inv.position)
    position[u] = -1
    position[inv.vertices[i + 1:]] -= 1
    return DenseInverse(new, inv.grounded | {u}, inv.vertices[idx], position)


# ---------------------------------------------------------------- traces


@dataclass(frozen=True)
class TraceEstimate:
    trace: float
    stderr: float
    probes: int


def hutchinson_trace(gl: GroundedLaplacian, probes: int, delta: float = 1e-8, rng=None, *,
                     method: str = "jacobi", certified: bool = False,
                     stats: SolveStats | None = None) -> TraceEstimate:
    """Rademacher estimate of ``tr(L_{-S}^{-1})`` with one solve per probe."""
    if probes < 1:
        raise PreconditionError("hutchinson_trace needs at least one probe")
    rng = np.random.default_rng(rng)
    solver = Solver(gl, method=method, stats=stats)
    samples = np.empty(probes)
    step = solver.block_size
    for s in range(0, probes, step):
        c = min(step, probes - s)
        Zp = rng.choice(np.array([-1.0, 1.0]), size=(gl.dim, c))
        X = solver(Zp, delta, certified)
        samples[s:s + c] = np.einsum("ij,ij->j", Zp, X)
    stderr = float(samples.std(ddof=1) / math.sqrt(probes)) if probes > 1 else float("nan")
    return TraceEstimate(float(samples.mean()), stderr, probes)


def dump_coordinates(matrix, fh) -> None:
    """Write ``row col value`` lines (debugging aid)."""
    coo = sp.coo_matrix(matrix)
    for r, c, v in zip(coo.row, coo.col, coo.data):
        fh.write(f"{r} {c} {float(v)!r}\n")

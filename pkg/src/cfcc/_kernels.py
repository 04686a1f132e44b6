"""Fused loops for block conjugate gradient.

Each kernel makes one pass over row-major ``(dim, c)`` blocks, where the
numpy equivalent would make several.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def spmm_dot(indptr, indices, data, P, AP, pap):
    """``AP = A @ P`` for CSR ``A``, and ``pap[j] = P[:, j] . AP[:, j]``."""
    n, c = P.shape
    for j in range(c):
        pap[j] = 0.0
    for i in range(n):
        for j in range(c):
            AP[i, j] = 0.0
        for k in range(indptr[i], indptr[i + 1]):
            col = indices[k]
            a = data[k]
            for j in range(c):
                AP[i, j] += a * P[col, j]
        for j in range(c):
            pap[j] += P[i, j] * AP[i, j]


@njit(cache=True)
def update_xr(X, R, P, AP, alpha, rr):
    """``X += alpha P``, ``R -= alpha AP``, ``rr[j] = |R[:, j]|^2``."""
    n, c = X.shape
    for j in range(c):
        rr[j] = 0.0
    for i in range(n):
        for j in range(c):
            a = alpha[j]
            X[i, j] += a * P[i, j]
            r = R[i, j] - a * AP[i, j]
            R[i, j] = r
            rr[j] += r * r


@njit(cache=True)
def update_xrz_jacobi(X, R, Z, P, AP, alpha, dinv, rz, rr):
    """As :func:`update_xr`, plus ``Z = R / diag`` and ``rz[j] = R[:, j] . Z[:, j]``."""
    n, c = X.shape
    for j in range(c):
        rr[j] = 0.0
        rz[j] = 0.0
    for i in range(n):
        di = dinv[i]
        for j in range(c):
            a = alpha[j]
            X[i, j] += a * P[i, j]
            r = R[i, j] - a * AP[i, j]
            R[i, j] = r
            z = r * di
            Z[i, j] = z
            rr[j] += r * r
            rz[j] += r * z


@njit(cache=True)
def update_p(P, Z, beta):
    n, c = P.shape
    for i in range(n):
        for j in range(c):
            P[i, j] = Z[i, j] + beta[j] * P[i, j]


def warmup():
    """Compile every kernel on a tiny problem."""
    indptr = np.array([0, 1], dtype=np.int32)
    indices = np.array([0], dtype=np.int32)
    data = np.array([1.0])
    one = np.ones((1, 1))
    vec = np.ones(1)
    spmm_dot(indptr, indices, data, one, one.copy(), vec.copy())
    update_xr(one.copy(), one.copy(), one, one, vec, vec.copy())
    update_xrz_jacobi(one.copy(), one.copy(), one.copy(), one, one, vec, vec, vec.copy(), vec.copy())
    update_p(one.copy(), one, vec)

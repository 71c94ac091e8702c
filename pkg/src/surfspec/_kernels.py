"""Compiled inner loops for the eigenvalue kernel.

Band storage convention used throughout: ``w[j, d] = A[j + d, j]`` for
``d = 0..b`` (lower band, one row per column of ``A``).
"""

import numpy as np
from numba import njit

PIVOT_ABS_FLOOR = 1e-300
PIVOT_REL_FLOOR = 1e-14
# a pivot whose column carries more than this multiple of the row scale makes
# the computed inertia unreliable (the backward error grows with it)
GROWTH_MAX = 1e6


@njit(cache=True, nogil=True)
def sturm_count(diag, offdiag, sigma):
    n = diag.shape[0]
    emax = 1.0
    for i in range(n - 1):
        e2 = offdiag[i] * offdiag[i]
        if e2 > emax:
            emax = e2
    pivmin = PIVOT_ABS_FLOOR * emax
    count = 0
    q = diag[0] - sigma
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = diag[i] - sigma - offdiag[i - 1] * offdiag[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True, nogil=True)
def band_row_norms(w):
    n, bp1 = w.shape
    out = np.zeros(n)
    for j in range(n):
        out[j] += abs(w[j, 0])
        for d in range(1, bp1):
            if j + d < n:
                v = abs(w[j, d])
                out[j] += v
                out[j + d] += v
    return out


@njit(cache=True, nogil=True)
def band_ldl(w_in, sigma, rownorm, want_factor):
    """LDL^T of ``A - sigma I`` without pivoting.

    Returns ``(neg, fail, w, dvec)``; ``fail`` is the column index of the
    first pivot below the floor, or -1.  With ``want_factor`` false the
    factor is still computed in the returned work array but callers only
    use the inertia.
    """
    n, bp1 = w_in.shape
    b = bp1 - 1
    w = w_in.copy()
    for j in range(n):
        w[j, 0] -= sigma
    dvec = np.empty(n)
    neg = 0
    fail = -1
    for j in range(n):
        d = w[j, 0]
        floor = PIVOT_ABS_FLOOR + PIVOT_REL_FLOOR * (rownorm[j] + abs(sigma))
        if abs(d) < floor:
            fail = j
            break
        m = min(b, n - 1 - j)
        col = 0.0
        for i in range(1, m + 1):
            col += w[j, i] * w[j, i]
        if col > GROWTH_MAX * abs(d) * (rownorm[j] + abs(sigma)):
            fail = j
            break
        if d < 0.0:
            neg += 1
        dvec[j] = d
        inv = 1.0 / d
        for i in range(1, m + 1):
            w[j, i] *= inv
        for i in range(1, m + 1):
            lid = w[j, i] * d
            if lid != 0.0:
                row = j + i
                for k in range(i, m + 1):
                    w[row, k - i] -= w[j, k] * lid
    return neg, fail, w, dvec


@njit(cache=True, nogil=True)
def band_ldl_solve(w, dvec, y):
    n, bp1 = w.shape
    b = bp1 - 1
    x = y.copy()
    for j in range(n):
        m = min(b, n - 1 - j)
        xj = x[j]
        for i in range(1, m + 1):
            x[j + i] -= w[j, i] * xj
    for j in range(n):
        x[j] /= dvec[j]
    for j in range(n - 1, -1, -1):
        m = min(b, n - 1 - j)
        s = x[j]
        for i in range(1, m + 1):
            s -= w[j, i] * x[j + i]
        x[j] = s
    return x


@njit(cache=True, nogil=True)
def band_matvec(w, x):
    n, bp1 = w.shape
    y = np.zeros(n)
    for j in range(n):
        y[j] += w[j, 0] * x[j]
        for d in range(1, bp1):
            if j + d < n:
                a = w[j, d]
                y[j + d] += a * x[j]
                y[j] += a * x[j + d]
    return y

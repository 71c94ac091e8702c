"""Gauss-Lobatto-Legendre spectral elements on a half-line segment [0, T].

Natural (Neumann) condition at t = 0, Dirichlet at t = T.  The GLL
quadrature mass is diagonal, which keeps the 2-D pencils in the
diagonal-mass form the eigenvalue kernel accepts.
"""

from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as L


@lru_cache(maxsize=None)
def gll(p):
    """Nodes, weights and differentiation matrix of order p on [-1, 1]."""
    cp = np.zeros(p + 1)
    cp[p] = 1.0
    inner = L.legroots(L.legder(cp))
    x = np.concatenate(([-1.0], np.sort(inner), [1.0]))
    Pp = L.legval(x, cp)
    w = 2.0 / (p * (p + 1) * Pp**2)
    D = np.zeros((p + 1, p + 1))
    for i in range(p + 1):
        for j in range(p + 1):
            if i != j:
                D[i, j] = Pp[i] / (Pp[j] * (x[i] - x[j]))
    D[0, 0] = -p * (p + 1) / 4.0
    D[p, p] = p * (p + 1) / 4.0
    return x, w, D


@lru_cache(maxsize=64)
def half_line_basis(t_max, elements, order):
    """Nodes, diagonal mass and dense stiffness for -d^2/dt^2 on (0, t_max).

    The node at t_max carries the Dirichlet condition and is dropped.
    """
    x, w, D = gll(order)
    h = t_max / elements
    ke = (2.0 / h) * D.T @ (w[:, None] * D)
    n = elements * order + 1
    nodes = np.empty(n)
    mass = np.zeros(n)
    K = np.zeros((n, n))
    for e in range(elements):
        idx = slice(e * order, e * order + order + 1)
        nodes[idx] = e * h + 0.5 * h * (x + 1.0)
        mass[idx] += 0.5 * h * w
        K[idx, idx] += ke
    nodes, mass, K = nodes[:-1], mass[:-1], K[:-1, :-1]
    for a in (nodes, mass, K):
        a.flags.writeable = False
    return nodes, mass, K

"""The de Gennes family H(xi) = -d^2/dt^2 + (t - xi)^2 on the half-line, Neumann at 0.

Discretization: cell-centered finite differences (nodes ``(i + 1/2) * delta``)
so the reflection ghost ``u_{-1} = u_0`` realizes the Neumann condition and
keeps the matrix symmetric; a zero ghost closes the far end.  The scheme is
second order.  Public eigenvalues are Richardson-extrapolated from the
``delta`` and ``2 delta`` grids unless ``richardson=False``.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .errors import TruncationTooSmall, ValidationError
from .linalg_core import TridiagonalMatrix, eigenvalue_index_tridiag

DEFAULT_DELTA = 0.005
DEFAULT_MARGIN = 10.0
XI_CAP = 30.0
LAMBDA_MAX = 0.999


@dataclass(frozen=True)
class HalfLineGrid:
    t_max: float
    n: int

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValidationError("t_max must be positive")
        if self.n < 2:
            raise ValidationError("grid needs at least two cells")

    @property
    def delta(self):
        return self.t_max / self.n

    @property
    def nodes(self):
        return (np.arange(self.n) + 0.5) * self.delta

    @classmethod
    def for_xi(cls, xi, delta=DEFAULT_DELTA, margin=DEFAULT_MARGIN):
        """Grid of spacing ``delta`` reaching ``max(xi, 0) + margin``; even cell count."""
        n = int(math.ceil((max(xi, 0.0) + margin) / delta - 1e-9))
        n += n % 2
        return cls(n * delta, max(n, 16))

    def coarsened(self):
        return HalfLineGrid(self.t_max, self.n // 2)


def assemble_h_xi(xi, grid):
    n = grid.n
    inv = 1.0 / grid.delta**2
    diag = 2.0 * inv + (grid.nodes - xi) ** 2
    diag[0] -= inv
    off = np.full(n - 1, -inv)
    return TridiagonalMatrix(diag, off)


def _mu_raw(xi, j, grid):
    return eigenvalue_index_tridiag(assemble_h_xi(xi, grid), j)


@lru_cache(maxsize=200_000)
def _mu_cached(xi, j, delta, margin, richardson):
    grid = HalfLineGrid.for_xi(xi, delta, margin)
    fine = _mu_raw(xi, j, grid)
    if not richardson:
        return fine
    coarse = _mu_raw(xi, j, grid.coarsened())
    return (4.0 * fine - coarse) / 3.0


def mu(xi, j=1, delta=DEFAULT_DELTA, *, richardson=True, margin=DEFAULT_MARGIN, check=False):
    """j-th eigenvalue of H(xi).

    With ``check`` the truncation is verified by repeating the solve with
    ``margin + 2``; a shift above 1e-8 raises :class:`TruncationTooSmall`.
    """
    if not 1 <= j <= 5:
        raise ValidationError("only j = 1..5 are supported")
    if abs(xi) > 1e6 or not math.isfinite(xi):
        raise ValidationError("xi out of range")
    key = round(float(xi), 12)
    value = _mu_cached(key, int(j), float(delta), float(margin), bool(richardson))
    if check:
        wider = _mu_cached(key, int(j), float(delta), float(margin) + 2.0, bool(richardson))
        if abs(wider - value) > 1e-8:
            raise TruncationTooSmall(f"mu_{j}({xi}) moved by {abs(wider - value):.3e} under t_max + 2")
    return value


def mu_curve(xis, j=1, delta=DEFAULT_DELTA, **kw):
    return np.array([mu(x, j, delta, **kw) for x in np.asarray(xis, dtype=float)])


@dataclass(frozen=True)
class DeGennesCurve:
    xi_samples: np.ndarray
    mu1: np.ndarray
    theta0: tuple
    delta: float

    @classmethod
    def sample(cls, xis, delta=DEFAULT_DELTA):
        xis = np.asarray(xis, dtype=float)
        return cls(xis, mu_curve(xis, 1, delta), minimize_mu1(delta), delta)

    def local_minima(self):
        m = self.mu1
        return [i for i in range(1, m.size - 1) if m[i] < m[i - 1] and m[i] < m[i + 1]]


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@lru_cache(maxsize=32)
def minimize_mu1(delta=DEFAULT_DELTA, richardson=True):
    """``(Theta0, xi0)``: golden-section search for the minimum of mu_1 on [0, 1]."""
    f = lambda x: mu(x, 1, delta, richardson=richardson)
    a, b = 0.0, 1.0
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-8:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    xi0 = 0.5 * (a + b)
    return f(xi0), xi0


@dataclass(frozen=True)
class SupportInterval:
    lam: float
    xi_minus: float
    xi_plus: float

    @property
    def width(self):
        return self.xi_plus - self.xi_minus


def _bisect_level(f, lam, lo, hi, increasing, tol=1e-10):
    # f crosses lam once on [lo, hi]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (f(mid) < lam) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def support_interval(lam, delta=DEFAULT_DELTA):
    """The interval {mu_1 < lam}, or ``None`` when it is empty."""
    if not 0.0 <= lam < 1.0:
        raise ValidationError("lambda must lie in [0, 1)")
    if lam > LAMBDA_MAX:
        raise ValidationError(f"lambda above the service limit {LAMBDA_MAX}")
    theta0, xi0 = minimize_mu1(delta)
    if lam <= theta0:
        return None
    f = lambda x: mu(x, 1, delta)
    left = _bisect_level(f, lam, 0.0, xi0, increasing=False)
    hi = xi0 + 1.0
    while f(hi) < lam:
        hi = min(hi + 1.0, XI_CAP)
        if hi >= XI_CAP:
            raise ValidationError("support extends past the xi cap")
    right = _bisect_level(f, lam, xi0, hi, increasing=True)
    return SupportInterval(lam, left, right)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _graded_integral(g, a, b, levels):
    """Integral of g over [a, b] with dyadic panels graded toward both ends."""
    mid = 0.5 * (a + b)
    total = 0.0
    for end, sign in ((a, 1.0), (b, -1.0)):
        half = mid - a
        edges = [half * 0.5**k for k in range(levels + 1)] + [0.0]
        for k in range(len(edges) - 1):
            lo, hi = edges[k + 1], edges[k]
            x = 0.5 * (hi + lo) + 0.5 * (hi - lo) * _GL_NODES
            total += 0.5 * (hi - lo) * np.dot(_GL_WEIGHTS, [g(end + sign * xx) for xx in x])
    return total


@lru_cache(maxsize=4096)
def _moment(lam, p, delta, rtol):
    s = support_interval(lam, delta)
    if s is None:
        return 0.0
    g = lambda x: max(lam - mu(x, 1, delta), 0.0) ** p
    prev = _graded_integral(g, s.xi_minus, s.xi_plus, 4)
    for levels in range(6, 40, 2):
        cur = _graded_integral(g, s.xi_minus, s.xi_plus, levels)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return cur


def moment_integral(lam, p, delta=DEFAULT_DELTA, rtol=1e-7):
    """``int_0^inf (mu_1(xi) - lam)_-^p dxi`` for p in {1/2, 3/2}."""
    if p not in (0.5, 1.5):
        raise ValidationError("p must be 1/2 or 3/2")
    return _moment(float(lam), float(p), float(delta), float(rtol))

"""The half-plane model L(theta) = -d_t^2 - d_s^2 + (t cos(theta) - s sin(theta))^2.

Neumann at the boundary t = 0.  The unbounded half-plane is truncated to a
box ``(s_min, s_max) x (0, t_max)`` with Dirichlet walls, so every computed
eigenvalue is an upper bound for the corresponding one of the model.

Two discretizations share one assembler:

``"sem"`` (default)
    second-order finite differences in s, Gauss-Lobatto spectral elements in t.
``"fd"``
    the plain 5-point stencil, cell-centered in t.

Both produce a symmetric banded pencil with diagonal mass, unknowns ordered
with t running fastest, so the bandwidth is the number of t unknowns.
"""

from dataclasses import dataclass, replace
from functools import lru_cache
import math

import numpy as np

from ._sem import half_line_basis
from .errors import TruncationTooSmall, ValidationError
from .linalg_core import (BandedMatrix, SpectralWindow, count_below_band, eigs_below_band,
                          lowest_eigenvalue_band)

THETA_MIN = math.radians(3.0)
WINDOW_MAX = 0.995
# fitted: sin(theta) * #{zeta_j < 0.95} peaks near 0.67 where zeta_1 crosses 0.95 (about 42 deg)
COUNT_BOUND = 0.7
EIG_TOL = 1e-10


@dataclass(frozen=True)
class HalfPlaneBox:
    s_min: float
    s_max: float
    t_max: float = 10.0
    ds: float = 0.05
    dt: float = 0.05
    scheme: str = "sem"
    sem_elements: int = 5
    sem_order: int = 8

    def __post_init__(self):
        if not (self.s_max > self.s_min and self.t_max > 0 and self.ds > 0 and self.dt > 0):
            raise ValidationError(f"invalid box {self}")
        if self.scheme not in ("sem", "fd"):
            raise ValidationError(f"unknown scheme {self.scheme!r}")

    @property
    def s_nodes(self):
        ns = int(round((self.s_max - self.s_min) / self.ds))
        return self.s_min + self.ds * np.arange(1, ns)

    def t_discretization(self):
        """``(nodes, mass, stiffness)`` of -d_t^2 with Neumann at 0, Dirichlet at t_max."""
        if self.scheme == "sem":
            return half_line_basis(float(self.t_max), int(self.sem_elements), int(self.sem_order))
        nt = int(round(self.t_max / self.dt))
        h = self.t_max / nt
        nodes = (np.arange(nt) + 0.5) * h
        K = (2.0 * np.eye(nt) - np.eye(nt, k=1) - np.eye(nt, k=-1)) / h**2
        K[0, 0] -= 1.0 / h**2
        return nodes, np.ones(nt), K

    def enlarged(self, factor=2.0):
        return replace(self, s_min=self.s_min * factor, s_max=self.s_max * factor,
                       t_max=self.t_max * factor,
                       sem_elements=int(self.sem_elements * factor))

    def refined(self, factor=2):
        if self.scheme == "sem":
            return replace(self, ds=self.ds / factor, sem_order=self.sem_order + 4)
        return replace(self, ds=self.ds / factor, dt=self.dt / factor)


# (largest angle in degrees, t_max) steps for the default box
_T_STEPS = ((25.0, 10.0), (40.0, 20.0), (45.0, 30.0), (55.0, 40.0), (75.0, 80.0))
_T_EDGE = 160.0


def default_box(theta, **overrides):
    """Truncation box for L(theta).

    Low-lying eigenfunctions of L(theta) spread along s > 0 on the scale
    1/sin(theta) (the de Gennes variable is ``xi = s sin(theta)``), while on
    the s < 0 side mu_1(xi) > 1 confines them.  As theta grows, zeta_1
    approaches the edge 1 and the eigenfunction stretches along the zero
    line ``s = t cot(theta)`` of the potential, so ``t_max`` steps up and
    ``s_max`` follows the line.
    """
    deg = math.degrees(theta)
    t_max = next((t for a, t in _T_STEPS if deg <= a), _T_EDGE)
    st = math.sin(max(theta, THETA_MIN))
    s_max = 8.0 + 6.0 / st
    if deg > _T_STEPS[0][0]:
        s_max = max(s_max, 8.0 + t_max * math.cos(theta) / st)
    kw = dict(t_max=t_max, sem_elements=int(round(t_max / (2.0 if t_max <= 30 else 4.0))))
    kw.update(overrides)
    return HalfPlaneBox(s_min=-(8.0 + 3.0 / st), s_max=s_max, **kw)


def assemble_half_plane(theta, box, xi=0.0):
    """Pencil of -d_t^2 - d_s^2 + (xi + t cos(theta) - s sin(theta))^2 on the box."""
    tn, tm, tk = box.t_discretization()
    s = box.s_nodes
    m, ns = tn.size, s.size
    if ns < 1:
        raise ValidationError("box has no interior s nodes")
    c, sn = math.cos(theta), math.sin(theta)
    kt = np.zeros((m, m + 1))
    for d in range(min(m, m + 1)):
        kt[: m - d, d] = np.diagonal(tk, -d)
    n = m * ns
    bw = m if ns > 1 else m - 1
    bands = np.zeros((n, bw + 1))
    inv = 1.0 / box.ds**2
    pot = (xi + c * tn[None, :] - sn * s[:, None]) ** 2
    for i in range(ns):
        rows = slice(i * m, (i + 1) * m)
        bands[rows, : min(m, bw + 1)] = kt[:, : min(m, bw + 1)]
        bands[rows, 0] += tm * (pot[i] + 2.0 * inv)
        if i + 1 < ns:
            bands[rows, m] = -tm * inv
    mass = np.tile(tm, ns)
    return BandedMatrix(bands, mass)


def assemble_l_theta(theta, box=None):
    if not 0.0 < theta <= math.pi / 2 + 1e-15:
        raise ValidationError("theta must lie in (0, pi/2]")
    return assemble_half_plane(theta, box or default_box(theta))


@dataclass(frozen=True)
class LuPanSpectrum:
    theta: float
    window: float
    zetas: np.ndarray
    box: HalfPlaneBox

    @property
    def count(self):
        return int(self.zetas.size)

    def deficit(self, lam):
        return SpectralWindow(self.window, self.zetas).deficit_at(lam)

    def count_below(self, lam):
        return int(np.count_nonzero(self.zetas < lam))


def _check_args(theta, window):
    if not THETA_MIN - 1e-12 <= theta <= math.pi / 2 + 1e-12:
        raise ValidationError("theta must lie in [3 deg, 90 deg]; use the theta = 0 density below")
    if window > WINDOW_MAX:
        raise ValidationError(f"window above {WINDOW_MAX} reaches into the essential-spectrum guard band")


@lru_cache(maxsize=512)
def _zetas_cached(theta, window, box):
    w = eigs_below_band(assemble_half_plane(theta, box), window, EIG_TOL)
    return w.eigenvalues


def zetas(theta, window=WINDOW_MAX, box=None, *, self_check=False):
    """Eigenvalues of L(theta) below ``window`` (counting multiplicity)."""
    _check_args(theta, window)
    box = box or default_box(theta)
    z = _zetas_cached(float(theta), float(window), box)
    if self_check:
        big = _zetas_cached(float(theta), float(window), box.enlarged())
        k = min(z.size, big.size)
        moved = np.max(np.abs(z[:k] - big[:k]), initial=0.0)
        if big.size != z.size and (big.size > z.size or moved > 1e-6):
            raise TruncationTooSmall(f"count changed {z.size} -> {big.size} on enlarging the box")
        if moved > 1e-6:
            raise TruncationTooSmall(f"eigenvalues moved by {moved:.2e} on enlarging the box")
    return LuPanSpectrum(float(theta), float(window), z, box)


def count_below(theta, lam, box=None):
    """Number of eigenvalues of L(theta) strictly below ``lam`` (one inertia count)."""
    _check_args(theta, lam)
    if not lam < 1.0:
        raise ValidationError("lambda must be < 1")
    box = box or default_box(theta)
    return count_below_band(assemble_half_plane(theta, box), lam)


@lru_cache(maxsize=128)
def _ground_cached(theta, box):
    return lowest_eigenvalue_band(assemble_half_plane(theta, box), EIG_TOL, guess=1.0)


def ground_state(theta, box=None, *, richardson=False):
    """Lowest eigenvalue of the truncated L(theta), also when it lies above the window.

    The 3-point stencil in s biases eigenvalues low by O(ds^2) (about 1.6e-4
    at ds = 0.05), which near theta = pi/2 exceeds the true gap 1 - zeta_1.
    With ``richardson`` the value is extrapolated from ``ds`` and ``2 ds``.
    """
    _check_args(theta, WINDOW_MAX)
    box = box or default_box(theta)
    fine = _ground_cached(float(theta), box)
    if not richardson:
        return fine
    coarse = _ground_cached(float(theta), replace(box, ds=2.0 * box.ds))
    return (4.0 * fine - coarse) / 3.0


def below_edge(theta, level=1.0 - 1e-5, box=None):
    """True when the truncated L(theta) has an eigenvalue below ``level`` (< 1).

    Truncation only raises eigenvalues, so a positive count certifies
    ``zeta_1(theta) < level`` for the half-plane operator as well.
    """
    if not level < 1.0:
        raise ValidationError("level must be below the essential edge 1")
    box = box or default_box(theta)
    return count_below_band(assemble_half_plane(theta, box), level) >= 1

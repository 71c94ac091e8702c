"""Per-area energy of the half-cylinder operator as an independent route to E(theta, lambda).

The operator is ``(-i grad + F)^2`` on ``(-L/2, L/2)^2 x (0, inf)`` in the
coordinates ``(r, s, t)`` with ``F = (t cos(theta) - s sin(theta), 0, 0)``,
Neumann at t = 0.

Two realizations:

``fiber_energy``
    periodic in r.  The potential does not depend on r, so Fourier modes
    ``e^{i xi_k r}``, ``xi_k = 2 pi k / L`` decouple the problem into the 2-D
    fibers ``-d_t^2 - d_s^2 + (xi_k + t cos(theta) - s sin(theta))^2`` with
    Dirichlet walls at ``s = +-L/2`` and ``t = T``.
``dirichlet_energy``
    Dirichlet walls in r and s; the full 3-D complex Hermitian problem,
    feasible only on coarse grids.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from . import degennes, energy
from ._parallel import ordered_map
from .errors import MarginTooSmall, ProblemTooLarge, ValidationError
from .linalg_core import BandedMatrix, SpectralWindow, eigs_below_band
from .lupan import EIG_TOL, HalfPlaneBox, assemble_half_plane

MARGIN_FIBERS = 2
DIRICHLET_MAX_L = 6.0
DIRICHLET_MIN_SPACING = 0.2
DIRICHLET_MAX_WORK = 2e10  # flops of one banded factorization


@dataclass(frozen=True)
class CylinderSpec:
    theta: float
    lam: float
    L: float
    T: float = 10.0
    ds: float = 0.05
    dt: float = 0.05
    bc_r: str = "periodic"
    scheme: str = "sem"

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi / 2 + 1e-12:
            raise ValidationError("theta must lie in [0, pi/2]")
        if not (self.L > 0 and self.T > 0 and self.ds > 0 and self.dt > 0):
            raise ValidationError("L, T and spacings must be positive")
        if not 0.0 <= self.lam < 1.0:
            raise ValidationError("lambda must lie in [0, 1)")
        if self.bc_r not in ("periodic", "dirichlet"):
            raise ValidationError("bc_r must be 'periodic' or 'dirichlet'")

    @property
    def box(self):
        return HalfPlaneBox(-0.5 * self.L, 0.5 * self.L, self.T, self.ds, self.dt, self.scheme,
                            sem_elements=max(1, int(round(self.T / 2.0))))


@dataclass(frozen=True)
class FiberResult:
    xi_k: float
    window: SpectralWindow


def fiber_frequencies(spec, window=None):
    """``xi_k`` that can carry states below ``window`` plus a margin of two fibers."""
    window = spec.lam if window is None else window
    step = 2.0 * math.pi / spec.L
    if spec.theta > 0.0:
        reach = 0.5 * spec.L * math.sin(spec.theta)
    else:
        sup = degennes.support_interval(window) if window < degennes.LAMBDA_MAX else None
        if sup is None:
            return np.zeros(0)
        reach = sup.xi_plus + 1.0
    kmax = int(math.floor(reach / step + 1e-12)) + MARGIN_FIBERS
    return step * np.arange(-kmax, kmax + 1)


def _fiber(args):
    theta, box, xi, window = args
    return eigs_below_band(assemble_half_plane(theta, box, xi), window, EIG_TOL)


def fiber_windows(spec, window=None):
    """Windows of every retained fiber, in increasing ``xi_k``.

    Raises :class:`MarginTooSmall` when an outermost fiber still has
    eigenvalues below ``window``.
    """
    if spec.bc_r != "periodic":
        raise ValidationError("fiber decomposition needs bc_r='periodic'")
    window = spec.lam if window is None else float(window)
    if window > 0.995:
        raise ValidationError("fiber window above 0.995")
    xis = fiber_frequencies(spec, window)
    box = spec.box
    out = ordered_map(_fiber, [(spec.theta, box, float(x), window) for x in xis])
    if out and (out[0].count or out[-1].count):
        raise MarginTooSmall(f"outermost fiber xi={xis[-1]:.4f} has eigenvalues below {window}")
    return [FiberResult(float(x), w) for x, w in zip(xis, out)]


def fiber_energy(spec):
    """Per-area energy ``sum_k sum_j (e_kj - lambda)_- / L^2`` of the periodic-in-r problem."""
    total = 0.0
    for f in fiber_windows(spec):
        total += f.window.deficit
    return total / spec.L**2


def cylinder_eigenvalues(spec, window):
    """All fiber eigenvalues below ``window``, sorted."""
    fibers = fiber_windows(spec, window)
    return np.sort(np.concatenate([f.window.eigenvalues for f in fibers] or [np.empty(0)]))


def separable_energy(lam, L, ds=None, j_max=2):
    """Per-area energy at theta = 0 from the separated eigenvalues.

    At theta = 0 a fiber is ``H(-xi_k)`` in t plus the Dirichlet Laplacian
    in s, so its eigenvalues are ``mu_j(-xi_k) + p_n^2`` with
    ``p_n = pi n / L`` (or the 3-point value when ``ds`` is given).
    """
    spec = CylinderSpec(0.0, lam, L)
    total = 0.0
    for xi in fiber_frequencies(spec):
        for j in range(1, j_max + 1):
            m = degennes.mu(-xi, j)
            if m >= lam:
                break
            n = np.arange(1, int(L * math.sqrt(lam) / math.pi) + 2)
            if ds is None:
                p2 = (math.pi * n / L) ** 2
            else:
                n = n[n < round(L / ds)]
                p2 = 4.0 / ds**2 * np.sin(0.5 * math.pi * n * ds / L) ** 2
            total += float(np.sum(np.clip(lam - m - p2, 0.0, None)))
    return total / L**2


# ------------------------------------------------------------ 3-D Dirichlet


def _dirichlet_grid(spec):
    if spec.L > DIRICHLET_MAX_L or min(spec.ds, spec.dt) < DIRICHLET_MIN_SPACING - 1e-12:
        raise ProblemTooLarge(
            f"3-D solve limited to L <= {DIRICHLET_MAX_L} and spacing >= {DIRICHLET_MIN_SPACING}"
        )
    n = int(round(spec.L / spec.ds))
    h = spec.L / n
    nt = int(round(spec.T / spec.dt))
    if 8 * (n - 1) ** 6 * nt > DIRICHLET_MAX_WORK:
        raise ProblemTooLarge("3-D Dirichlet problem exceeds the work guard")
    walls = -0.5 * spec.L + h * np.arange(1, n)  # interior nodes for r and s
    ht = spec.T / nt
    t = (np.arange(nt) + 0.5) * ht
    return walls, h, t, ht


def assemble_dirichlet(spec):
    """Real symmetric form of the Hermitian 3-D matrix.

    Unknowns are ordered r fastest, then s, then t; each complex unknown is
    stored as the adjacent pair (real, imaginary), so every eigenvalue of the
    Hermitian matrix appears twice.
    """
    x, h, t, ht = _dirichlet_grid(spec)
    nx, nt = x.size, t.size
    bw = nx * nx  # complex half-bandwidth (t links)
    n = bw * nt
    bands = np.zeros((2 * n, 2 * bw + 2))
    c, sn = math.cos(spec.theta), math.sin(spec.theta)
    inv, invt = 1.0 / h**2, 1.0 / ht**2
    idx = np.arange(n).reshape(nt, nx, nx)  # [t, s, r]
    diag = np.full((nt, nx, nx), 4.0 * inv + 2.0 * invt)
    diag[0] -= invt  # reflection ghost at t = 0
    bands[0::2, 0] = diag.ravel()
    bands[1::2, 0] = diag.ravel()

    def couple(q, d, re, im):
        # complex entry H[q + d, q] = re + i im as the 2 x 2 block [[re, -im], [im, re]]
        bands[2 * q, 2 * d] = re
        bands[2 * q + 1, 2 * d] = re
        bands[2 * q, 2 * d + 1] = im
        bands[2 * q + 1, 2 * d - 1] = -im

    # r links with Peierls factor exp(-i a h), a = t cos - s sin constant along r
    a = np.broadcast_to((t[:, None] * c - x[None, :] * sn)[:, :, None], (nt, nx, nx - 1))
    couple(idx[:, :, :-1].ravel(), 1, -np.cos(a * h).ravel() * inv, np.sin(a * h).ravel() * inv)
    couple(idx[:, :-1, :].ravel(), nx, -inv, 0.0)
    couple(idx[:-1].ravel(), bw, -invt, 0.0)
    return BandedMatrix(bands)


def dirichlet_eigenvalues(spec, window=None):
    window = spec.lam if window is None else window
    w = eigs_below_band(assemble_dirichlet(spec), window, EIG_TOL)
    return w.eigenvalues[::2]


def dirichlet_energy(spec):
    """Per-area energy of the coarse 3-D problem with Dirichlet walls in r and s."""
    spec = replace(spec, bc_r="dirichlet")
    w = SpectralWindow(spec.lam, dirichlet_eigenvalues(spec))
    return w.deficit / spec.L**2


# ------------------------------------------------------------ studies


@dataclass(frozen=True)
class StudyRow:
    L: float
    energy_per_area: float
    gap: float


@dataclass(frozen=True)
class ConvergenceStudy:
    theta: float
    lam: float
    limit: float
    rows: list
    exponent: float | None  # fitted decay rate of the gap, gap ~ L^-exponent
    extrapolated: float | None  # 1/L extrapolation from the last two rows


def convergence_study(theta, lam, L_list, **spec_kw):
    L_list = [float(x) for x in L_list]
    if any(b <= a for a, b in zip(L_list, L_list[1:])):
        raise ValidationError("L_list must be ascending")
    limit = energy.energy_density(theta, lam).value
    rows = []
    for L in L_list:
        spec = CylinderSpec(theta, lam, L, **spec_kw)
        # at theta = 0 the fibers separate exactly; same s stencil, much cheaper
        e = separable_energy(lam, L, ds=spec.ds) if theta == 0.0 else fiber_energy(spec)
        rows.append(StudyRow(L, e, limit - e))
    gaps = np.array([r.gap for r in rows])
    exponent = None
    if len(rows) >= 2 and np.all(gaps > 0):
        slope = np.polyfit(np.log(L_list), np.log(gaps), 1)[0]
        exponent = float(-slope)
    extrap = None
    if len(rows) >= 2:
        (L1, e1), (L2, e2) = [(r.L, r.energy_per_area) for r in rows[-2:]]
        extrap = (L2 * e2 - L1 * e1) / (L2 - L1)
    return ConvergenceStudy(theta, lam, limit, rows, exponent, extrap)


def count_energy_gap(eigenvalues, lam, sigma):
    """``E(lam) + sigma N(lam + sigma) - E(lam + sigma)`` for a finite spectrum (never negative)."""
    e = np.asarray(eigenvalues, dtype=float)
    E = lambda x: float(np.sum(np.clip(x - e, 0.0, None)))
    N = int(np.count_nonzero(e < lam + sigma))
    return E(lam) + sigma * N - E(lam + sigma)

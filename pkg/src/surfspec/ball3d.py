"""Direct eigensolve of (-ih grad + A)^2 on the unit ball, constant field B e_z.

With ``A = (B/2)(-y, x, 0)`` the operator commutes with rotations about the
z-axis, so ``u = v(rho, phi) e^{i m varphi}`` splits it into the meridian
problems

    q_m(v) = int [h^2 (v_rho^2 + v_phi^2 / rho^2)
                  + (h m / (rho sin phi) + B rho sin phi / 2)^2 v^2] rho^2 sin phi

on ``(0, 1) x (0, pi)``.  The form is discretized by cell-centered finite
volumes: face weights ``rho^2 sin phi`` vanish at rho = 0 and on the axis,
and the sphere rho = 1 carries no face term, which is the natural (magnetic
Neumann) condition since ``nu . A = 0`` there.  The field and ball are even
under z -> -z, so each mode further splits into even/odd halves on
``phi in (0, pi/2)``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from ._parallel import ordered_map
from .errors import ProblemTooLarge, ValidationError
from .linalg_core import BandedMatrix, SpectralWindow, eigs_below_band

MAX_GRID = (512, 1024)
SKIP_RUN = 3


@dataclass(frozen=True)
class MeridianGrid:
    n_rho: int = 128
    n_phi: int = 256

    def __post_init__(self):
        if self.n_rho < 2 or self.n_phi < 2 or self.n_phi % 2:
            raise ValidationError("grid needs n_rho >= 2 and an even n_phi >= 2")
        if self.n_rho > MAX_GRID[0] or self.n_phi > MAX_GRID[1]:
            raise ProblemTooLarge(f"grid {self.n_rho}x{self.n_phi} exceeds {MAX_GRID}")

    @property
    def rho(self):
        return (np.arange(self.n_rho) + 0.5) / self.n_rho

    @property
    def phi(self):
        return (np.arange(self.n_phi) + 0.5) * math.pi / self.n_phi

    def refined(self):
        return MeridianGrid(2 * self.n_rho, 2 * self.n_phi)


@dataclass(frozen=True)
class ModeProblem:
    m: int
    h: float
    B: float
    grid: MeridianGrid
    parity: int | None = None  # None: full (0, pi); +1 even / -1 odd on (0, pi/2)

    def __post_init__(self):
        if not (self.h > 0 and self.B > 0):
            raise ValidationError("h and B must be positive")
        if self.parity not in (None, 1, -1):
            raise ValidationError("parity must be None, +1 or -1")


def mode_potential(m, h, B, rho, phi):
    r = np.outer(np.sin(phi), rho)  # cylindrical radius, shape (n_phi, n_rho)
    return (h * m / r + 0.5 * B * r) ** 2


def potential_floor(m, h, B, grid):
    """Minimum of the mode potential over the grid cells."""
    return float(np.min(mode_potential(m, h, B, grid.rho, grid.phi)))


def mode_matrix(prob):
    """Pencil (K, M) of the m-th meridian form; rho runs fastest."""
    g = prob.grid
    nr = g.n_rho
    drho, dphi = 1.0 / nr, math.pi / g.n_phi
    rho = g.rho
    if prob.parity is None:
        phi = g.phi
    else:
        phi = g.phi[: g.n_phi // 2]
    nphi = phi.size
    h2 = prob.h**2
    sphi = np.sin(phi)
    face_rho = (np.arange(1, nr) / nr) ** 2  # interior rho faces
    face_phi = np.sin((np.arange(1, nphi) + 0.0) * dphi)  # interior phi faces
    V = mode_potential(prob.m, prob.h, prob.B, rho, phi)
    n = nr * nphi
    bands = np.zeros((n, nr + 1))
    mass = (np.outer(sphi, rho**2)).ravel()
    diag = (V * np.outer(sphi, rho**2)).ravel()
    # rho couplings inside each phi row
    crho = h2 * np.outer(sphi, face_rho) / drho**2  # (nphi, nr-1)
    d2 = diag.reshape(nphi, nr)
    d2[:, :-1] += crho
    d2[:, 1:] += crho
    off1 = np.zeros((nphi, nr))
    off1[:, :-1] = -crho
    # phi couplings between rows (weight sin(phi_face), the rho^2 cancels 1/rho^2)
    cphi = h2 * face_phi / dphi**2  # (nphi-1,)
    d2[:-1, :] += cphi[:, None]
    d2[1:, :] += cphi[:, None]
    offn = np.zeros((nphi, nr))
    offn[:-1, :] = -cphi[:, None]
    if prob.parity == -1:
        # odd about the equator: the mirror cell holds -v, and the equator
        # face term w (2 v)^2 is shared between the two halves
        d2[-1, :] += 2.0 * h2 * math.sin(nphi * dphi) / dphi**2
    bands[:, 0] = d2.ravel()
    bands[:, 1] = off1.ravel()
    bands[:, nr] = offn.ravel()
    return BandedMatrix(bands, mass)


@dataclass(frozen=True)
class BallWindow:
    h: float
    Lambda: float
    B: float
    modes: dict = field(repr=False)  # (m, parity) -> SpectralWindow

    @property
    def threshold(self):
        return self.Lambda * self.h

    @property
    def count(self):
        return sum(w.count for w in self.modes.values())

    @property
    def deficit(self):
        total = 0.0
        for key in sorted(self.modes):
            total += self.modes[key].deficit
        return total

    def eigenvalues(self):
        return np.sort(np.concatenate([w.eigenvalues for w in self.modes.values()] or [np.empty(0)]))

    def contributing_modes(self):
        return sorted({m for (m, _), w in self.modes.items() if w.count})


def _mode_window(args):
    m, parity, h, B, grid, threshold, tol = args
    B_ = mode_matrix(ModeProblem(m, h, B, grid, parity))
    return eigs_below_band(B_, threshold, tol)


def ball_window(h, Lambda, B=1.0, grid=None, *, positive_buffer=2):
    """All eigenvalues below ``Lambda * h``, collected mode by mode.

    Modes are scanned from m = 0 downward until three consecutive modes
    are excluded by the potential lower bound; ``positive_buffer`` modes
    m > 0 are solved as well.
    """
    grid = grid or MeridianGrid()
    if not 0.0 < h <= 1.0:
        raise ValidationError("h must lie in (0, 1]")
    if not 0.0 <= Lambda < B:
        raise ValidationError("need 0 <= Lambda < B")
    threshold = Lambda * h
    tol = 1e-10 * h
    ms = list(range(1, positive_buffer + 1))
    m, skipped = 0, 0
    while skipped < SKIP_RUN:
        if potential_floor(m, h, B, grid) >= threshold:
            skipped += 1
        else:
            skipped = 0
            ms.append(m)
        m -= 1
    ms = [m for m in ms if potential_floor(m, h, B, grid) < threshold]
    jobs = [(m, p, h, B, grid, threshold, tol) for m in sorted(ms) for p in (1, -1)]
    windows = ordered_map(_mode_window, jobs)
    modes = {(j[0], j[1]): w for j, w in zip(jobs, windows)}
    return BallWindow(h, Lambda, B, modes)


@dataclass(frozen=True)
class AsymptoticRow:
    h: float
    count: int
    deficit: float
    pred_energy: float
    pred_count: float

    @staticmethod
    def _ratio(value, pred):
        if value == 0.0 and pred == 0.0:
            return 1.0
        return value / pred if pred else math.inf

    @property
    def ratio_energy(self):
        return self._ratio(self.deficit, self.pred_energy)

    @property
    def ratio_count(self):
        return self._ratio(self.h * self.count, self.pred_count)


def predictions(Lambda, B=1.0, resolution=(4096, 4), density=None):
    """Boundary-integral predictions for the unit ball in the field ``(0, 0, B)``."""
    from . import geometry

    mesh = geometry.make_surface("sphere", (1.0,), resolution)
    field_ = (0.0, 0.0, B)
    return (geometry.predict_energy(mesh, field_, Lambda, density),
            geometry.predict_count(mesh, field_, Lambda, density))


def asymptotic_table(h_list, Lambda, B=1.0, grid=None, density=None):
    """Rows comparing the ball spectrum with the boundary-integral predictions."""
    h_list = [float(h) for h in h_list]
    if len(h_list) < 3 or any(b >= a for a, b in zip(h_list, h_list[1:])):
        raise ValidationError("h_list must be descending with at least three entries")
    pe, pc = predictions(Lambda, B, density=density)
    rows = []
    for h in h_list:
        w = ball_window(h, Lambda, B, grid)
        rows.append(AsymptoticRow(h, w.count, w.deficit, pe, pc))
    return rows

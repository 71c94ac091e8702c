"""Boundary energy and counting densities E(theta, lambda) and n(theta, lambda).

For a field making angle theta with the boundary,

* theta = 0:  E = (1/3 pi^2) int (mu_1(xi) - lambda)_-^{3/2} dxi,
              n = (1/2 pi^2) int (mu_1(xi) - lambda)_-^{1/2} dxi;
* theta > 0:  E = sin(theta)/(2 pi) sum_j (zeta_j(theta) - lambda)_-,
              n = sin(theta)/(2 pi) #{zeta_j(theta) < lambda}.

Angles below ``THETA_MIN`` use the theta = 0 expressions: the half-plane
eigenfunctions spread like 1/sin(theta) and the box solve becomes too
expensive, while both expressions agree in the limit.
"""

from dataclasses import dataclass
import json
import math
from pathlib import Path

import numpy as np

from . import degennes, lupan
from .errors import ValidationError

THETA_MIN = lupan.THETA_MIN
LAMBDA_MAX = lupan.WINDOW_MAX
RESONANCE_TOL = 1e-9


@dataclass(frozen=True)
class EnergyDensity:
    theta: float
    lam: float
    value: float
    branch: str


@dataclass(frozen=True)
class CountDensity:
    theta: float
    lam: float
    value: float
    branch: str
    # value with eigenvalues within RESONANCE_TOL above lambda also counted
    value_upper: float | None = None

    @property
    def near_resonance(self):
        return self.value_upper is not None and self.value_upper != self.value


def _check(theta, lam):
    if not -1e-15 <= theta <= math.pi / 2 + 1e-12:
        raise ValidationError("theta must lie in [0, pi/2]")
    if not 0.0 <= lam <= LAMBDA_MAX:
        raise ValidationError(f"lambda must lie in [0, {LAMBDA_MAX}]")


def theta_zero_energy(lam, delta=degennes.DEFAULT_DELTA):
    return degennes.moment_integral(lam, 1.5, delta) / (3.0 * math.pi**2)


def theta_zero_count(lam, delta=degennes.DEFAULT_DELTA):
    return degennes.moment_integral(lam, 0.5, delta) / (2.0 * math.pi**2)


def energy_density(theta, lam, *, box=None):
    _check(theta, lam)
    theta, lam = float(theta), float(lam)
    if theta < THETA_MIN:
        return EnergyDensity(theta, lam, theta_zero_energy(lam), "theta_zero")
    spec = lupan.zetas(theta, lupan.WINDOW_MAX, box)
    value = math.sin(theta) / (2.0 * math.pi) * spec.deficit(lam)
    return EnergyDensity(theta, lam, value, "theta_positive")


def count_density(theta, lam, *, box=None):
    _check(theta, lam)
    theta, lam = float(theta), float(lam)
    if theta < THETA_MIN:
        return CountDensity(theta, lam, theta_zero_count(lam), "theta_zero")
    spec = lupan.zetas(theta, lupan.WINDOW_MAX, box)
    factor = math.sin(theta) / (2.0 * math.pi)
    n = spec.count_below(lam)
    n_up = int(np.count_nonzero(spec.zetas < lam + RESONANCE_TOL))
    return CountDensity(theta, lam, factor * n, "theta_positive", factor * n_up)


@dataclass(frozen=True)
class ScanRow:
    theta: float
    e_theta: float
    e_zero: float

    @property
    def ratio(self):
        if self.e_zero == 0.0 and self.e_theta == 0.0:
            return 1.0
        return self.e_theta / self.e_zero


def theta_zero_limit_scan(lam, thetas):
    """Compare sin(theta)/(2 pi) sum (zeta_j - lam)_- with E(0, lam) for small theta."""
    rows = []
    e0 = theta_zero_energy(lam)
    for th in thetas:
        if not math.radians(3.0) - 1e-12 <= th <= math.radians(20.0) + 1e-12:
            raise ValidationError("scan angles must lie in [3 deg, 20 deg]")
        spec = lupan.zetas(th, lupan.WINDOW_MAX)
        rows.append(ScanRow(th, math.sin(th) / (2.0 * math.pi) * spec.deficit(lam), e0))
    return rows


# ------------------------------------------------------------ tabulated form


class DensityTable:
    """Half-plane spectra tabulated in theta, for fast surface quadrature.

    Each branch ``zeta_j`` is interpolated (monotone cubic) between the
    tabulated angles; past the angle where a branch leaves the window it is
    pinned at the window value, which contributes nothing for
    ``lambda <= window``.  Angles below ``THETA_MIN`` use the theta = 0
    expressions exactly as :func:`energy_density` does.
    """

    def __init__(self, thetas, spectra, window=lupan.WINDOW_MAX, delta=degennes.DEFAULT_DELTA):
        from scipy.interpolate import PchipInterpolator

        self.thetas = np.asarray(thetas, dtype=float)
        if self.thetas[0] > THETA_MIN + 1e-12 or np.any(np.diff(self.thetas) <= 0):
            raise ValidationError("table angles must be increasing and start at THETA_MIN")
        self.spectra = [np.asarray(z, dtype=float) for z in spectra]
        self.window = float(window)
        self.delta = delta
        nmax = max((z.size for z in self.spectra), default=0)
        grid = np.full((self.thetas.size, nmax), self.window)
        for i, z in enumerate(self.spectra):
            grid[i, : z.size] = z
        self._branches = grid
        self._interp = [PchipInterpolator(self.thetas, grid[:, j]) for j in range(nmax)]
        self._zero = {}

    @classmethod
    def build(cls, thetas, window=lupan.WINDOW_MAX, progress=None):
        spectra = []
        for th in thetas:
            spectra.append(lupan.zetas(float(th), window).zetas)
            if progress:
                progress(th, spectra[-1])
        return cls(thetas, spectra, window)

    @staticmethod
    def default_angles():
        deg = np.concatenate([np.arange(3.0, 30.0, 0.5), np.arange(30.0, 90.0, 2.0), [90.0]])
        return np.radians(deg)

    def to_json(self):
        return {
            "thetas": self.thetas.tolist(),
            "window": self.window,
            "spectra": [z.tolist() for z in self.spectra],
        }

    @classmethod
    def from_json(cls, data):
        return cls(data["thetas"], data["spectra"], data["window"])

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def load(cls, path):
        return cls.from_json(json.loads(Path(path).read_text()))

    def zetas(self, theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        z = np.stack([f(theta) for f in self._interp], axis=-1) if self._interp else np.zeros(theta.shape + (0,))
        return z

    def _theta_zero(self, lam, p):
        key = (round(float(lam), 14), p)
        if key not in self._zero:
            if p == 1.5:
                self._zero[key] = theta_zero_energy(lam, self.delta)
            else:
                self._zero[key] = theta_zero_count(lam, self.delta)
        return self._zero[key]

    def _evaluate(self, theta, lam, kind):
        theta = np.asarray(theta, dtype=float)
        lam = np.broadcast_to(np.asarray(lam, dtype=float), theta.shape)
        if np.any(lam > self.window) or np.any(lam < 0):
            raise ValidationError(f"lambda must lie in [0, {self.window}]")
        if np.any(theta < -1e-15) or np.any(theta > math.pi / 2 + 1e-12):
            raise ValidationError("theta must lie in [0, pi/2]")
        out = np.zeros(theta.shape)
        small = theta < THETA_MIN
        for idx in zip(*np.nonzero(small)):
            out[idx] = self._theta_zero(lam[idx], 1.5 if kind == "energy" else 0.5)
        big = ~small
        if np.any(big):
            th = theta[big]
            z = self.zetas(th)
            lb = lam[big][:, None]
            if kind == "energy":
                s = np.sum(np.clip(lb - z, 0.0, None), axis=-1)
            else:
                s = np.sum(z < lb, axis=-1)
            out[big] = np.sin(th) / (2.0 * math.pi) * s
        return out

    def energy(self, theta, lam):
        return self._evaluate(theta, lam, "energy")

    def count(self, theta, lam):
        return self._evaluate(theta, lam, "count")


class DirectDensity:
    """Pointwise densities from fresh half-plane solves (cached per angle)."""

    def energy(self, theta, lam):
        theta = np.asarray(theta, dtype=float)
        lam = np.broadcast_to(np.asarray(lam, dtype=float), theta.shape)
        return np.vectorize(lambda t, l: energy_density(t, l).value)(theta, lam)

    def count(self, theta, lam):
        theta = np.asarray(theta, dtype=float)
        lam = np.broadcast_to(np.asarray(lam, dtype=float), theta.shape)
        return np.vectorize(lambda t, l: count_density(t, l).value)(theta, lam)


_TABLE_PATH = Path(__file__).with_name("data") / "lupan_table.json"
_default_table = None


def default_table():
    """The shipped table (regenerate with ``surfspec fixtures regenerate``)."""
    global _default_table
    if _default_table is None:
        _default_table = DensityTable.load(_TABLE_PATH)
    return _default_table

"""Boundary surfaces, the field angle theta(x), and the boundary integrals

    E_pred = int |B|^2 E(theta(x), Lambda / |B|) dsigma,
    N_pred = int |B|   n(theta(x), Lambda / |B|) dsigma.

Surfaces are parametrized by polar angle u in (0, pi) and longitude v.  The
rule is composite Gauss-Legendre in u (panels of at most 16 points, so no
node sits on a pole) times the periodic trapezoid rule in v, with the exact
Jacobian ``|r_u x r_v|``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import energy
from .errors import BadParams, LambdaTooLarge, ZeroField

PANEL_ORDER = 16
RESONANCE_TOL = 1e-3


@dataclass(frozen=True)
class SurfaceMesh:
    kind: str
    params: tuple
    resolution: tuple  # (n_lat, n_lon)
    nodes: np.ndarray = field(repr=False)
    normals: np.ndarray = field(repr=False)  # unit interior normals
    weights: np.ndarray = field(repr=False)

    @property
    def area(self):
        return float(np.sum(self.weights))

    def refined(self, factor=2):
        n_lat, n_lon = self.resolution
        return make_surface(self.kind, self.params, (factor * n_lat, factor * n_lon))


def _latitude_rule(n):
    order = min(n, PANEL_ORDER)
    if n % order:
        raise BadParams(f"n_lat must be a multiple of {order} above {PANEL_ORDER}")
    x, w = np.polynomial.legendre.leggauss(order)
    panels = n // order
    edges = np.linspace(0.0, math.pi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wu = (half[:, None] * w[None, :]).ravel()
    return u, wu


def make_surface(kind, params, resolution=64):
    """Quadrature mesh of a sphere (``params=(R,)``) or ellipsoid (``(a, b, c)``).

    ``resolution`` is ``n_lat`` (with ``n_lon = 2 n_lat``) or a pair.
    """
    if kind == "sphere":
        if len(params) != 1:
            raise BadParams("sphere takes one radius")
        axes = (params[0],) * 3
    elif kind == "ellipsoid":
        if len(params) != 3:
            raise BadParams("ellipsoid takes three semi-axes")
        axes = tuple(params)
    else:
        raise BadParams(f"unknown surface kind {kind!r}")
    if not all(math.isfinite(x) and x > 0 for x in axes):
        raise BadParams("radii must be positive")
    if np.isscalar(resolution):
        resolution = (int(resolution), 2 * int(resolution))
    n_lat, n_lon = (int(r) for r in resolution)
    if n_lat < 1 or n_lon < 1:
        raise BadParams("resolution must be positive")
    a, b, c = (float(x) for x in axes)
    u, wu = _latitude_rule(n_lat)
    v = 2.0 * math.pi * np.arange(n_lon) / n_lon
    wv = 2.0 * math.pi / n_lon
    U, V = np.meshgrid(u, v, indexing="ij")
    su, cu, sv, cv = np.sin(U), np.cos(U), np.sin(V), np.cos(V)
    nodes = np.stack([a * su * cv, b * su * sv, c * cu], axis=-1)
    # r_u x r_v, outward
    cross = np.stack([b * c * su**2 * cv, a * c * su**2 * sv, a * b * su * cu], axis=-1)
    jac = np.linalg.norm(cross, axis=-1)
    normals = -cross / jac[..., None]
    weights = jac * wu[:, None] * wv
    return SurfaceMesh(kind, tuple(float(p) for p in params), (n_lat, n_lon),
                       nodes.reshape(-1, 3), normals.reshape(-1, 3), weights.ravel())


@dataclass(frozen=True)
class FieldSample:
    B: np.ndarray  # (N, 3)
    bnorm: np.ndarray
    theta: np.ndarray


def _field_at(mesh, B):
    if callable(B):
        vals = np.asarray(B(mesh.nodes), dtype=float)
    else:
        vals = np.broadcast_to(np.asarray(B, dtype=float), mesh.nodes.shape)
    if vals.shape != mesh.nodes.shape:
        raise BadParams("field must be a 3-vector or return one per node")
    return vals


def theta_field(mesh, B):
    """``theta(x) = arcsin(|B . nu| / |B|)`` at every node."""
    vals = _field_at(mesh, B)
    bnorm = np.linalg.norm(vals, axis=1)
    if not np.all(bnorm > 0):
        raise ZeroField("the field vanishes at a boundary node")
    cosine = np.abs(np.einsum("ij,ij->i", vals, mesh.normals)) / bnorm
    return FieldSample(vals, bnorm, np.arcsin(np.clip(cosine, 0.0, 1.0)))


def _local(mesh, B, Lambda):
    fs = theta_field(mesh, B)
    b = float(np.min(fs.bnorm))
    if not Lambda < b:
        raise LambdaTooLarge(f"Lambda={Lambda} is not below min |B| = {b}")
    if Lambda < 0:
        raise BadParams("Lambda must be nonnegative")
    return fs, Lambda / fs.bnorm


def predict_energy(mesh, B, Lambda, density=None):
    """``int |B|^2 E(theta, Lambda/|B|) dsigma`` by the mesh rule."""
    density = density or energy.default_table()
    fs, lam = _local(mesh, B, Lambda)
    vals = fs.bnorm**2 * density.energy(fs.theta, lam)
    return float(np.dot(mesh.weights, vals))


def predict_count(mesh, B, Lambda, density=None):
    """``int |B| n(theta, Lambda/|B|) dsigma`` by the mesh rule."""
    density = density or energy.default_table()
    fs, lam = _local(mesh, B, Lambda)
    vals = fs.bnorm * density.count(fs.theta, lam)
    return float(np.dot(mesh.weights, vals))


@dataclass(frozen=True)
class ResonanceReport:
    levels: list  # (node count, tolerance, resonant area fraction)
    flagged: bool

    @property
    def fraction(self):
        return self.levels[-1][2]


def resonant_fraction(mesh, B, Lambda, tol=RESONANCE_TOL, density=None):
    density = density or energy.default_table()
    fs, lam = _local(mesh, B, Lambda)
    mask = np.zeros(lam.shape, dtype=bool)
    big = fs.theta >= energy.THETA_MIN
    if np.any(big):
        z = density.zetas(fs.theta[big])
        mask[big] = np.any(np.abs(z - lam[big, None]) < tol, axis=-1)
    return float(np.dot(mesh.weights, mask) / np.sum(mesh.weights))


def resonance_check(mesh, B, Lambda, tol=RESONANCE_TOL, levels=3, density=None):
    """Surface fraction where ``Lambda/|B|`` is within ``tol`` of some ``zeta_j(theta)``.

    The mesh is refined ``levels - 1`` times and the tolerance halved with
    each refinement.  A resonant set of measure zero (such as a circle)
    makes the fraction shrink with the tolerance; the report is flagged
    when the finest fraction is still at least half the coarsest one.
    """
    rows = []
    m, t = mesh, tol
    for k in range(levels):
        if k:
            m, t = m.refined(), 0.5 * t
        rows.append((int(m.weights.size), t, resonant_fraction(m, B, Lambda, t, density)))
    first, last = rows[0][2], rows[-1][2]
    return ResonanceReport(rows, bool(first > 0 and last >= 0.5 * first))

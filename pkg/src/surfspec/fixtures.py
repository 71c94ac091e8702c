"""Oracle-pinned reference values and the shipped half-plane spectrum table.

The pinned values are computed by routes that share no code with the
production solvers: LAPACK's tridiagonal eigensolver in place of the Sturm
bisection, scipy's bounded scalar minimizer in place of the golden-section
search, and a uniform midpoint rule in place of the graded Gauss rule.
They are written once and frozen; tests compare the production path against
them.
"""

from functools import lru_cache
import json
import math
from pathlib import Path

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq, minimize_scalar

DATA_DIR = Path(__file__).with_name("data")
PINNED_FILE = "pinned.json"
TABLE_FILE = "lupan_table.json"


@lru_cache(maxsize=None)
def oracle_mu(xi, j=1, delta=0.005, margin=10.0):
    """Richardson-extrapolated mu_j(xi) from LAPACK on two cell-centered grids."""

    def raw(d):
        n = int(math.ceil((max(xi, 0.0) + margin) / d - 1e-9))
        n += n % 2
        t = (np.arange(n) + 0.5) * d
        diag = 2.0 / d**2 + (t - xi) ** 2
        diag[0] -= 1.0 / d**2
        off = np.full(n - 1, -1.0 / d**2)
        return eigh_tridiagonal(diag, off, eigvals_only=True, select="i",
                                select_range=(j - 1, j - 1))[0]

    return (4.0 * raw(delta) - raw(2.0 * delta)) / 3.0


def oracle_theta0(delta=0.005):
    res = minimize_scalar(lambda x: oracle_mu(x, 1, delta), bounds=(0.0, 1.0),
                          method="bounded", options={"xatol": 1e-10})
    return float(res.fun), float(res.x)


def oracle_moment(lam, p, step=1e-4, delta=0.005):
    """``(value, xi_minus, xi_plus)``: uniform midpoint sum of ``(lam - mu_1)_+^p`` over the support."""
    theta0, xi0 = oracle_theta0(delta)
    if lam <= theta0:
        return 0.0, None, None
    f = lambda x: oracle_mu(x, 1, delta) - lam
    left = brentq(f, -1.0, xi0, xtol=1e-12)
    hi = xi0 + 1.0
    while f(hi) < 0:
        hi += 1.0
    right = brentq(f, xi0, hi, xtol=1e-12)
    n = int(math.ceil((right - left) / step))
    h = (right - left) / n
    xs = left + h * (np.arange(n) + 0.5)
    vals = np.array([max(-f(x), 0.0) ** p for x in xs])
    return float(h * np.sum(vals)), left, right


def compute_pinned(progress=print):
    """All pinned values; runs for a few minutes."""
    from . import lupan

    out = {}
    t0, x0 = oracle_theta0(0.005)
    t1, x1 = oracle_theta0(0.01)
    out["theta0"], out["xi0"] = t0, x0
    out["theta0_delta_0.01"] = t1
    progress(f"theta0={t0:.12f} xi0={x0:.8f}")
    for p in (1.5, 0.5):
        for lam in (0.8, 0.85, 0.9):
            m, left, right = oracle_moment(lam, p)
            out[f"moment_{lam}_{p}"] = m
            out[f"support_{lam}"] = [left, right]
            progress(f"moment lam={lam} p={p}: {m:.10f}")
    # fine-grid oracle for the half-plane count: halve ds on an enlarged box
    theta = math.radians(10.0)
    box = lupan.default_box(theta).enlarged(1.5).refined()
    out["lupan_count_10deg_0.9"] = lupan.count_below(theta, 0.9, box)
    out["lupan_count_45deg_0.9"] = lupan.count_below(math.radians(45.0), 0.9,
                                                     lupan.default_box(math.radians(45.0)).refined())
    progress(f"counts: {out['lupan_count_10deg_0.9']}, {out['lupan_count_45deg_0.9']}")
    return out


def load_pinned(data_dir=DATA_DIR):
    return json.loads((Path(data_dir) / PINNED_FILE).read_text())


def regenerate(data_dir=DATA_DIR, table=True, pinned=True, progress=print):
    from .energy import DensityTable

    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if pinned:
        path = data_dir / PINNED_FILE
        path.write_text(json.dumps(compute_pinned(progress), indent=1, sort_keys=True) + "\n")
        written.append(path)
    if table:
        path = data_dir / TABLE_FILE
        report = lambda th, z: progress(f"table theta={math.degrees(th):.2f} deg: {len(z)} eigenvalues")
        DensityTable.build(DensityTable.default_angles(), progress=report).save(path)
        written.append(path)
    return written

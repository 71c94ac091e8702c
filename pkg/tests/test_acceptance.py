"""Acceptance criteria, one test each.

Each test reports a ``CRITERION n: PASS|FAIL ...`` line (collected into the
terminal summary) before asserting, so failing criteria still show their
measured values.  Tolerances and budgets are fixed here.
"""

import math
import time

import numpy as np
import pytest
from scipy.linalg import eigvalsh

from surfspec import ball3d, degennes, energy, geometry, halfcylinder as hc, lupan
from surfspec.linalg_core import (BandedMatrix, TridiagonalMatrix, count_below_band,
                                  eigs_below_band, eigs_below_tridiag, sturm_count)

DEG = math.pi / 180.0

# criterion 1
MU1_TOL, MU2_TOL, BUDGET_1 = 1e-6, 1e-5, 1.0
# criterion 2
THETA0_AGREE, BUDGET_2 = 1e-6, 10.0
# criterion 3
CROSS_TOL, BUDGET_3 = 5e-3, 120.0
# criterion 4
SWEEP_DEG = list(range(5, 90, 10))
COUNT_LEVEL = 0.95
C_FIT = lupan.COUNT_BOUND
EMPTY_LEVEL, BUDGET_4 = 0.99, 600.0
# criterion 5
LIMIT_REL, BUDGET_5 = 0.03, 600.0
# criterion 6
NE_DRAWS, MONO_SLACK, UPPER_SLACK, BUDGET_6 = 50, 0.02, 0.02, 900.0
# criterion 7
SCAN_LAMBDA, SCAN_TOL, BUDGET_7 = 0.85, 0.05, 600.0
# criterion 8
AREA_TOL, ORACLE_REL, HOMOG_REL, BUDGET_8 = 1e-10, 1e-5, 1e-13, 60.0
SPHERE_RES = (8192, 4)
# criterion 9
BALL_H = [0.08, 0.05, 0.03]
BALL_LAMBDA, LOW_LAMBDA, FINAL_BAND = 0.8, 0.4, 0.2
# criterion 10
RANDOM_MATRICES, KERNEL_REL, BUDGET_10 = 200, 1e-9, 30.0


def check(report, n, ok, detail):
    report(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def test_criterion_01_de_gennes_exactness(report):
    degennes._mu_cached.cache_clear()
    with Timer() as tm:
        m1 = degennes.mu(0.0, 1)
        m2 = degennes.mu(0.0, 2)
    e1, e2 = abs(m1 - 1.0), abs(m2 - 5.0)
    ok = e1 <= MU1_TOL and e2 <= MU2_TOL and tm.seconds < BUDGET_1
    check(report, 1, ok, f"|mu1(0)-1|={e1:.2e} (tol {MU1_TOL:g}), |mu2(0)-5|={e2:.2e} "
                         f"(tol {MU2_TOL:g}), {tm.seconds:.2f}s")


def test_criterion_02_theta0_stability(report):
    degennes.minimize_mu1.cache_clear()
    with Timer() as tm:
        t_fine, x0 = degennes.minimize_mu1(0.005)
        t_coarse, _ = degennes.minimize_mu1(0.01)
    gap = abs(t_fine - t_coarse)
    sides = degennes.mu(x0 - 0.05) > t_fine and degennes.mu(x0 + 0.05) > t_fine
    ok = gap <= THETA0_AGREE and 0.0 < t_fine < 1.0 and sides and tm.seconds < BUDGET_2
    check(report, 2, ok, f"Theta0={t_fine:.10f} xi0={x0:.6f}, |delta 0.01 vs 0.005|={gap:.2e} "
                         f"(tol {THETA0_AGREE:g}), minimum isolated={sides}, {tm.seconds:.1f}s")


def test_criterion_03_cross_model(report):
    with Timer() as tm:
        z1 = lupan.zetas(3 * DEG).zetas[0]
    t0, _ = degennes.minimize_mu1()
    gap = abs(z1 - t0)
    ok = gap <= CROSS_TOL and tm.seconds < BUDGET_3
    check(report, 3, ok, f"zeta1(3deg)={z1:.6f} Theta0={t0:.6f} gap={gap:.2e} (tol {CROSS_TOL:g}), "
                         f"{tm.seconds:.1f}s")


def test_criterion_04_lupan_structure(report):
    with Timer() as tm:
        z1 = [lupan.ground_state(d * DEG, richardson=True) for d in SWEEP_DEG]
        empty = lupan.zetas(math.pi / 2, EMPTY_LEVEL).count == 0
        scaled = [math.sin(d * DEG) * lupan.count_below(d * DEG, COUNT_LEVEL) for d in [3] + SWEEP_DEG + [90]]
    monotone = all(b >= a for a, b in zip(z1, z1[1:]))
    below = [d for d, z in zip(SWEEP_DEG, z1) if not z < 1.0]
    bounded = max(scaled) <= C_FIT
    ok = monotone and not below and empty and bounded and tm.seconds < BUDGET_4
    zs = " ".join(f"{d}:{z:.6f}" for d, z in zip(SWEEP_DEG, z1))
    check(report, 4, ok, f"zeta1 [{zs}] nondecreasing={monotone} not-below-1 at {below or 'none'}; "
                         f"90deg empty below {EMPTY_LEVEL}={empty}; max sin*N({COUNT_LEVEL})="
                         f"{max(scaled):.3f} (C_fit {C_FIT}), {tm.seconds:.0f}s")


def test_criterion_05_thermodynamic_limit(report):
    with Timer() as tm:
        f60 = hc.fiber_energy(hc.CylinderSpec(60 * DEG, 0.85, L=40.0, T=10.0))
        e60 = energy.energy_density(60 * DEG, 0.85).value
        f0 = hc.separable_energy(0.9, 40.0)
        e0 = energy.energy_density(0.0, 0.9).value
        f0_20 = hc.separable_energy(0.9, 20.0)
    rel = lambda a, b: 0.0 if a == b == 0.0 else abs(a - b) / abs(b)
    r60, r0 = rel(f60, e60), rel(f0, e0)
    extrap = 2 * f0 - f0_20  # 1/L extrapolation through L = 20, 40
    ok = r60 <= LIMIT_REL and r0 <= LIMIT_REL and tm.seconds < BUDGET_5
    check(report, 5, ok, f"60deg: fiber={f60:.6g} E={e60:.6g} rel={r60:.3f}; 0deg L=40: separable={f0:.6g} "
                         f"E={e0:.6g} rel={r0:.3f} (tol {LIMIT_REL}); 1/L-extrapolated={extrap:.6g} "
                         f"rel={rel(extrap, e0):.4f}, {tm.seconds:.0f}s")


def test_criterion_06_inequalities(report):
    rng = np.random.default_rng(2024)
    with Timer() as tm:
        spectra = [hc.cylinder_eigenvalues(hc.CylinderSpec(th, 0.9, L=20.0), 0.995)
                   for th in (0.0, 30 * DEG)]
        worst = math.inf
        for k in range(NE_DRAWS):
            lam = rng.uniform(0.0, 0.99)
            sigma = rng.uniform(0.0, 1.0 - lam)
            worst = min(worst, hc.count_energy_gap(spectra[k % 2], lam, sigma))
        study = hc.convergence_study(0.0, 0.9, [10.0, 20.0, 40.0])
    per_area = [r.energy_per_area for r in study.rows]
    mono = all(b >= a * (1 - MONO_SLACK) for a, b in zip(per_area, per_area[1:]))
    upper = all(e <= study.limit * (1 + UPPER_SLACK) for e in per_area)
    ok = worst >= -1e-12 and mono and upper and tm.seconds < BUDGET_6
    rows = " ".join(f"L={r.L:g}:{r.energy_per_area:.6g}" for r in study.rows)
    check(report, 6, ok, f"min N-E gap over {NE_DRAWS} draws={worst:.3e}; per-area [{rows}] E={study.limit:.6g} "
                         f"nondecreasing={mono} below E={upper}, {tm.seconds:.0f}s")


def test_criterion_07_small_angle_matching(report):
    with Timer() as tm:
        r3, r10 = energy.theta_zero_limit_scan(SCAN_LAMBDA, [3 * DEG, 10 * DEG])
    ok = abs(r3.ratio - 1) <= SCAN_TOL and abs(r3.ratio - 1) < abs(r10.ratio - 1) and tm.seconds < BUDGET_7
    check(report, 7, ok, f"ratio(3deg)={r3.ratio:.4f} ratio(10deg)={r10.ratio:.4f} "
                         f"(tol {SCAN_TOL}), {tm.seconds:.0f}s")


def test_criterion_08_geometry_oracle(report):
    from test_geometry import reduced_oracle

    table = energy.default_table()
    table.energy(np.array([0.0, 0.5]), 0.8)  # warm the theta = 0 moment cache
    with Timer() as tm:
        area_err = abs(geometry.make_surface("sphere", (1.0,), 64).area - 4 * math.pi)
        mesh = geometry.make_surface("sphere", (1.0,), SPHERE_RES)
        e = geometry.predict_energy(mesh, (0, 0, 1), 0.8, table)
        e2 = geometry.predict_energy(mesh, (0, 0, 2), 1.6, table)
    oracle = reduced_oracle("energy", 0.8, table)
    rel = abs(e - oracle) / oracle
    hom = abs(e2 - 4 * e) / abs(4 * e)
    ok = area_err <= AREA_TOL and rel <= ORACLE_REL and hom <= HOMOG_REL and tm.seconds < BUDGET_8
    check(report, 8, ok, f"area error={area_err:.1e}; E_pred={e:.8g} oracle={oracle:.8g} rel={rel:.1e} "
                         f"(tol {ORACLE_REL:g}); homogeneity rel={hom:.1e}, {tm.seconds:.1f}s")


@pytest.mark.slow
def test_criterion_09_ball_semiclassics(report):
    with Timer() as tm:
        rows = ball3d.asymptotic_table(BALL_H, BALL_LAMBDA, 1.0)
        low = [ball3d.ball_window(h, LOW_LAMBDA, 1.0).count for h in BALL_H if h <= 0.05]
    dev_e = [abs(r.ratio_energy - 1) for r in rows]
    dev_c = [abs(r.ratio_count - 1) for r in rows]
    dec = lambda d: all(b < a for a, b in zip(d, d[1:]))
    ok = (dec(dev_e) and dec(dev_c) and dev_e[-1] <= FINAL_BAND and dev_c[-1] <= FINAL_BAND
          and not any(low))
    table = " ".join(f"h={r.h:g}:(E {r.ratio_energy:.3f}, N {r.ratio_count:.3f})" for r in rows)
    check(report, 9, ok, f"ratios {table}; final band {FINAL_BAND}; Lambda={LOW_LAMBDA} counts {low}, "
                         f"{tm.seconds:.0f}s")


def test_criterion_10_kernel_oracle(report):
    rng = np.random.default_rng(7)
    worst, counts_exact = 0.0, True
    with Timer() as tm:
        for k in range(RANDOM_MATRICES):
            n = int(rng.integers(2, 31))
            if k % 2:
                d, e = rng.normal(size=n), rng.normal(size=n - 1)
                T = TridiagonalMatrix(d, e)
                ref = eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
                sigma = float(rng.uniform(ref[0], ref[-1] + 0.5))
                got = eigs_below_tridiag(T, sigma, 1e-13).eigenvalues
                counts_exact &= sturm_count(T, sigma) == np.count_nonzero(ref < sigma)
            else:
                b = int(rng.integers(1, min(4, n - 1) + 1)) if n > 1 else 0
                a = np.zeros((n, n))
                for off in range(b + 1):
                    v = rng.normal(size=n - off)
                    a += np.diag(v, -off) + (np.diag(v, off) if off else 0)
                B = BandedMatrix.from_dense(a, b)
                ref = eigvalsh(a)
                sigma = float(rng.uniform(ref[0], ref[-1] + 0.5))
                got = eigs_below_band(B, sigma, 1e-13).eigenvalues
                counts_exact &= count_below_band(B, sigma) == np.count_nonzero(ref < sigma)
            want = ref[ref < sigma]
            if got.size != want.size:
                worst = math.inf
                continue
            scale = np.maximum(np.abs(want), 1.0)
            worst = max(worst, float(np.max(np.abs(got - want) / scale, initial=0.0)))
    ok = worst <= KERNEL_REL and counts_exact and tm.seconds < BUDGET_10
    check(report, 10, ok, f"{RANDOM_MATRICES} matrices, worst relative error={worst:.1e} "
                          f"(tol {KERNEL_REL:g}), counts exact={counts_exact}, {tm.seconds:.1f}s")

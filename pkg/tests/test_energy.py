import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from surfspec import degennes, energy, lupan
from surfspec.errors import ValidationError

DEG = math.pi / 180.0


@pytest.fixture(scope="module")
def table():
    return energy.default_table()


def test_right_angle_vanishes():
    assert energy.energy_density(math.pi / 2, 0.9).value == 0.0
    assert energy.count_density(math.pi / 2, 0.9).value == 0.0


@pytest.mark.parametrize("deg", [0.0, 2.0, 5.0, 45.0, 90.0])
def test_below_theta0_vanishes(deg):
    t0, _ = degennes.minimize_mu1()
    assert energy.energy_density(deg * DEG, 0.95 * t0).value == 0.0
    assert energy.count_density(deg * DEG, 0.5 * t0).value == 0.0


def test_branches():
    assert energy.energy_density(2 * DEG, 0.9).branch == "theta_zero"
    assert energy.energy_density(3 * DEG, 0.9).branch == "theta_positive"


def test_theta_zero_pinned(pinned):
    e = energy.energy_density(0.0, 0.9).value
    assert e == pytest.approx(pinned["moment_0.9_1.5"] / (3 * math.pi**2), rel=1e-5)
    n = energy.count_density(0.0, 0.9).value
    assert n == pytest.approx(pinned["moment_0.9_0.5"] / (2 * math.pi**2), rel=2e-5)


def test_count_pinned(pinned):
    n = energy.count_density(10 * DEG, 0.9).value
    assert n == pytest.approx(math.sin(10 * DEG) / (2 * math.pi) * pinned["lupan_count_10deg_0.9"])
    assert energy.count_density(45 * DEG, 0.9).value == pytest.approx(
        math.sin(45 * DEG) / (2 * math.pi) * pinned["lupan_count_45deg_0.9"])


def test_resonance_reports_both_counts():
    th = 15 * DEG
    z1 = lupan.zetas(th).zetas[0]
    c = energy.count_density(th, z1)
    assert c.near_resonance
    assert c.value == 0.0 and c.value_upper > 0.0
    assert not energy.count_density(th, z1 - 1e-3).near_resonance


def test_guards():
    with pytest.raises(ValidationError):
        energy.energy_density(0.3, 0.999)
    with pytest.raises(ValidationError):
        energy.energy_density(2.0, 0.5)


def test_table_matches_direct_on_nodes(table):
    for deg in (3.0, 10.0, 24.5, 40.0):
        for lam in (0.7, 0.85, 0.95):
            direct = energy.energy_density(deg * DEG, lam).value
            assert table.energy(np.array([deg * DEG]), lam)[0] == pytest.approx(direct, rel=1e-9, abs=1e-15)


def test_table_interpolation_close_to_direct(table):
    for deg in (7.25, 33.0):
        for lam in (0.8, 0.9):
            direct = energy.energy_density(deg * DEG, lam).value
            assert table.energy(np.array([deg * DEG]), lam)[0] == pytest.approx(direct, rel=2e-3, abs=1e-6)


def test_table_json_round_trip(table, tmp_path):
    path = tmp_path / "t.json"
    table.save(path)
    back = energy.DensityTable.load(path)
    th = np.linspace(0, math.pi / 2, 50)
    np.testing.assert_array_equal(back.energy(th, 0.9), table.energy(th, 0.9))


def test_energy_count_sandwich(table):
    # E(lam2) - E(lam1) lies between n(lam1) and n(lam2) times the step
    th = np.radians(np.linspace(0, 90, 46))
    lams = np.linspace(0.55, 0.99, 45)
    E = np.array([table.energy(th, l) for l in lams])
    n = np.array([table.count(th, l) for l in lams])
    dl = np.diff(lams)[:, None]
    dE = np.diff(E, axis=0)
    assert np.all(dE >= n[:-1] * dl - 1e-14)
    assert np.all(dE <= n[1:] * dl + 1e-14)


def test_lipschitz_and_bound(table):
    th = np.radians(np.linspace(0, 90, 91))
    lams = np.linspace(0.0, 0.99, 100)
    E = np.array([table.energy(th, l) for l in lams])
    slopes = np.abs(np.diff(E, axis=0)) / np.diff(lams)[:, None]
    c_lip = slopes.max()
    assert np.isfinite(c_lip) and c_lip < 1.0
    c_bound = np.max(E * np.sqrt(1 - lams)[:, None])
    assert np.all(E <= c_bound / np.sqrt(1 - lams)[:, None] + 1e-15)


def test_right_derivative_is_count():
    th, lam = 12 * DEG, 0.9
    n = energy.count_density(th, lam).value
    for d in (1e-4, 1e-5):
        e1 = energy.energy_density(th, lam + d).value
        e0 = energy.energy_density(th, lam).value
        assert (e1 - e0) / d == pytest.approx(n, rel=1e-9)


def test_joint_continuity(table):
    base = table.energy(np.array([20 * DEG]), 0.9)[0]
    gaps = [abs(table.energy(np.array([(20 + e) * DEG]), 0.9 + e / 100)[0] - base)
            for e in (1.0, 0.1, 0.01)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-4


def test_scan_conventions():
    t0, _ = degennes.minimize_mu1()
    rows = energy.theta_zero_limit_scan(0.9 * t0, [3 * DEG, 10 * DEG])
    assert all(r.ratio == 1.0 and r.e_theta == 0.0 for r in rows)
    with pytest.raises(ValidationError):
        energy.theta_zero_limit_scan(0.85, [30 * DEG])


def test_scan_small_angle_closer_than_twenty():
    r5, r20 = energy.theta_zero_limit_scan(0.85, [5 * DEG, 20 * DEG])
    assert abs(r5.ratio - 1) < abs(r20.ratio - 1)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, math.pi / 2), st.floats(0.0, 0.995), st.floats(0.0, 0.995))
def test_monotone_in_lambda(th, l1, l2):
    t = energy.default_table()
    lo, hi = sorted((l1, l2))
    assert t.energy(np.array([th]), lo)[0] <= t.energy(np.array([th]), hi)[0]
    assert t.count(np.array([th]), lo)[0] <= t.count(np.array([th]), hi)[0]

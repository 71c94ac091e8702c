import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from surfspec import degennes
from surfspec.errors import ValidationError
from surfspec.fixtures import oracle_mu


def test_assemble_two_cells():
    grid = degennes.HalfLineGrid(1.0, 2)
    T = degennes.assemble_h_xi(0.0, grid)
    d = grid.delta
    t0, t1 = 0.5 * d, 1.5 * d
    np.testing.assert_allclose(T.diag, [1 / d**2 + t0**2, 2 / d**2 + t1**2])
    np.testing.assert_allclose(T.offdiag, [-1 / d**2])


def test_harmonic_levels_at_zero():
    assert degennes.mu(0.0, 1) == pytest.approx(1.0, abs=1e-6)
    assert degennes.mu(0.0, 2) == pytest.approx(5.0, abs=1e-5)


def test_potential_lower_bound():
    assert degennes.mu(-3.0, 1) >= 9.0


def test_tail_approaches_one():
    assert abs(degennes.mu(6.0, 1) - 1.0) < 1e-4


def test_against_lapack_oracle():
    for xi in (-0.5, 0.3, 0.77, 2.0):
        assert degennes.mu(xi, 1) == pytest.approx(oracle_mu(xi), abs=1e-10)


def test_truncation_self_check_passes():
    degennes.mu(1.0, 1, check=True)


def test_bad_index():
    with pytest.raises(ValidationError):
        degennes.mu(0.0, 6)


def test_theta0_pinned(pinned):
    t0, x0 = degennes.minimize_mu1()
    assert 0.0 < t0 < 1.0
    assert t0 == pytest.approx(pinned["theta0"], abs=1e-6)
    assert x0 == pytest.approx(pinned["xi0"], abs=1e-4)
    assert degennes.mu(x0 - 0.05) > t0 and degennes.mu(x0 + 0.05) > t0


def test_second_eigenvalue_above_one():
    _, x0 = degennes.minimize_mu1()
    assert degennes.mu(x0, 2) > 1.0
    assert np.min(degennes.mu_curve(np.linspace(-1, 8, 37), 2)) > 1.0


def test_unimodal_sample():
    # past xi = 4 the gap 1 - mu_1 drops below the discretization error
    curve = degennes.DeGennesCurve.sample(np.linspace(-1.0, 4.0, 51))
    assert len(curve.local_minima()) == 1
    i = curve.local_minima()[0]
    assert np.all(np.diff(curve.mu1[: i + 1]) < 0)
    assert np.all(np.diff(curve.mu1[i:]) > 0)


def test_below_one_right_of_minimum():
    _, x0 = degennes.minimize_mu1()
    xs = np.linspace(x0 + 0.1, 4.0, 15)
    assert np.all(degennes.mu_curve(xs) < 1.0)
    # further out the tail sits within grid error of 1
    assert np.all(degennes.mu_curve(np.linspace(4.0, 8.0, 5)) < 1.0 + 1e-9)


def test_second_order_convergence():
    xi = 0.7
    vals = [degennes.mu(xi, 1, d, richardson=False) for d in (0.04, 0.02, 0.01)]
    order = math.log2(abs(vals[0] - vals[1]) / abs(vals[1] - vals[2]))
    assert order >= 1.8


def test_support_interval():
    t0, x0 = degennes.minimize_mu1()
    assert degennes.support_interval(0.5 * t0) is None
    s = degennes.support_interval(0.9)
    assert 0 < s.xi_minus < x0 < s.xi_plus
    assert degennes.mu(s.xi_minus) == pytest.approx(0.9, abs=1e-8)
    assert degennes.mu(s.xi_plus) == pytest.approx(0.9, abs=1e-8)
    edge = degennes.support_interval(0.999)
    assert edge.xi_plus < degennes.XI_CAP


def test_support_pinned(pinned):
    for lam in (0.8, 0.85, 0.9):
        s = degennes.support_interval(lam)
        np.testing.assert_allclose([s.xi_minus, s.xi_plus], pinned[f"support_{lam}"], atol=1e-7)


@pytest.mark.parametrize("lam", [0.8, 0.85, 0.9])
@pytest.mark.parametrize("p", [0.5, 1.5])
def test_moment_pinned(pinned, lam, p):
    # the oracle is a midpoint sum at step 1e-4; its error near the sqrt
    # endpoints dominates for p = 1/2
    rel = 1e-5 if p == 1.5 else 2e-5
    assert degennes.moment_integral(lam, p) == pytest.approx(pinned[f"moment_{lam}_{p}"], rel=rel)


def test_moment_empty_and_monotone():
    t0, _ = degennes.minimize_mu1()
    assert degennes.moment_integral(0.9 * t0, 1.5) == 0.0
    for p in (0.5, 1.5):
        assert degennes.moment_integral(0.8, p) < degennes.moment_integral(0.9, p)


@settings(max_examples=25, deadline=None)
@given(st.floats(-1.0, 6.0))
def test_mu1_above_theta0(xi):
    t0, _ = degennes.minimize_mu1()
    assert degennes.mu(xi, 1) >= t0 - 1e-12

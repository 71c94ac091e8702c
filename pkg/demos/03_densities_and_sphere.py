"""From local densities to a prediction for the unit ball.

E(theta, lambda) is the boundary energy density for a field at angle theta
and spectral level lambda; integrating |B|^2 E(theta(x), Lambda/|B|) over the
boundary predicts the sum of (e_j(h) - Lambda h)_- as h -> 0.  The same
with n(theta, lambda) predicts h times the eigenvalue count.
"""

import math

import numpy as np

from surfspec import energy, geometry

table = energy.default_table()

print("E(theta, lambda)")
print("theta   " + "  ".join(f"{lam:9.2f}" for lam in (0.7, 0.8, 0.9, 0.95)))
for deg in (0, 3, 10, 30, 60, 90):
    th = np.array([math.radians(deg)])
    print(f"{deg:5d}   " + "  ".join(f"{table.energy(th, lam)[0]:9.3e}" for lam in (0.7, 0.8, 0.9, 0.95)))

# the tabulated and the directly computed density agree on table angles
th = math.radians(24.5)
print(f"\ntable vs direct at 24.5 deg, lambda 0.9: {table.energy(np.array([th]), 0.9)[0]:.10e} "
      f"{energy.energy_density(th, 0.9).value:.10e}")

print("\nunit sphere, field (0, 0, 1)")
print("Lambda   E_pred        N_pred")
mesh = geometry.make_surface("sphere", (1.0,), (4096, 4))
for Lam in (0.5, 0.6, 0.7, 0.8, 0.9):
    print(f"{Lam:5.2f}   {geometry.predict_energy(mesh, (0, 0, 1), Lam):.6e}  "
          f"{geometry.predict_count(mesh, (0, 0, 1), Lam):.6e}")

rep = geometry.resonance_check(geometry.make_surface("sphere", (1.0,), 64), (0, 0, 1), 0.8)
print("\nresonance check (node count, tolerance, fraction):")
for row in rep.levels:
    print(f"  {row[0]:8d}  {row[1]:.1e}  {row[2]:.3e}")
print(f"flagged: {rep.flagged}")

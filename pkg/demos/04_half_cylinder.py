"""A second route to E(theta, lambda): the per-area energy of a large box.

On (-L/2, L/2)^2 x (0, inf) with the field at angle theta, the energy per
unit boundary area tends to E(theta, lambda) as L grows.  Periodic in r, the
problem splits into 2-D fibers; the walls in s cost a boundary layer that
shrinks like 1/L.
"""

import math

from surfspec import halfcylinder as hc

for deg, lam in ((0.0, 0.9), (20.0, 0.9)):
    study = hc.convergence_study(math.radians(deg), lam, [10.0, 20.0, 40.0])
    print(f"theta = {deg:g} deg, lambda = {lam}: E = {study.limit:.6e}")
    for r in study.rows:
        print(f"  L = {r.L:4g}   per-area = {r.energy_per_area:.6e}   gap = {r.gap:.3e}")
    print(f"  gap exponent {study.exponent:.2f}, 1/L extrapolation {study.extrapolated:.6e}\n")

# at theta = 0 the fibers separate and reproduce the de Gennes curve exactly
spec = hc.CylinderSpec(0.0, 0.9, L=20.0)
print(f"fibers {hc.fiber_energy(spec):.12e}  separable {hc.separable_energy(0.9, 20.0, ds=0.05):.12e}")

"""Eigenvalues of the half-plane model L(theta) below the essential edge 1.

For a field at angle theta to the boundary the model operator has finitely
many eigenvalues zeta_j(theta) < 1.  Their number grows like 1/sin(theta) as
the field turns tangent, while zeta_1 climbs from Theta0 toward 1 as it
turns normal.
"""

import math

from surfspec import degennes, lupan

theta0, _ = degennes.minimize_mu1()
print(f"Theta0 = {theta0:.6f}\n")
print("theta   count<0.995  zeta_1     zeta_2     sin(theta) N(0.95)")
for deg in (3, 5, 10, 20, 30, 45, 60, 75, 90):
    th = math.radians(deg)
    z = lupan.zetas(th).zetas
    first = f"{z[0]:.6f}" if z.size else "   -    "
    second = f"{z[1]:.6f}" if z.size > 1 else "   -    "
    scaled = math.sin(th) * lupan.count_below(th, 0.95)
    print(f"{deg:5d}   {z.size:11d}  {first}   {second}   {scaled:.3f}")

# near theta = pi/2 the ground state sits just under 1 and spreads along the
# zero line of the potential; only the ground-state solver reaches it
for deg in (55, 65):
    th = math.radians(deg)
    print(f"\nzeta_1({deg} deg) = {lupan.ground_state(th):.6f} "
          f"(ds-extrapolated {lupan.ground_state(th, richardson=True):.6f})", end="")
print()

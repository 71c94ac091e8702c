"""The de Gennes curve and the constant Theta0.

mu_1(xi) is the ground energy of -d^2/dt^2 + (t - xi)^2 on the half-line
with a Neumann condition at t = 0.  Its minimum Theta0 sets the scale of
every surface state below.  The moment integrals of (mu_1 - lambda)_- give
the tangent-field densities E(0, lambda) and n(0, lambda).
"""

import math

import numpy as np

from surfspec import degennes, energy

# at xi = 0 the even extension is the full-line oscillator: levels 1, 5, 9, ...
print(f"mu1(0) = {degennes.mu(0.0, 1):.10f}   mu2(0) = {degennes.mu(0.0, 2):.10f}")

theta0, xi0 = degennes.minimize_mu1()
print(f"Theta0 = {theta0:.10f} at xi0 = {xi0:.8f}")

print("\n   xi      mu1        mu2")
for xi in np.linspace(-1.0, 4.0, 11):
    print(f"{xi:5.1f}  {degennes.mu(xi, 1):.8f}  {degennes.mu(xi, 2):.6f}")

# {mu_1 < lambda} is an interval around xi0 that widens as lambda -> 1
print("\nlambda   xi-      xi+      E(0, lambda)   n(0, lambda)")
for lam in (0.6, 0.7, 0.8, 0.9, 0.95):
    s = degennes.support_interval(lam)
    print(f"{lam:5.2f}  {s.xi_minus:.5f}  {s.xi_plus:.5f}  {energy.theta_zero_energy(lam):.6e}  "
          f"{energy.theta_zero_count(lam):.6e}")

print(f"\nsanity: 1/(3 pi^2) = {1 / (3 * math.pi**2):.6f}")

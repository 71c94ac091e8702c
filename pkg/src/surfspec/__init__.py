"""Surface-state energy and counting densities of magnetic Neumann operators.

Modules
-------
linalg_core   eigenvalue counting and slicing for tridiagonal / banded matrices
degennes      the de Gennes family mu_j(xi), Theta_0 and moment integrals
lupan         the half-plane model and its eigenvalues zeta_j(theta)
energy        the densities E(theta, lambda) and n(theta, lambda)
halfcylinder  per-area energies of the half-cylinder operator
geometry      surfaces, field angles and boundary-integral predictions
ball3d        direct eigensolve on the unit ball
cli           the ``surfspec`` command
"""

from .errors import (
    BadParams,
    BisectionStall,
    LambdaTooLarge,
    MarginTooSmall,
    NumericalGuardError,
    ProblemTooLarge,
    SingularShift,
    SurfspecError,
    TruncationTooSmall,
    ValidationError,
    ZeroField,
)

__version__ = "0.1.0"

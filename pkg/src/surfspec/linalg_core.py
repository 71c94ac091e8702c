"""Symmetric eigenvalue kernel: counting and collecting eigenvalues below a threshold.

Everything here is built on two counting primitives:

* :func:`sturm_count` -- Sturm sequence sign count for a tridiagonal matrix;
* :func:`band_inertia` -- negative inertia of a banded ``LDL^T`` factorization
  (Sylvester's law of inertia).

:func:`eigs_below_tridiag` and :func:`eigs_below_band` slice the spectrum
with these counts, so every returned window is certified by the count at its
threshold.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import _kernels
from .errors import BisectionStall, SingularShift, ValidationError

MAX_BISECTIONS = 200
JITTER_RETRIES = 5


def _jitter(sigma):
    return 1e-10 * (1.0 + abs(sigma))


@dataclass(frozen=True)
class TridiagonalMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.diag, dtype=float)
        e = np.ascontiguousarray(self.offdiag, dtype=float)
        if d.ndim != 1 or d.size < 1:
            raise ValidationError("diag must be a non-empty vector")
        if e.shape != (d.size - 1,):
            raise ValidationError("offdiag must have length n-1")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValidationError("tridiagonal entries must be finite")
        d.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self):
        return self.diag.size

    def gershgorin(self):
        r = np.zeros(self.n)
        r[:-1] += np.abs(self.offdiag)
        r[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))

    def to_dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class BandedMatrix:
    """Symmetric band matrix ``K`` with an optional diagonal mass ``M``.

    ``bands[i, d] = K[i + d, i]`` for ``d = 0..bandwidth``.  With a mass
    vector the pencil ``K v = lambda M v`` is meant; it is reduced to the
    standard problem ``M^{-1/2} K M^{-1/2}`` by :meth:`scaled_bands`.
    """

    bands: np.ndarray
    mass: np.ndarray | None = None
    _scaled: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        w = np.ascontiguousarray(self.bands, dtype=float)
        if w.ndim != 2 or w.shape[0] < 1:
            raise ValidationError("bands must be a 2-D array (n, bandwidth+1)")
        n, bp1 = w.shape
        if bp1 - 1 >= max(n, 1) and n > 1:
            raise ValidationError("bandwidth must be < n")
        if not np.all(np.isfinite(w)):
            raise ValidationError("band entries must be finite")
        # entries that would fall outside the matrix are ignored; zero them
        for d in range(1, bp1):
            w[max(n - d, 0):, d] = 0.0
        w.flags.writeable = False
        object.__setattr__(self, "bands", w)
        if self.mass is not None:
            m = np.ascontiguousarray(self.mass, dtype=float)
            if m.shape != (n,) or not np.all(m > 0):
                raise ValidationError("mass must be a positive vector of length n")
            m.flags.writeable = False
            object.__setattr__(self, "mass", m)

    @property
    def n(self):
        return self.bands.shape[0]

    @property
    def bandwidth(self):
        return self.bands.shape[1] - 1

    @classmethod
    def from_dense(cls, a, bandwidth, mass=None):
        a = np.asarray(a, dtype=float)
        n = a.shape[0]
        w = np.zeros((n, bandwidth + 1))
        for d in range(bandwidth + 1):
            w[: n - d, d] = np.diagonal(a, -d)
        return cls(w, mass)

    def to_dense(self, scaled=False):
        w = self.scaled_bands() if scaled else self.bands
        n = self.n
        a = np.diag(w[:, 0].copy())
        for d in range(1, self.bandwidth + 1):
            off = w[: n - d, d]
            a += np.diag(off, -d) + np.diag(off, d)
        return a

    def scaled_bands(self):
        """Bands of ``M^{-1/2} K M^{-1/2}`` (``K`` itself without mass)."""
        if self.mass is None:
            return self.bands
        if "w" not in self._scaled:
            s = 1.0 / np.sqrt(self.mass)
            n = self.n
            w = self.bands * s[:, None]
            for d in range(self.bandwidth + 1):
                w[: n - d, d] *= s[d:]
            self._scaled["w"] = w
        return self._scaled["w"]

    def row_norms(self):
        if "r" not in self._scaled:
            self._scaled["r"] = _kernels.band_row_norms(self.scaled_bands())
        return self._scaled["r"]

    def gershgorin(self):
        w = self.scaled_bands()
        off = self.row_norms() - np.abs(w[:, 0])
        return float(np.min(w[:, 0] - off)), float(np.max(w[:, 0] + off))


@dataclass(frozen=True)
class SpectralWindow:
    threshold: float
    eigenvalues: np.ndarray

    def __post_init__(self):
        e = np.sort(np.asarray(self.eigenvalues, dtype=float))
        if e.size and not e[-1] < self.threshold:
            raise ValidationError("window eigenvalues must lie below the threshold")
        e.flags.writeable = False
        object.__setattr__(self, "eigenvalues", e)

    @property
    def count(self):
        return int(self.eigenvalues.size)

    @property
    def deficit(self):
        # ascending order, fixed: reproducible to the last bit
        total = 0.0
        for e in self.eigenvalues:
            total += self.threshold - e
        return total

    def deficit_at(self, lam):
        """``sum (e - lam)_-`` over the stored eigenvalues (valid for lam <= threshold)."""
        total = 0.0
        for e in self.eigenvalues:
            if e < lam:
                total += lam - e
        return total

    def count_at(self, lam):
        return int(np.count_nonzero(self.eigenvalues < lam))

    @classmethod
    def empty(cls, threshold):
        return cls(float(threshold), np.empty(0))


# ---------------------------------------------------------------- tridiagonal


def sturm_count(T, sigma):
    """Number of eigenvalues of ``T`` strictly below ``sigma``."""
    if not math.isfinite(sigma):
        return 0 if sigma < 0 else T.n
    return int(_kernels.sturm_count(T.diag, T.offdiag, float(sigma)))


def _bisect_index(count, k, lo, hi, tol):
    """Smallest x (to width tol) with count(x) > k, given count(lo) <= k < count(hi)."""
    width = tol * (1.0 + max(abs(lo), abs(hi)))
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= max(tol, 4 * np.finfo(float).eps * max(abs(lo), abs(hi))):
            return lo, hi
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return lo, hi
        if count(mid) > k:
            hi = mid
        else:
            lo = mid
    if hi - lo > width:
        raise BisectionStall(f"interval [{lo}, {hi}] did not shrink below {width}")
    return lo, hi


def _rayleigh_refine_tridiag(T, lo, hi):
    from scipy.linalg import solve_banded

    mu = 0.5 * (lo + hi)
    n = T.n
    if n == 1:
        return float(T.diag[0])
    ab = np.zeros((3, n))
    ab[0, 1:] = T.offdiag
    ab[1] = T.diag - mu
    ab[2, :-1] = T.offdiag
    x = np.ones(n) + 0.01 * np.sin(np.arange(n))
    try:
        for _ in range(2):
            x = solve_banded((1, 1), ab, x)
            x /= np.linalg.norm(x)
    except (np.linalg.LinAlgError, ValueError):
        return mu
    if not np.all(np.isfinite(x)):
        return mu
    tx = T.diag * x
    tx[:-1] += T.offdiag * x[1:]
    tx[1:] += T.offdiag * x[:-1]
    rho = float(x @ tx)
    return rho if lo <= rho <= hi else mu


def eigenvalue_index_tridiag(T, k, tol=1e-13):
    """The k-th smallest eigenvalue (k = 1, 2, ...) by Sturm bisection."""
    lo, hi = T.gershgorin()
    lo -= 1e-12 * (1 + abs(lo))
    hi += 1e-12 * (1 + abs(hi))
    a, b = _bisect_index(lambda x: sturm_count(T, x), k - 1, lo, hi, tol)
    return _rayleigh_refine_tridiag(T, a, b)


def eigs_below_tridiag(T, sigma, tol=1e-12):
    if not tol > 0:
        raise ValidationError("tol must be positive")
    lo, hi = T.gershgorin()
    sigma = float(sigma)
    top = min(sigma, hi + 1e-12 * (1 + abs(hi)))
    n_below = sturm_count(T, sigma)
    lo -= 1e-12 * (1 + abs(lo))
    eigs = []
    for k in range(n_below):
        a, b = _bisect_index(lambda x: sturm_count(T, x), k, lo, top, tol)
        e = _rayleigh_refine_tridiag(T, a, b)
        eigs.append(min(e, np.nextafter(sigma, -np.inf)))
        lo = a
    return SpectralWindow(sigma, np.array(eigs))


# ---------------------------------------------------------------------- band


class _Factor:
    __slots__ = ("sigma", "neg", "w", "d")

    def __init__(self, sigma, neg, w, d):
        self.sigma = sigma
        self.neg = neg
        self.w = w
        self.d = d

    def solve(self, y):
        return _kernels.band_ldl_solve(self.w, self.d, y)


def _factor(B, sigma):
    neg, fail, w, d = _kernels.band_ldl(B.scaled_bands(), float(sigma), B.row_norms(), True)
    if fail >= 0:
        raise SingularShift(f"pivot {fail} below floor at shift {sigma!r}")
    return _Factor(float(sigma), int(neg), w, d)


def _factor_jittered(B, sigma):
    """Factor at sigma, nudging the shift on a singular pivot."""
    jit = _jitter(sigma)
    for attempt in range(JITTER_RETRIES + 1):
        shift = sigma + (0.0 if attempt == 0 else jit * attempt * (-1) ** attempt)
        try:
            return _factor(B, shift)
        except SingularShift:
            if attempt == JITTER_RETRIES:
                raise
    raise AssertionError("unreachable")


_SPLITS = (0.5, 0.382, 0.618, 0.25, 0.75)


def _factor_inside(B, a, b):
    """Factor at a point of (a, b); the midpoint first, other fractions on a singular pivot.

    Degenerate leading blocks (grid Laplacians with rational spectra) can make
    a round-number midpoint singular beyond the reach of the jitter.
    """
    for k, f in enumerate(_SPLITS):
        try:
            return _factor_jittered(B, a + f * (b - a))
        except SingularShift:
            if k == len(_SPLITS) - 1:
                raise


def band_inertia(B, sigma):
    """Number of eigenvalues of the pencil below ``sigma``.

    Raises :class:`SingularShift` when ``sigma`` hits an eigenvalue to within
    the pivot floor.
    """
    neg, fail, _, _ = _kernels.band_ldl(B.scaled_bands(), float(sigma), B.row_norms(), False)
    if fail >= 0:
        raise SingularShift(f"pivot {fail} below floor at shift {sigma!r}")
    return int(neg)


def _refine_isolated(B, a, b, ca, tol):
    """Refine the single eigenvalue in [a, b) (count(a) == ca, count(b) == ca + 1).

    Shift-and-invert Rayleigh iteration.  Every factorization also tightens
    the inertia bracket, and the result is certified by the counts at
    ``rho -/+ tol/2``.
    """
    w = B.scaled_bands()
    n = B.n
    x = np.ones(n) + 0.1 * np.sin(np.arange(n) * 1.618)
    x /= np.linalg.norm(x)
    mu = 0.5 * (a + b)
    rho = rho_prev = None

    def probe(shift):
        nonlocal a, b
        F = _factor_jittered(B, shift)
        if F.neg <= ca:
            a = max(a, F.sigma)
        else:
            b = min(b, F.sigma)
        return F

    for _ in range(MAX_BISECTIONS):
        if b - a <= tol:
            break
        try:
            F = probe(mu)
        except SingularShift:
            # a shift this close to an eigenvalue is as good as converged
            # only if the bracket agrees; otherwise fall back to bisection
            F = _factor_inside(B, a, b)
            if F.neg <= ca:
                a = max(a, F.sigma)
            else:
                b = min(b, F.sigma)
            mu, rho, rho_prev = 0.5 * (a + b), None, None
            continue
        y = F.solve(x)
        ny = np.linalg.norm(y)
        if not (np.isfinite(ny) and ny > 0):
            mu, rho, rho_prev = 0.5 * (a + b), None, None
            continue
        x = y / ny
        rho = float(x @ _kernels.band_matvec(w, x))
        if a - tol <= rho <= b + tol:
            # rounding in the quotient can push a converged value just outside
            rho = min(max(rho, a), b)
        else:
            mu, rho, rho_prev = 0.5 * (a + b), None, None
            continue
        if rho_prev is not None and abs(rho - rho_prev) <= 0.1 * tol:
            for shift in (rho - 0.5 * tol, rho + 0.5 * tol):
                if a < shift < b:
                    try:
                        probe(shift)
                    except SingularShift:
                        pass
            if b - a <= tol:
                break
            mu, rho_prev = 0.5 * (a + b), None
            continue
        rho_prev, mu = rho, rho
    if b - a > 2 * tol and b - a > 8 * np.finfo(float).eps * max(abs(a), abs(b)):
        raise BisectionStall(f"could not isolate eigenvalue in [{a}, {b}]")
    if rho is not None and a <= rho <= b:
        return rho
    return 0.5 * (a + b)


def _cluster_ritz(B, a, b, k, tol, iters=80):
    """The ``k`` eigenvalues in [a, b) when no shift inside can be factored.

    Block inverse iteration from just below ``a`` followed by Rayleigh-Ritz;
    each Ritz value must sit in the bracket with a small residual.
    """
    w = B.scaled_bands()
    # a shift well below the cluster keeps the factor stable; iterations
    # are cheap next to the factorization
    delta = 1e-3 * (1.0 + abs(a))
    F = _factor_inside(B, a - delta, a - 0.5 * delta)
    rng = np.random.default_rng(0)
    X = np.linalg.qr(rng.standard_normal((B.n, k + 2)))[0]
    for _ in range(iters):
        Y = np.column_stack([F.solve(X[:, i]) for i in range(X.shape[1])])
        X = np.linalg.qr(Y)[0]
    AX = np.column_stack([_kernels.band_matvec(w, X[:, i]) for i in range(X.shape[1])])
    theta, V = np.linalg.eigh(X.T @ AX)
    R = AX @ V - (X @ V) * theta
    res = np.linalg.norm(R, axis=0)
    keep = [i for i in np.argsort(theta) if a - tol <= theta[i] <= b + tol]
    if len(keep) < k or np.any(res[keep[:k]] > max(tol, 1e3 * np.finfo(float).eps * max(abs(a), abs(b)))):
        raise BisectionStall(f"could not resolve {k} eigenvalues in [{a}, {b}]")
    return [float(min(max(theta[i], a), b)) for i in keep[:k]]


def eigs_below_band(B, sigma, tol=1e-10):
    """All eigenvalues of the pencil below ``sigma`` by spectrum slicing.

    The slice ``[gershgorin_min, sigma]`` is bisected with inertia counts
    until every subinterval holds a single eigenvalue, which is then pinned
    to width ``tol``.  Clusters narrower than ``tol`` are reported with
    their multiplicity.
    """
    if not tol > 0:
        raise ValidationError("tol must be positive")
    sigma = float(sigma)
    lo, hi = B.gershgorin()
    if sigma <= lo:
        return SpectralWindow.empty(sigma)
    lo -= 1e-9 * (1 + abs(lo))
    F = _factor_jittered(B, sigma)
    top, n_top = F.sigma, F.neg
    if n_top == 0:
        return SpectralWindow.empty(sigma)
    eigs = []
    # stack of (a, b, count(a), count(b)) processed left to right
    stack = [(lo, top, 0, n_top)]
    while stack:
        a, b, ca, cb = stack.pop()
        k = cb - ca
        if k == 0:
            continue
        if k == 1:
            try:
                eigs.append(_refine_isolated(B, a, b, ca, tol))
            except (SingularShift, BisectionStall):
                eigs.extend(_cluster_ritz(B, a, b, 1, tol))
            continue
        if b - a <= tol:
            eigs.extend([0.5 * (a + b)] * k)
            continue
        try:
            Fm = _factor_inside(B, a, b)
        except SingularShift:
            eigs.extend(_cluster_ritz(B, a, b, k, tol))
            continue
        m, cm = Fm.sigma, Fm.neg
        stack.append((m, b, cm, cb))
        stack.append((a, m, ca, cm))
    eigs = np.sort(np.array(eigs))
    if top != sigma:
        # the certified slice ends at the jittered shift; recheck the sliver
        eigs = eigs[eigs < sigma]
    return SpectralWindow(sigma, np.minimum(eigs, np.nextafter(sigma, -np.inf)))


def count_below_band(B, sigma):
    """Inertia count with the jitter retry policy of :func:`eigs_below_band`."""
    return _factor_jittered(B, float(sigma)).neg


def lowest_eigenvalue_band(B, tol=1e-10, guess=None):
    """Smallest eigenvalue of the pencil, with no threshold required.

    ``guess`` is a trial upper bound; the Gershgorin bound is used when it
    does not enclose an eigenvalue.
    """
    lo, hi = B.gershgorin()
    a = lo - 1e-9 * (1 + abs(lo))
    b, cb = hi + 1e-9 * (1 + abs(hi)), B.n
    if guess is not None and a < guess < b:
        F = _factor_jittered(B, guess)
        # gallop away from the guess: the ground state usually sits close to it
        step = 1e-3 * (1.0 + abs(F.sigma))
        if F.neg >= 1:
            b, cb = F.sigma, F.neg
            while b - step > a:
                F = _factor_jittered(B, b - step)
                if F.neg == 0:
                    a = F.sigma
                    break
                b, cb, step = F.sigma, F.neg, 4.0 * step
        else:
            a = F.sigma
            while a + step < b:
                F = _factor_jittered(B, a + step)
                if F.neg >= 1:
                    b, cb = F.sigma, F.neg
                    break
                a, step = F.sigma, 4.0 * step
    for _ in range(MAX_BISECTIONS):
        if cb == 1:
            try:
                return _refine_isolated(B, a, b, 0, tol)
            except (SingularShift, BisectionStall):
                return _cluster_ritz(B, a, b, 1, tol)[0]
        if b - a <= tol:
            return 0.5 * (a + b)
        F = _factor_inside(B, a, b)
        if F.neg >= 1:
            b, cb = F.sigma, F.neg
        else:
            a = F.sigma
    raise BisectionStall("lowest eigenvalue bracket did not shrink")

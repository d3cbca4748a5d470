"""Reciprocal 2-periodic tridiagonal matrices.

Zero diagonal, off-diagonal pairs with product one.  Such a matrix is fixed
by its size and the moduli ``a1 = |a_12|``, ``a2 = |a_23|``; equivalently by
``A_j = (a_j^2 + a_j^-2) / 2 >= 1``.  With ``tau = cos(2 theta)`` the
eigenvalues of ``Re(exp(i theta) A)`` are ``+-sqrt(zeta_k)`` (and 0 for odd n)
where ``zeta_k = (A1 + A2 + 2 tau) / 2 + sqrt((A1 + tau)(A2 + tau)) Q_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import polyline_distance, to_xy
from .numerical_range import ellipse_fit, kippenhahn_components
from .linalg import jacobi_eigh
from .tridiagonal import TwoPeriodicTridiagonal, chebyshev_q, q_roots, to_dense

PHI = (1 + math.sqrt(5)) / 2
EXACT_ELLIPSE = 1e-8
NEAR_ELLIPSE = 1e-5


class NonGenericError(ValueError):
    pass


def modulus_from_A(A):
    """The a >= 1 with (a^2 + a^-2) / 2 = A."""
    if A < 1:
        raise ValueError(f"A must be >= 1, got {A}")
    return math.sqrt(A + math.sqrt(A * A - 1))


@dataclass(frozen=True)
class ReciprocalSpec:
    n: int
    a1: float
    a2: float

    @classmethod
    def from_A(cls, n, A1, A2):
        return cls(n, modulus_from_A(A1), modulus_from_A(A2))

    @property
    def A1(self):
        return (self.a1 ** 2 + self.a1 ** -2) / 2

    @property
    def A2(self):
        return (self.a2 ** 2 + self.a2 ** -2) / 2

    @property
    def m(self):
        return self.n // 2

    @property
    def is_generic(self):
        # n = 2 only has the first pair
        used = (self.A1,) if self.n == 2 else (self.A1, self.A2)
        return all(A > 1 + 1e-14 for A in used)

    def require_generic(self):
        if not self.is_generic:
            raise NonGenericError(f"A1={self.A1}, A2={self.A2}: reciprocal matrix is not generic (A_j = 1)")


def build(spec):
    if spec.a1 <= 0 or spec.a2 <= 0:
        raise ValueError("moduli a1, a2 must be positive")
    return TwoPeriodicTridiagonal(spec.n, 0, 0, ((spec.a1, 1 / spec.a1), (spec.a2, 1 / spec.a2)))


def q_values(spec, tau):
    """Q_k for k = 1..m at tau = cos(2 theta); shape (len(tau), m).

    For even n, Q_k is undefined where A1 + tau = 0 (beta_1 vanishes).
    """
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if spec.n % 2:
        return np.broadcast_to(chebyshev_q(spec.m), (len(tau), spec.m))
    if np.any(spec.A1 + tau <= 0):
        raise ValueError("Q_k is undefined where A1 + tau = 0")
    r = np.sqrt((spec.A2 + tau) / (spec.A1 + tau))
    return q_roots(r, spec.m) / 2


def _q_term(spec, tau):
    """sqrt((A1 + tau)(A2 + tau)) Q_k without forming Q_k.

    For even n this is half the spectrum of the Jacobi matrix with diagonal
    ``(-(A2 + tau), 0, ...)`` and off-diagonal ``sqrt((A1 + tau)(A2 + tau))``,
    which stays finite where beta_1 vanishes.
    """
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    u = np.maximum(spec.A1 + tau, 0.0)
    v = np.maximum(spec.A2 + tau, 0.0)
    g = np.sqrt(u * v)
    if spec.n % 2:
        return g[:, None] * chebyshev_q(spec.m)[None, :]
    m = spec.m
    K = np.zeros((len(tau), m, m))
    K[:, 0, 0] = -v
    idx = np.arange(m - 1)
    K[:, idx, idx + 1] = g[:, None]
    K[:, idx + 1, idx] = g[:, None]
    w, _ = jacobi_eigh(K)
    return w / 2


def zeta(spec, k, tau, Q_k=None):
    """zeta_k at tau.

    With ``Q_k`` given this is the closed form as written; otherwise the
    ``Q_k`` term for index k is computed in the product form of
    :func:`_q_term`.  ``k`` may be None when ``Q_k`` is an array for all k.
    """
    A1, A2 = spec.A1, spec.A2
    base = 0.5 * (A1 + A2 + 2 * np.asarray(tau))
    if Q_k is None:
        term = _q_term(spec, tau)[..., k - 1]
        return term[0] + base if np.ndim(tau) == 0 else base + term
    g = np.sqrt(np.maximum((A1 + tau) * (A2 + tau), 0.0))
    return base + np.where(g == 0, 0.0, g * Q_k)


def zeta_spectra(spec, thetas):
    """Sorted eigenvalues +-sqrt(zeta_k) (plus 0 for odd n); shape (B, n)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    tau = np.cos(2 * thetas)
    z = 0.5 * (spec.A1 + spec.A2 + 2 * tau)[:, None] + _q_term(spec, tau)
    s = np.sqrt(np.maximum(z, 0.0))
    parts = [s, -s] + ([np.zeros((len(thetas), 1))] if spec.n % 2 else [])
    return np.sort(np.concatenate(parts, axis=1), axis=1)[:, ::-1]


@dataclass
class SymmetryReport:
    distances: dict  # k -> (across real axis, across imaginary axis)
    center_collapse: float | None  # max |point| on gamma_{m+1} for odd n
    ok: bool


def symmetry_check(curves, tol=1e-6, n=None):
    """Hausdorff distance of each curve to its mirror images in both axes.

    For odd ``n`` the component with index ``n // 2 + 1`` must also collapse to
    the origin.
    """
    distances = {}
    ok = True
    collapse = None
    for c in curves:
        xy = to_xy(c.points)
        out = []
        for mirror in (np.conj(c.points), -np.conj(c.points)):
            mxy = to_xy(mirror)
            d = max(polyline_distance(mxy, xy).max(), polyline_distance(xy, mxy).max())
            out.append(float(d))
        distances[c.k] = tuple(out)
        ok &= max(out) <= tol
        if n is not None and n % 2 and c.k == n // 2 + 1:
            collapse = float(np.abs(c.points).max())
            ok &= collapse <= tol
    return SymmetryReport(distances, collapse, bool(ok))


@dataclass
class ComponentVerdict:
    k: int
    verdict: str  # "ellipse", "not ellipse" or "conjectured none"
    semi_axes: tuple | None = None  # (along the real axis, along the imaginary axis)


def equal_parameter_axes(A, Q):
    """Semi-axes of gamma_k when A1 = A2 = A: support function
    sqrt((A + tau)(1 + Q)) is that of an ellipse with these half-axes."""
    return math.sqrt((A + 1) * (1 + Q)), math.sqrt((A - 1) * (1 + Q))


def elliptical_components(spec):
    spec.require_generic()
    m, n = spec.m, spec.n
    out = []
    if abs(spec.A1 - spec.A2) <= 1e-12 * spec.A1:
        # Q_k is theta independent (r = 1 for even n)
        Q = q_values(spec, 0.0)[0]
        for k in range(1, m + 1):
            out.append(ComponentVerdict(k, "ellipse", equal_parameter_axes(spec.A1, float(Q[k - 1]))))
        return out
    if n % 2 == 0:
        return [ComponentVerdict(k, "conjectured none") for k in range(1, m + 1)]
    target = (n + 1) // 4 if n % 4 == 3 else None
    for k in range(1, m + 1):
        out.append(ComponentVerdict(k, "ellipse" if k == target else "not ellipse"))
    return out


def golden_test(A1, A2, A3, tol=1e-9):
    """Ellipticity criterion for the numerical range of a 4x4 reciprocal
    matrix with parameters A1, A2, A3."""
    if min(A1, A2, A3) < 1 - tol:
        raise ValueError("A_j must be >= 1")
    strict = max(A1, A2, A3) > 1 + tol
    scale = max(A1, A2, A3)
    first = abs(A2 - (PHI * A1 - A3 / PHI)) <= tol * scale
    second = abs(A2 - (PHI * A3 - A1 / PHI)) <= tol * scale
    return bool(strict and (first or second))


def component_residuals(spec, N=1024):
    """Ellipse-fit residual of each gamma_k, k = 1..m."""
    A = to_dense(build(spec))
    comps = kippenhahn_components(A, range(1, spec.m + 1), N)
    return {c.k: ellipse_fit(c.points).residual for c in comps}


def conjecture_probe(n, A1, A2, N=1024):
    """Residual table for even n; exploratory, no verdict."""
    if n % 2 or n < 4:
        raise ValueError("the probe is for even n >= 4")
    spec = ReciprocalSpec.from_A(n, A1, A2)
    spec.require_generic()
    return [(k, r) for k, r in component_residuals(spec, N).items()]

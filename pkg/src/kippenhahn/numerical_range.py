"""Rank-k numerical ranges and Kippenhahn curve components.

Everything here is driven by the eigenvalue curves ``lambda_k(theta)`` of the
Hermitian family ``Re(exp(i theta) A)``: the rank-k numerical range is the
intersection of the half-planes ``Re(exp(i theta) mu) <= lambda_k(theta)`` and
the curve component ``gamma_k`` is traced by Rayleigh quotients of the k-th
eigenvector.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .geometry import (
    ConvexRegion,
    box,
    convex_hull,
    hull_halfplanes,
    intersect_halfplanes,
    polyline_distance,
    to_xy,
)
from .linalg import (
    HermitianEigenSystem,
    as_matrix,
    find_ties,
    imag_part,
    jacobi_eigh,
    rayleigh,
    rayleigh_stack,
    rotated_real_stack,
)

DEFAULT_SAMPLES = 1024
GAP_TOL = 1e-8
CHUNK = 256
# clip slack relative to the region tolerance; keeps concurrent support lines
# (singleton ranges) from being clipped away by rounding
SLACK = 1e-3


class DegenerateEigenvalueError(ValueError):
    def __init__(self, message, theta):
        super().__init__(f"{message} at theta={theta:.12g}")
        self.theta = theta


def theta_grid(N):
    if N < 8:
        raise ValueError(f"need at least 8 samples, got {N}")
    return 2 * np.pi * np.arange(N) / N


def _threads():
    try:
        return max(1, int(os.environ.get("NR_THREADS", "1")))
    except ValueError:
        return 1


def spectra(A, thetas):
    """Eigenvalues (B, n) and eigenvectors (B, n, n) of Re(e^{i theta} A).

    The angle list is cut into fixed-size chunks, so results do not depend on
    how many worker threads ``NR_THREADS`` allows.
    """
    A = as_matrix(A)
    thetas = np.asarray(thetas, dtype=float)
    chunks = [thetas[i:i + CHUNK] for i in range(0, len(thetas), CHUNK)]
    work = lambda th: jacobi_eigh(rotated_real_stack(A, th))  # noqa: E731
    nthreads = min(_threads(), len(chunks))
    if nthreads > 1:
        with ThreadPoolExecutor(nthreads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(th) for th in chunks]
    if not parts:
        n = A.shape[0]
        return np.zeros((0, n)), np.zeros((0, n, n), dtype=complex)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


@dataclass
class SupportSample:
    theta: float
    spectrum: HermitianEigenSystem


def sample_support(A, N=DEFAULT_SAMPLES):
    thetas = theta_grid(N)
    w, V = spectra(A, thetas)
    scale = float(np.max(np.abs(w), initial=0.0))
    return [
        SupportSample(float(t), HermitianEigenSystem(w[j], V[j], float(t), find_ties(w[j], scale)))
        for j, t in enumerate(thetas)
    ]


def support_sample(A, theta):
    w, V = spectra(A, [theta])
    return SupportSample(float(theta), HermitianEigenSystem(w[0], V[0], float(theta), find_ties(w[0], np.abs(w[0]).max())))


def numerical_radius(A, N=256):
    w, _ = spectra(A, theta_grid(N))
    return float(np.max(np.abs(w), initial=0.0))


def default_tol(scale):
    return 1e-6 * (1.0 + scale)


def _normals(thetas):
    return np.column_stack([np.cos(thetas), -np.sin(thetas)])


def _halfplane_region(thetas, lam, tol, bound_scale):
    bound = box(2.0 * bound_scale if bound_scale > 0 else 1.0)
    return intersect_halfplanes(_normals(thetas), lam, bound, slack=SLACK * tol)


def _crossing_angles(A, thetas, w, k, scale, iters=8):
    """Angles where lambda_k meets lambda_{k-1} or lambda_{k+1}.

    Starts from grid minima of the relative gap that are small enough to hide
    a crossing (the gap moves by at most 2 * scale per radian) and runs Newton
    on the gap with Hellmann-Feynman derivatives, batched over candidates.
    Near a crossing the gap is |linear|, so a step from either side lands on
    it.  Avoided crossings just yield some nearby angle, whose half-plane is
    still a valid constraint.
    """
    n = w.shape[1]
    lo, hi = max(k - 2, 0), min(k + 1, n)
    gaps = w[:, lo:hi - 1] - w[:, lo + 1:hi]
    g = gaps.min(axis=1) / scale
    h = 2 * np.pi / len(thetas)
    idx = np.nonzero((g <= np.roll(g, 1)) & (g <= np.roll(g, -1)) & (g <= 2 * h))[0]
    if len(idx) == 0:
        return np.zeros(0)
    j = lo + np.argmin(gaps[idx], axis=1)  # upper index of the pair
    t = thetas[idx].astype(float)
    rows = np.arange(len(t))
    for _ in range(iters):
        wt, V = jacobi_eigh(rotated_real_stack(A, t))
        E = np.exp(1j * t)[:, None, None] * A
        G = -(E - np.conj(np.swapaxes(E, 1, 2))) / 2j  # d/dtheta Re(e^{it}A)
        za, zb = V[rows, :, j], V[rows, :, j + 1]
        da = np.einsum("bi,bij,bj->b", za.conj(), G, za).real
        db = np.einsum("bi,bij,bj->b", zb.conj(), G, zb).real
        gt, gp = wt[rows, j] - wt[rows, j + 1], da - db
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(np.abs(gp) > 0, -gt / gp, 0.0)
        step = np.clip(np.nan_to_num(step), -h, h)
        t = t + step
        if np.abs(step).max() <= 1e-14:
            break
    return np.mod(t, 2 * np.pi)


def rank_k_range(A, k, N=DEFAULT_SAMPLES, tol=None, refine=False):
    """Rank-k numerical range as a classified convex region.

    The region is the intersection of the half-planes
    ``x cos(theta) - y sin(theta) <= lambda_k(theta)`` over the uniform grid.
    Where ``lambda_k`` crosses a neighbouring eigenvalue it has a kink, and the
    grid resolves the corresponding corner of the region only to O(1/N).
    With ``refine=True`` those crossing angles are located by Newton steps on
    the eigenvalue gap and their half-planes are added; for a normal matrix
    these are exactly the edge lines of the polygon.
    """
    return rank_k_ranges(A, [k], N, tol, refine)[k]


def rank_k_ranges(A, ks=None, N=DEFAULT_SAMPLES, tol=None, refine=False):
    """:func:`rank_k_range` for several k (default all) from one eigen pass.

    Returns a dict keyed by k.
    """
    A = as_matrix(A)
    n = A.shape[0]
    ks = range(1, n + 1) if ks is None else ks
    for k in ks:
        if not 1 <= k <= n:
            raise ValueError(f"k must lie in 1..{n}, got {k}")
    thetas = theta_grid(N)
    w, _ = spectra(A, thetas)
    scale = float(np.max(np.abs(w), initial=0.0))
    tol = default_tol(scale) if tol is None else tol
    out = {}
    for k in ks:
        P = _halfplane_region(thetas, w[:, k - 1], tol, scale)
        if refine and len(P) and n > 1:
            extra = _crossing_angles(A, thetas, w, k, scale or 1.0)
            if len(extra):
                wx, _ = spectra(A, extra)
                P = intersect_halfplanes(_normals(extra), wx[:, k - 1], P, slack=SLACK * tol)
        out[k] = ConvexRegion.from_polygon(P, tol)
    return out


@dataclass
class CurveComponent:
    """Sampled curve component gamma_k: ``points[j]`` is the curve point for
    ``theta[j]``."""

    k: int
    theta: np.ndarray
    points: np.ndarray
    closed: bool

    @property
    def samples(self):
        return list(zip(self.theta.tolist(), self.points.tolist()))

    @property
    def xy(self):
        return to_xy(self.points)

    def chord(self):
        d = np.abs(np.diff(np.append(self.points, self.points[:1])))
        return float(d.max()) if len(d) else 0.0

    def spread(self):
        return float(np.abs(self.points - self.points.mean()).max())


def _check_gaps(w, thetas, k, scale, gap_tol):
    n = w.shape[1]
    gaps = []
    if k > 1:
        gaps.append(w[:, k - 2] - w[:, k - 1])
    if k < n:
        gaps.append(w[:, k - 1] - w[:, k])
    if not gaps:
        return
    g = np.min(gaps, axis=0) / (scale if scale > 0 else 1.0)
    j = int(np.argmin(g))
    if g[j] <= gap_tol:
        raise DegenerateEigenvalueError(f"eigenvalue {k} is not simple (relative gap {g[j]:.2e})", float(thetas[j]))


def _closed(points):
    if len(points) < 2:
        return True
    chords = np.abs(np.diff(points))
    scale = max(float(np.abs(points).max()), 1.0)
    return bool(abs(points[-1] - points[0]) <= 2 * chords.max() + 1e-12 * scale)


def kippenhahn_components(A, ks=None, N=DEFAULT_SAMPLES, gap_tol=GAP_TOL):
    """Curve components gamma_k for each k in ``ks`` from a single eigen pass.

    Defaults to all k up to ceil(n/2).
    """
    A = as_matrix(A)
    n = A.shape[0]
    ks = range(1, (n + 1) // 2 + 1) if ks is None else ks
    thetas = theta_grid(N)
    w, V = spectra(A, thetas)
    scale = float(np.max(np.abs(w), initial=0.0))
    out = []
    for k in ks:
        if not 1 <= k <= (n + 1) // 2:
            raise ValueError(f"component index must lie in 1..{(n + 1) // 2}, got {k}")
        _check_gaps(w, thetas, k, scale, gap_tol)
        pts = rayleigh_stack(A, V[:, :, k - 1])
        out.append(CurveComponent(k, thetas, pts, _closed(pts)))
    return out


def kippenhahn_component(A, k, N=DEFAULT_SAMPLES, gap_tol=GAP_TOL):
    return kippenhahn_components(A, [k], N, gap_tol)[0]


def _envelope(theta, lam, dlam, sign):
    return np.exp(-1j * theta) * (lam + 1j * sign * dlam)


@functools.cache
def envelope_sign():
    """Sign s making exp(-i t)(lambda_k + i s lambda_k') the Rayleigh point.

    Fixed once against a non-normal 2x2 matrix at an arbitrary angle.
    """
    A = np.array([[0.3 + 0.1j, 1.0], [0.0, -0.2j]])
    s = support_sample(A, 0.7)
    z = s.spectrum.vector(1)
    target = rayleigh(A, z)
    dlam = _derivative(A, s.theta, z)
    lam = s.spectrum.eigenvalues[0]
    errs = {sg: abs(_envelope(s.theta, lam, dlam, sg) - target) for sg in (1, -1)}
    return min(errs, key=errs.get)


def _derivative(A, theta, z):
    # Hellmann-Feynman: d/dtheta Re(e^{it}A) = -Im(e^{it}A)
    G = -imag_part(np.exp(1j * theta) * A)
    return float(np.vdot(z, G @ z).real)


def envelope_point(A, sample, k):
    """Tangency point of the support line at ``sample.theta`` with gamma_k."""
    A = as_matrix(A)
    spec = sample.spectrum
    if (k - 1) in spec.ties or (k - 2) in spec.ties:
        raise DegenerateEigenvalueError(f"eigenvalue {k} is degenerate", sample.theta)
    z = spec.vector(k)
    dlam = _derivative(A, sample.theta, z)
    return complex(_envelope(sample.theta, spec.eigenvalues[k - 1], dlam, envelope_sign()))


@dataclass
class GenericityReport:
    """``min_gap`` is relative to the numerical radius of A."""

    is_generic: bool
    min_gap: float
    argmin_theta: float


def _min_gap(w):
    if w.shape[-1] < 2:
        return np.full(w.shape[:-1], np.inf)
    return np.min(w[..., :-1] - w[..., 1:], axis=-1)


def _gap_minima(A, thetas, idx, scale, polish_below):
    """Polish grid minima of the smallest relative eigenvalue gap.

    Each index in ``idx`` is refined by a bounded scalar search over the two
    adjacent grid cells.  Brent's method stops near sqrt(eps)*|theta|, so
    minima below ``polish_below`` get a second search in a variable centred
    on the first estimate.  Returns (theta, gap) pairs.
    """
    h = 2 * np.pi / len(thetas)

    def gap_at(t):
        wt, _ = jacobi_eigh(rotated_real_stack(A, [t]))
        return float(_min_gap(wt)[0]) / scale

    out = []
    for i in idx:
        res = minimize_scalar(gap_at, bounds=(thetas[i] - h, thetas[i] + h), method="bounded",
                              options={"xatol": 1e-12})
        x, fx = res.x, res.fun
        if fx <= polish_below:
            d = 1e-6 * max(abs(x), 1.0)
            pol = minimize_scalar(lambda s: gap_at(x + s), bounds=(-d, d), method="bounded",
                                  options={"xatol": 1e-15})
            if pol.fun < fx:
                x, fx = x + pol.x, pol.fun
        out.append((float(x % (2 * np.pi)), float(fx)))
    return out


def is_generic(A, N=DEFAULT_SAMPLES, gap_tol=GAP_TOL, refine=True):
    """Smallest consecutive-eigenvalue gap over the angle grid.

    With ``refine`` the few smallest local minima are polished by a bounded
    scalar minimization, so crossings between grid points are not missed.
    """
    A = as_matrix(A)
    n = A.shape[0]
    thetas = theta_grid(N)
    w, _ = spectra(A, thetas)
    scale = float(np.max(np.abs(w), initial=0.0)) or 1.0
    if n == 1:
        return GenericityReport(True, math.inf, 0.0)
    g = _min_gap(w) / scale
    j = int(np.argmin(g))
    best, where = float(g[j]), float(thetas[j])
    if refine:
        local = np.nonzero((g <= np.roll(g, 1)) & (g <= np.roll(g, -1)))[0]
        local = local[np.argsort(g[local])][:4]
        for x, fx in _gap_minima(A, thetas, local, scale, polish_below=1e3 * gap_tol):
            if fx < best:
                best, where = fx, x
    return GenericityReport(best > gap_tol, best, where)


def normal_range(eigenvalues, k, tol=None):
    """Rank-k numerical range of a normal matrix with the given spectrum:
    the intersection of the convex hulls of all (n-k+1)-point subsets."""
    lam = np.asarray(eigenvalues, dtype=complex).ravel()
    n = len(lam)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    scale = float(np.abs(lam).max(initial=0.0))
    tol = default_tol(scale) if tol is None else tol
    pts = to_xy(lam)
    P = box(2.0 * scale + 1.0)
    for subset in itertools.combinations(range(n), n - k + 1):
        normals, offsets = hull_halfplanes(convex_hull(pts[list(subset)]))
        P = intersect_halfplanes(normals, offsets, P, slack=SLACK * tol)
        if len(P) == 0:
            break
    return ConvexRegion.from_polygon(P, tol)


@dataclass
class EllipseFit:
    """Algebraic conic ``a x^2 + b xy + c y^2 + d x + e y + f`` fitted to points.

    ``residual`` is the largest algebraic distance of a point after centring
    and scaling the data to unit RMS radius with a unit coefficient vector,
    which makes it dimensionless.
    """

    coefficients: np.ndarray
    residual: float
    is_ellipse: bool
    degenerate: bool = False
    center: complex | None = None
    semi_axes: tuple | None = None
    angle: float | None = None


def _distinct(P, tol):
    keys = np.round(P / tol).astype(np.int64)
    _, idx = np.unique(keys, axis=0, return_index=True)
    return P[np.sort(idx)]


def ellipse_fit(points, tol=1e-9):
    P = np.asarray(points)
    P = to_xy(P) if np.iscomplexobj(P) or P.ndim == 1 else P.astype(float).reshape(-1, 2)
    c = P.mean(axis=0)
    s = math.sqrt(float(np.mean(np.sum((P - c) ** 2, axis=1))) / 2)
    nan6 = np.full(6, np.nan)
    if s == 0:
        return EllipseFit(nan6, math.inf, False, degenerate=True)
    U = (P - c) / s
    if len(_distinct(U, tol)) < 6 or np.linalg.svd(U, compute_uv=False)[-1] < tol * math.sqrt(len(U)):
        return EllipseFit(nan6, math.inf, False, degenerate=True)
    x, y = U[:, 0], U[:, 1]
    D = np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])
    _, _, Vt = np.linalg.svd(D, full_matrices=False)
    v = Vt[-1]
    residual = float(np.abs(D @ v).max())
    a, b, cc, d, e, f = v
    is_ell = b * b - 4 * a * cc < 0

    # back to original coordinates: u = (p - c) / s
    M = np.array([[a, b / 2, d / 2], [b / 2, cc, e / 2], [d / 2, e / 2, f]])
    T = np.array([[1 / s, 0, -c[0] / s], [0, 1 / s, -c[1] / s], [0, 0, 1]])
    Mo = T.T @ M @ T
    coef = np.array([Mo[0, 0], 2 * Mo[0, 1], Mo[1, 1], 2 * Mo[0, 2], 2 * Mo[1, 2], Mo[2, 2]])
    coef /= np.linalg.norm(coef)

    fit = EllipseFit(coef, residual, bool(is_ell))
    if is_ell:
        Q = np.array([[a, b / 2], [b / 2, cc]])
        g = np.array([d, e])
        u0 = np.linalg.solve(Q, -g / 2)
        f0 = f + g @ u0 / 2
        mu, vec = np.linalg.eigh(Q)
        if np.all(-f0 / mu > 0):
            axes = np.sqrt(-f0 / mu) * s
            major = int(np.argmax(axes))
            fit.center = complex(*(c + s * u0))
            fit.semi_axes = (float(axes.max()), float(axes.min()))
            fit.angle = float(math.atan2(vec[1, major], vec[0, major]) % math.pi)
        else:
            fit.is_ellipse = False
    return fit


def boundary_points(A, N=DEFAULT_SAMPLES, gap_tol=GAP_TOL):
    """Rayleigh points of the top eigenvector wherever lambda_1 is simple;
    these lie on the boundary of the numerical range."""
    A = as_matrix(A)
    thetas = theta_grid(N)
    w, V = spectra(A, thetas)
    scale = float(np.max(np.abs(w), initial=0.0)) or 1.0
    ok = np.ones(len(thetas), dtype=bool)
    if w.shape[1] > 1:
        ok = (w[:, 0] - w[:, 1]) / scale > gap_tol
    return rayleigh_stack(A, V[ok][:, :, 0])


@dataclass
class Classification3x3:
    shape: str
    residual: float
    is_generic: bool
    is_segment: bool
    rank2: ConvexRegion
    eigenvalue_boundary_distance: float
    prop1_consistent: bool
    prop2_consistent: bool


def classify_3x3(A, N=DEFAULT_SAMPLES, tol=1e-8):
    """Shape of the numerical range of a 3x3 matrix.

    ``EllipticalDisk`` when the boundary fits a conic to ``tol``, ``Ovular``
    for remaining generic matrices, ``Other`` otherwise.  Also reports whether
    the emptiness of the rank-2 range agrees with the shape (a non-empty rank-2
    range goes with an elliptical disk or a segment) and whether genericity
    agrees with "ovular, or elliptical with no eigenvalue on the boundary".
    """
    A = as_matrix(A)
    if A.shape != (3, 3):
        raise ValueError("classify_3x3 needs a 3x3 matrix")
    gen = is_generic(A, N)
    fit = ellipse_fit(boundary_points(A, N))
    W = rank_k_range(A, 1, N)
    is_segment = W.kind.value in ("segment", "point")
    if fit.is_ellipse and not fit.degenerate and fit.residual <= tol:
        shape = "EllipticalDisk"
    elif gen.is_generic:
        shape = "Ovular"
    else:
        shape = "Other"
    rank2 = rank_k_range(A, 2, N)
    eig = np.linalg.eigvals(A)
    if W.kind.value == "polygon":
        bdist = float(np.abs(W.depth(eig)).min())
    else:
        bdist = 0.0
    prop1 = (shape == "EllipticalDisk" or is_segment) == (not rank2.is_empty)
    prop2 = gen.is_generic == (shape == "Ovular" or (shape == "EllipticalDisk" and bdist > W.tol))
    return Classification3x3(shape, fit.residual, gen.is_generic, is_segment, rank2, bdist, prop1, prop2)


def curve_intersections(c1, c2, tol=None, chunk=256):
    """Approximate crossing points of two closed sampled curves.

    Segment pairs of the two polylines are tested exactly; hits closer than
    the snap tolerance (default: the longest chord of either polyline) are
    merged into one point.
    """
    P = c1.points if isinstance(c1, CurveComponent) else np.asarray(c1, dtype=complex)
    Q = c2.points if isinstance(c2, CurveComponent) else np.asarray(c2, dtype=complex)
    chord = max(_max_chord(P), _max_chord(Q))
    snap = chord if tol is None else tol
    span = lambda Z: float(np.abs(Z - Z.mean()).max())  # noqa: E731
    if span(P) <= 1e-12 or span(Q) <= 1e-12:
        pt, other = (P, Q) if span(P) <= 1e-12 else (Q, P)
        d = polyline_distance(to_xy(pt[:1]), to_xy(other))[0]
        return [complex(pt[0])] if d <= snap * 1e-3 else []

    a0, a1 = P, np.roll(P, -1)
    b0, b1 = Q, np.roll(Q, -1)
    r = a1 - a0
    s = b1 - b0
    hits = []
    for i in range(0, len(a0), chunk):
        p, rr = a0[i:i + chunk, None], r[i:i + chunk, None]
        denom = (np.conj(rr) * s[None]).imag
        qp = b0[None] - p
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (np.conj(qp) * s[None]).imag / denom
            u = (np.conj(qp) * rr).imag / denom
        ok = (denom != 0) & (t >= 0) & (t < 1) & (u >= 0) & (u < 1)
        ii, jj = np.nonzero(ok)
        hits.extend((p[ii, 0] + t[ii, jj] * rr[ii, 0]).tolist())
    merged = []
    for h in hits:
        if all(abs(h - m) > snap for m in merged):
            merged.append(h)
    return merged


def _max_chord(Z):
    if len(Z) < 2:
        return 0.0
    return float(np.abs(np.diff(np.append(Z, Z[:1]))).max())

"""Dense complex matrix helpers and a cyclic Jacobi Hermitian eigensolver.

Matrices are plain ``numpy`` arrays of shape ``(n, n)`` (complex128).  The
eigensolver works on stacks of matrices ``(B, n, n)`` at once: every rotation
of the cyclic sweep is applied to the whole stack, which keeps the Python
overhead independent of the number of angles being sampled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TOL_HERM = 1e-12
TOL_EIG = 1e-11
OFF_DIAG_TOL = 1e-13
TIE_GAP = 1e-12
MAX_SWEEPS = 60


class NotHermitianError(ValueError):
    pass


class EigenConvergenceError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass
class HermitianEigenSystem:
    """Eigenvalues in non-increasing order with matching unit eigenvectors.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``.  ``ties`` lists the
    indices ``k`` with ``eigenvalues[k] - eigenvalues[k + 1]`` below the tie
    threshold, so callers can detect non-genericity.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    theta: float = float("nan")
    ties: tuple = field(default=())

    @property
    def n(self):
        return self.eigenvalues.shape[0]

    def vector(self, k):
        """Eigenvector of the k-th largest eigenvalue (1-based)."""
        return self.eigenvectors[:, k - 1]


def as_matrix(A):
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def rotated_real(A, theta):
    """Hermitian part of ``exp(i theta) A``."""
    A = as_matrix(A)
    B = np.exp(1j * theta) * A
    return (B + B.conj().T) / 2


def rotated_real_stack(A, thetas):
    A = as_matrix(A)
    ph = np.exp(1j * np.asarray(thetas, dtype=float))[:, None, None]
    B = ph * A[None]
    return (B + np.conj(np.swapaxes(B, 1, 2))) / 2


def imag_part(A):
    A = as_matrix(A)
    return (A - A.conj().T) / 2j


def is_hermitian(H, tol=TOL_HERM):
    H = np.asarray(H)
    scale = max(1.0, float(np.linalg.norm(H)))
    return float(np.max(np.abs(H - np.conj(np.swapaxes(H, -1, -2))), initial=0.0)) <= tol * scale


def _off_norm(H):
    n = H.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(np.abs(H[:, mask]) ** 2, axis=1))


def jacobi_eigh(H, tol_eig=TOL_EIG, tol_herm=TOL_HERM):
    """Eigen-decompose a stack of Hermitian matrices by cyclic Jacobi sweeps.

    Parameters
    ----------
    H : array_like, shape (B, n, n) or (n, n)
    tol_eig : float
        Relative residual bound checked after convergence.

    Returns
    -------
    w : ndarray, shape (B, n)
        Eigenvalues, non-increasing along the last axis.
    V : ndarray, shape (B, n, n)
        Unit eigenvectors as columns, phase fixed so that the
        largest-modulus component is real and positive.
    """
    H = np.array(H, dtype=complex, copy=True)
    single = H.ndim == 2
    if single:
        H = H[None]
    if H.ndim != 3 or H.shape[1] != H.shape[2]:
        raise ValueError(f"expected (B, n, n) stack, got {H.shape}")
    B, n, _ = H.shape
    if not is_hermitian(H, tol_herm):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    H = (H + np.conj(np.swapaxes(H, 1, 2))) / 2
    H0 = H.copy()
    norms = np.linalg.norm(H, axis=(1, 2))
    V = np.broadcast_to(np.eye(n, dtype=complex), (B, n, n)).copy()
    target = OFF_DIAG_TOL * norms
    tiny = np.finfo(float).tiny

    for _ in range(MAX_SWEEPS):
        if np.all(_off_norm(H) <= target):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = H[:, p, q]
                absb = np.abs(b)
                if not np.any(absb > tiny):
                    continue
                a = H[:, p, p].real
                d = H[:, q, q].real
                live = absb > tiny
                safe = np.where(live, absb, 1.0)
                th = (d - a) / (2.0 * safe)
                t = np.where(th >= 0, 1.0, -1.0) / (np.abs(th) + np.hypot(th, 1.0))
                t = np.where(live, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ph = np.where(live, np.conj(b) / safe, 1.0)  # exp(-i arg b)
                g00, g01 = c, s
                g10, g11 = -s * ph, c * ph

                cp = H[:, :, p].copy()
                cq = H[:, :, q]
                H[:, :, p] = cp * g00[:, None] + cq * g10[:, None]
                H[:, :, q] = cp * g01[:, None] + cq * g11[:, None]
                rp = H[:, p, :].copy()
                rq = H[:, q, :]
                H[:, p, :] = rp * np.conj(g00)[:, None] + rq * np.conj(g10)[:, None]
                H[:, q, :] = rp * np.conj(g01)[:, None] + rq * np.conj(g11)[:, None]
                H[:, p, q] = 0.0
                H[:, q, p] = 0.0
                H[:, p, p] = H[:, p, p].real
                H[:, q, q] = H[:, q, q].real

                vp = V[:, :, p].copy()
                vq = V[:, :, q]
                V[:, :, p] = vp * g00[:, None] + vq * g10[:, None]
                V[:, :, q] = vp * g01[:, None] + vq * g11[:, None]
    else:
        off = _off_norm(H) / np.where(norms > 0, norms, 1.0)
        raise EigenConvergenceError("Jacobi sweeps did not converge", float(off.max()))

    w = np.diagonal(H, axis1=1, axis2=2).real.copy()
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    V = np.take_along_axis(V, order[:, None, :], axis=2)

    big = np.argmax(np.abs(V), axis=1)
    lead = np.take_along_axis(V, big[:, None, :], axis=1)
    V = V * (np.conj(lead) / np.abs(lead))

    resid = np.linalg.norm(H0 @ V - V * w[:, None, :], axis=1).max(axis=1)
    bad = resid > tol_eig * np.maximum(norms, tiny)
    if np.any(bad & (norms > 0)):
        rel = resid / np.maximum(norms, tiny)
        raise EigenConvergenceError("eigenpair residual above tolerance", float(rel.max()))

    if single:
        return w[0], V[0]
    return w, V


def find_ties(w, scale=1.0, gap=TIE_GAP):
    gaps = w[:-1] - w[1:]
    return tuple(int(k) for k in np.nonzero(gaps < gap * max(scale, 1.0))[0])


def hermitian_eig(H, tol_eig=TOL_EIG, theta=float("nan")):
    H = as_matrix(H)
    w, V = jacobi_eigh(H, tol_eig=tol_eig)
    scale = float(np.max(np.abs(w), initial=0.0))
    return HermitianEigenSystem(w, V, theta=theta, ties=find_ties(w, scale))


def rayleigh(A, z):
    """Return <A z, z> for a unit vector z."""
    z = np.asarray(z, dtype=complex)
    nz = np.linalg.norm(z)
    if nz == 0:
        raise ValueError("zero vector")
    if abs(nz - 1.0) > 1e-8:
        raise ValueError(f"vector is not normalized (norm {nz})")
    return complex(np.vdot(z, np.asarray(A) @ z))


def rayleigh_stack(A, Z):
    """Rayleigh quotients for the columns ``Z[j, :]`` of a stack (B, n)."""
    AZ = Z @ np.asarray(A).T
    return np.sum(np.conj(Z) * AZ, axis=1)


def is_tridiagonal(T, tol=0.0):
    T = np.asarray(T)
    n = T.shape[0]
    i, j = np.indices((n, n))
    return bool(np.all(np.abs(T[np.abs(i - j) > 1]) <= tol))


def tridiag_charpoly(T, x):
    """det(x I - T) by the three-term recursion on leading principal minors.

    The value only depends on the products ``T[i, i+1] * T[i+1, i]``, so it is
    unchanged by transposing any off-diagonal pair.  Returns a float when T is
    Hermitian.
    """
    T = as_matrix(T)
    if not is_tridiagonal(T):
        raise ValueError("matrix is not tridiagonal")
    n = T.shape[0]
    prev, cur = 1.0 + 0j, x - T[0, 0]
    for k in range(1, n):
        prev, cur = cur, (x - T[k, k]) * cur - T[k - 1, k] * T[k, k - 1] * prev
    if is_hermitian(T):
        return float(cur.real)
    return complex(cur)


def sturm_count(diag, offsq, x):
    """Number of eigenvalues below x of a real symmetric tridiagonal matrix.

    ``offsq`` holds the squared off-diagonal moduli.  Counts negative pivots of
    the LDL^T factorization of T - x I.
    """
    count = 0
    d = 1.0
    for k in range(len(diag)):
        d = diag[k] - x - (offsq[k - 1] / d if k > 0 else 0.0)
        if d == 0.0:
            d = -1e-300
        if d < 0:
            count += 1
    return count


def sturm_eigvals(diag, off, tol=1e-14):
    """Eigenvalues (descending) of a Hermitian tridiagonal matrix by bisection.

    Independent of :func:`jacobi_eigh`; used as a cross-check oracle.
    """
    diag = np.asarray(diag, dtype=float)
    offsq = np.abs(np.asarray(off)) ** 2
    n = len(diag)
    radius = np.zeros(n)
    offabs = np.sqrt(offsq)
    radius[:-1] += offabs
    radius[1:] += offabs
    lo0 = float(np.min(diag - radius)) - 1.0
    hi0 = float(np.max(diag + radius)) + 1.0
    eps = tol * max(1.0, abs(lo0), abs(hi0))
    out = []
    for k in range(n):
        lo, hi = lo0, hi0
        while hi - lo > eps:
            mid = 0.5 * (lo + hi)
            if sturm_count(diag, offsq, mid) > k:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return np.array(out[::-1])

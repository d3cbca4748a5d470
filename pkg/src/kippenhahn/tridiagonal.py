"""Tridiagonal 2-periodic matrices and their closed-form spectra.

For a tridiagonal matrix with diagonal ``a1, a2, a1, ...`` and off-diagonal
pairs alternating ``(b1, c1), (b2, c2), ...`` (``b`` above, ``c`` below the
diagonal), ``Re(exp(i theta) A)`` is again 2-periodic with diagonal
``alpha_j = Re(exp(i theta) a_j)`` and superdiagonal
``beta_j = (exp(i theta) b_j + exp(-i theta) conj(c_j)) / 2``; its eigenvalues
come in pairs symmetric about ``(alpha_1 + alpha_2) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .linalg import as_matrix, jacobi_eigh, rotated_real_stack


@dataclass(frozen=True)
class TwoPeriodicTridiagonal:
    n: int
    a1: complex
    a2: complex
    pairs: tuple  # ((b1, c1), (b2, c2)); b on the superdiagonal

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension must be at least 2, got {self.n}")
        (b1, c1), (b2, c2) = self.pairs
        object.__setattr__(self, "a1", complex(self.a1))
        object.__setattr__(self, "a2", complex(self.a2))
        object.__setattr__(self, "pairs", ((complex(b1), complex(c1)), (complex(b2), complex(c2))))

    @property
    def m(self):
        return self.n // 2

    @property
    def unbalanced(self):
        """|b_j| != |c_j| for both pairs (for n = 2 only the first pair is used)."""
        used = self.pairs if self.n > 2 else self.pairs[:1]
        return all(abs(abs(b) - abs(c)) > 1e-14 * max(abs(b), abs(c), 1.0) for b, c in used)

    @classmethod
    def from_dense(cls, M, tol=1e-12):
        """Recognize a dense 2-periodic tridiagonal matrix.

        The off-diagonal pairs only have to repeat as unordered pairs; the
        returned description is normalized (see :func:`normalize_superdiagonal`).
        """
        M = as_matrix(M)
        n = M.shape[0]
        i, j = np.indices((n, n))
        if n < 2 or np.abs(M[np.abs(i - j) > 1]).max(initial=0.0) > tol:
            raise ValueError("matrix is not tridiagonal")
        diag = np.diag(M)
        if np.abs(diag[0::2] - diag[0]).max() > tol or np.abs(diag[1::2] - diag[1]).max() > tol:
            raise ValueError("diagonal is not 2-periodic")
        pairs = [(M[p, p + 1], M[p + 1, p]) for p in range(n - 1)]
        base = [pairs[0], pairs[1] if n > 2 else pairs[0]]
        for p, (b, c) in enumerate(pairs):
            b0, c0 = base[p % 2]
            same = abs(b - b0) <= tol and abs(c - c0) <= tol
            swapped = abs(b - c0) <= tol and abs(c - b0) <= tol
            if not (same or swapped):
                raise ValueError(f"off-diagonal pair {p} breaks 2-periodicity")
        T = cls(n, diag[0], diag[1], (tuple(base[0]), tuple(base[1])))
        return normalize_superdiagonal(T)


def to_dense(T):
    M = np.zeros((T.n, T.n), dtype=complex)
    for i in range(T.n):
        M[i, i] = T.a1 if i % 2 == 0 else T.a2
    for i in range(T.n - 1):
        b, c = T.pairs[i % 2]
        M[i, i + 1] = b
        M[i + 1, i] = c
    return M


def normalize_superdiagonal(T):
    """Orient each off-diagonal pair with its larger-modulus entry above the
    diagonal.

    Transposing a pair only conjugates the corresponding ``beta``, so the
    characteristic polynomial of every ``Re(exp(i theta) T)`` is unchanged.
    """
    pairs = tuple((b, c) if abs(b) >= abs(c) else (c, b) for b, c in T.pairs)
    return T if pairs == T.pairs else replace(T, pairs=pairs)


def alpha(T, theta, j):
    a = T.a1 if j == 1 else T.a2
    return (np.exp(1j * np.asarray(theta)) * a).real


def beta(T, theta, j):
    b, c = T.pairs[j - 1]
    e = np.exp(1j * np.asarray(theta))
    return (e * b + np.conj(e) * np.conj(c)) / 2


def aas_condition(T, tol=1e-12):
    """conj(b1) c2 == c1 conj(b2) within a relative tolerance."""
    (b1, c1), (b2, c2) = T.pairs
    lhs, rhs = np.conj(b1) * c2, c1 * np.conj(b2)
    return bool(abs(lhs - rhs) <= tol * max(abs(lhs), abs(rhs), 1.0))


def _jacobi_q_matrix(r, m):
    r = np.atleast_1d(np.asarray(r, dtype=float))
    J = np.zeros((len(r), m, m), dtype=complex)
    J[:, 0, 0] = -r
    idx = np.arange(m - 1)
    J[:, idx, idx + 1] = 1.0
    J[:, idx + 1, idx] = 1.0
    return J


def q_roots(r, m):
    """Roots, in decreasing order, of q_m where

    ``q_0 = 1, q_1(mu) = mu + r, q_{k+1}(mu) = mu q_k(mu) - q_{k-1}(mu)``.

    These are the eigenvalues of the m x m Jacobi matrix with diagonal
    ``(-r, 0, ..., 0)`` and unit off-diagonals.  ``r`` may be an array, in
    which case the result has shape ``(len(r), m)``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    scalar = np.ndim(r) == 0
    w, _ = jacobi_eigh(_jacobi_q_matrix(r, m))
    return w[0] if scalar else w


def q_poly(r, m, mu):
    """Evaluate q_m(mu) by the recursion itself."""
    prev, cur = 1.0, mu + r
    if m == 0:
        return prev
    for _ in range(m - 1):
        prev, cur = cur, mu * cur - prev
    return cur


def q_roots_bisect(r, m, tol=1e-14):
    """Roots of q_m located by sign changes of the recursion plus bisection.

    Independent of the eigensolver path in :func:`q_roots`.
    """
    # all roots lie in [-r - 2, 2] (Gershgorin on the Jacobi matrix)
    lo, hi = -abs(r) - 2.5, 2.5
    grid = np.linspace(lo, hi, 400 * (m + 1) + 1)
    vals = np.array([q_poly(r, m, x) for x in grid])
    roots = []
    for x0, x1, f0, f1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if f0 == 0:
            roots.append(x0)
            continue
        # compare signs, products of tiny values underflow
        if np.sign(f0) != np.sign(f1) and f1 != 0:
            a, b, fa = x0, x1, f0
            while b - a > tol:
                c = 0.5 * (a + b)
                fc = q_poly(r, m, c)
                if np.sign(fa) != np.sign(fc):
                    b = c
                else:
                    a, fa = c, fc
            roots.append(0.5 * (a + b))
    return np.array(sorted(roots, reverse=True))


def chebyshev_q(m):
    """Q_k = cos(k pi / (m + 1)), k = 1..m (odd dimension)."""
    return np.cos(np.arange(1, m + 1) * np.pi / (m + 1))


@dataclass
class ClosedFormSpectrum:
    theta: float
    lambdas: np.ndarray
    Q: np.ndarray
    pairs: list = field(default_factory=list)  # (lambda_k, lambda_{n-k+1}) before sorting
    fallback: bool = False


def closed_form_spectra(T, thetas):
    """Closed-form eigenvalues of ``Re(exp(i theta) T)`` for many angles.

    Returns ``(lambdas, Q, fallback, (plus, minus))`` with shapes ``(B, n)``,
    ``(B, m)``, ``(B,)`` and two ``(B, m)`` arrays holding the unsorted
    ``mean +- sqrt(...)`` branches.  For even n the Q values are half the
    roots of q_m with ``r = |beta_2 / beta_1|`` and depend on theta; for odd n
    they are the constants cos(k pi / (m + 1)).  Angles where ``beta_1`` vanishes (possible
    only for balanced pairs) fall back to the dense eigensolver.
    """
    T = normalize_superdiagonal(T)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    n, m = T.n, T.m
    a1, a2 = alpha(T, thetas, 1), alpha(T, thetas, 2)
    b1, b2 = np.abs(beta(T, thetas, 1)), np.abs(beta(T, thetas, 2))
    fallback = np.zeros(len(thetas), dtype=bool)
    if n % 2:
        Q = np.broadcast_to(chebyshev_q(m), (len(thetas), m)).copy()
    else:
        scale = max(b1.max(initial=0.0), b2.max(initial=0.0), 1.0)
        fallback = b1 <= 1e-13 * scale
        r = np.where(fallback, 0.0, b2 / np.where(fallback, 1.0, b1))
        Q = q_roots(r, m) / 2 if m > 0 else np.zeros((len(thetas), 0))
    mean = (a1 + a2) / 2
    rad = ((a1 - a2) / 2) ** 2 + b1 ** 2 + b2 ** 2
    disc = rad[:, None] + 2 * (b1 * b2)[:, None] * Q
    s = np.sqrt(np.maximum(disc, 0.0))
    plus = mean[:, None] + s
    minus = mean[:, None] - s
    parts = [plus, minus] + ([a1[:, None]] if n % 2 else [])
    lam = np.sort(np.concatenate(parts, axis=1), axis=1)[:, ::-1]
    if np.any(fallback):
        w, _ = jacobi_eigh(rotated_real_stack(to_dense(T), thetas[fallback]))
        lam[fallback] = w
    return lam, Q, fallback, (plus, minus)


def closed_form_spectrum(T, theta):
    lam, Q, fallback, (plus, minus) = closed_form_spectra(T, [theta])
    return ClosedFormSpectrum(
        float(theta), lam[0], Q[0], list(zip(plus[0].tolist(), minus[0].tolist())), bool(fallback[0])
    )


def oracle_deviation(T, N=360):
    """Largest |closed form - dense Jacobi| over a uniform angle grid."""
    thetas = 2 * math.pi * np.arange(N) / N
    lam, _, _, _ = closed_form_spectra(T, thetas)
    w, _ = jacobi_eigh(rotated_real_stack(to_dense(T), thetas))
    return float(np.abs(lam - w).max())

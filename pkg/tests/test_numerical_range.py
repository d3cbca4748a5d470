import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from kippenhahn.figures import M1, M2, M3, M4
from kippenhahn.geometry import RegionKind
from kippenhahn.linalg import rayleigh, rotated_real, tridiag_charpoly
from kippenhahn.numerical_range import (
    DegenerateEigenvalueError,
    classify_3x3,
    curve_intersections,
    ellipse_fit,
    envelope_point,
    envelope_sign,
    is_generic,
    kippenhahn_component,
    kippenhahn_components,
    normal_range,
    rank_k_range,
    rank_k_ranges,
    sample_support,
    spectra,
    support_sample,
    theta_grid,
)
from kippenhahn.reciprocal import ReciprocalSpec, build
from kippenhahn.tridiagonal import TwoPeriodicTridiagonal, to_dense

from conftest import random_complex, random_unitary

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def jordan(n):
    return np.diag(np.ones(n - 1), 1).astype(complex)


def generic_matrix(seed, n):
    rng = np.random.default_rng(seed)
    while True:
        A = random_complex(rng, n)
        if is_generic(A, 256).is_generic:
            return A


# support sampling

def test_zero_matrix_samples():
    for s in sample_support(np.zeros((3, 3)), 16):
        assert np.all(s.spectrum.eigenvalues == 0)


def test_theta_grid():
    np.testing.assert_allclose(theta_grid(8), np.arange(8) * np.pi / 4)
    with pytest.raises(ValueError):
        theta_grid(4)


def test_scalar_matrix_support():
    lam = 0.3 - 1.2j
    for s in sample_support(lam * np.eye(3), 32):
        np.testing.assert_allclose(s.spectrum.eigenvalues, (np.exp(1j * s.theta) * lam).real, atol=1e-14)


def test_m1_middle_root_matches_charpoly():
    for s in sample_support(M1, 360)[::7]:
        H = rotated_real(M1, s.theta)
        w = s.spectrum.eigenvalues
        root = brentq(lambda x: tridiag_charpoly(H, x), (w[0] + w[1]) / 2, (w[1] + w[2]) / 2, xtol=1e-15)
        assert abs(root - w[1]) <= 1e-9


def test_spectra_deterministic_across_thread_counts(monkeypatch):
    A = random_complex(np.random.default_rng(1), 6)
    th = theta_grid(1024)
    monkeypatch.setenv("NR_THREADS", "1")
    w1, V1 = spectra(A, th)
    monkeypatch.setenv("NR_THREADS", "4")
    w4, V4 = spectra(A, th)
    assert np.array_equal(w1, w4) and np.array_equal(V1, V4)


# rank-k ranges

def test_example_ranges():
    assert rank_k_range(M1, 2).is_empty
    r = rank_k_range(M2, 2)
    assert r.kind is RegionKind.POINT and abs(r.center) <= 1e-6


@pytest.mark.parametrize("k", [1, 2, 3])
def test_scalar_matrix_range_is_point(k):
    lam = 1 - 2j
    r = rank_k_range(lam * np.eye(3), k)
    assert r.kind is RegionKind.POINT and abs(r.center - lam) <= 1e-9


def test_jordan3_ranges():
    disk = rank_k_range(jordan(3), 1)
    assert disk.kind is RegionKind.POLYGON
    radii = np.hypot(*disk.vertices.T)
    R = np.sqrt(2) / 2
    assert radii.min() >= R - 1e-6 and radii.max() <= R / np.cos(np.pi / 1024) + 1e-6
    p = rank_k_range(jordan(3), 2)
    assert p.kind is RegionKind.POINT and abs(p.center) <= 1e-6


def test_rank_k_bad_index():
    with pytest.raises(ValueError):
        rank_k_range(M1, 4)


@settings(max_examples=15, deadline=None)
@given(seed=seeds, n=st.integers(3, 7))
def test_chain_and_emptiness(seed, n):
    A = generic_matrix(seed, n)
    regions = [rank_k_range(A, k, 512) for k in range(1, n + 1)]
    for outer, inner in zip(regions, regions[1:]):
        assert outer.contains_region(inner)
    for k in range((n + 1) // 2 + 1, n + 1):
        assert regions[k - 1].is_empty


@settings(max_examples=15, deadline=None)
@given(seed=seeds, n=st.integers(4, 7))
def test_strict_nesting(seed, n):
    A = generic_matrix(seed, n)
    for k in range(1, (n + 1) // 2):
        outer, inner = rank_k_range(A, k, 512), rank_k_range(A, k + 1, 512)
        if inner.is_empty:
            continue
        assert outer.kind is RegionKind.POLYGON
        assert outer.depth(inner.vertices).min() >= outer.tol


@settings(max_examples=10, deadline=None)
@given(seed=seeds, n=st.integers(3, 6))
def test_unitary_invariance(seed, n):
    rng = np.random.default_rng(seed)
    A = random_complex(rng, n)
    U = random_unitary(rng, n)
    B = U.conj().T @ A @ U
    for k in (1, 2):
        a, b = rank_k_range(A, k, 1024), rank_k_range(B, k, 1024)
        assert a.is_empty == b.is_empty
        if not a.is_empty:
            assert a.hausdorff(b) <= 1e-5


def test_grid_convergence():
    prev = None
    exact = np.pi * 0.5  # W(J_3) is the disk of radius sqrt(2)/2
    for N in (64, 128, 256, 512):
        err = rank_k_range(jordan(3), 1, N).area - exact
        assert err >= 0
        if prev is not None:
            assert err <= prev / 3.5  # O(1/N^2)
        prev = err


def test_grid_convergence_generic_polygon():
    areas = [rank_k_range(M4, 2, N).area for N in (128, 256, 512, 1024)]
    diffs = np.abs(np.diff(areas))
    assert np.all(np.diff(areas) <= 1e-12)  # monotone refinement
    assert diffs[2] <= diffs[1] / 3 and diffs[1] <= diffs[0] / 3


def test_support_consistency_m3():
    comp = kippenhahn_component(M3, 1)
    w, _ = spectra(M3, comp.theta[::16])
    proj = (np.exp(1j * comp.theta[::16, None]) * comp.points[None, :]).real.max(axis=1)
    np.testing.assert_allclose(proj, w[:, 0], atol=1e-8)


@pytest.mark.parametrize("N", [64, 1024])
def test_refine_recovers_normal_corners(N):
    rng = np.random.default_rng(11)
    lam = rng.normal(size=5) + 1j * rng.normal(size=5)
    U = random_unitary(rng, 5)
    A = U @ np.diag(lam) @ U.conj().T
    for k in (1, 2, 3):
        exact = normal_range(lam, k)
        refined = rank_k_range(A, k, N, refine=True)
        assert exact.is_empty == refined.is_empty
        if not exact.is_empty:
            assert exact.hausdorff(refined) <= 1e-8


@settings(max_examples=10, deadline=None)
@given(seed=seeds, n=st.integers(3, 6))
def test_refine_only_removes_area(seed, n):
    A = random_complex(np.random.default_rng(seed), n)
    for k in (1, 2):
        plain, refined = rank_k_range(A, k, 256), rank_k_range(A, k, 256, refine=True)
        assert plain.contains_region(refined)


# curve components

def test_two_periodic_middle_component_collapses():
    T = to_dense(TwoPeriodicTridiagonal(5, 0, 0.7 + 0.2j, ((2, 0.5), (1.5j, 0.3))))
    c = kippenhahn_component(T, 3)
    assert np.abs(c.points).max() <= 1e-9


def test_shifted_jordan_circle():
    lam = 0.4 + 0.1j
    c = kippenhahn_component(lam * np.eye(2) + jordan(2), 1)
    np.testing.assert_allclose(np.abs(c.points - lam), 0.5, atol=1e-12)
    assert c.closed


def test_m4_nested_components():
    comps = kippenhahn_components(M4)
    assert [c.k for c in comps] == [1, 2, 3, 4]
    assert all(c.closed for c in comps)
    outer = rank_k_range(M4, 1)
    # outermost component is the boundary of the convex range
    assert outer.distance(comps[0].points).max() <= 1e-6
    assert np.abs(outer.depth(comps[0].points)).max() <= 1e-5
    # inner components lie inside
    for c in comps[1:]:
        assert outer.depth(c.points).min() > 0
    assert np.abs(comps[3].points).max() <= 1e-9


def test_degenerate_component_refused():
    with pytest.raises(DegenerateEigenvalueError) as info:
        kippenhahn_component(np.diag([1, 1j, -1]), 1)
    assert 0 <= info.value.theta < 2 * np.pi


def test_component_index_range():
    with pytest.raises(ValueError):
        kippenhahn_component(M3, 4)


# envelope

def test_envelope_sign_fixed():
    assert envelope_sign() in (1, -1)


def test_envelope_hermitian():
    H = np.array([[2, 1j], [-1j, 0.5]])
    s = support_sample(H, 0.0)
    assert abs(envelope_point(H, s, 1) - s.spectrum.eigenvalues[0]) <= 1e-12


def test_envelope_jordan2_radius():
    for s in sample_support(jordan(2), 32):
        assert abs(abs(envelope_point(jordan(2), s, 1)) - 0.5) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=seeds, n=st.integers(2, 8), theta=st.floats(0, 2 * np.pi))
def test_envelope_matches_rayleigh(seed, n, theta):
    A = random_complex(np.random.default_rng(seed), n)
    s = support_sample(A, theta)
    for k in range(1, n + 1):
        if (k - 1) in s.spectrum.ties or (k - 2) in s.spectrum.ties:
            continue
        assert abs(envelope_point(A, s, k) - rayleigh(A, s.spectrum.vector(k))) <= 1e-9


# genericity

def test_genericity_examples():
    assert not is_generic(np.diag([1, 1j, -1])).is_generic
    assert is_generic(M3).is_generic
    assert is_generic(jordan(2)).is_generic


def test_genericity_refinement_finds_offgrid_crossing():
    # Re(e^{it} diag(1, i)) = diag(cos t, -sin t) crosses at t = 3pi/4 + j pi, off the grid
    N = 10
    assert not np.any(np.isclose(np.cos(2 * np.pi * np.arange(N) / N), -np.sin(2 * np.pi * np.arange(N) / N)))
    rep = is_generic(np.diag([1, 1j]), N=N)
    assert not rep.is_generic and rep.min_gap <= 1e-12
    assert min(abs(rep.argmin_theta - 3 * np.pi / 4), abs(rep.argmin_theta - 7 * np.pi / 4)) <= 1e-9


def test_genericity_report_consistent():
    rep = is_generic(M1)
    assert rep.is_generic == (rep.min_gap > 1e-8)


# normal matrices

def test_normal_range_examples():
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    assert normal_range(roots, 2).is_empty
    p = normal_range([0, 0, 1], 2)
    assert p.kind is RegionKind.POINT and abs(p.center) <= 1e-9


def test_normal_range_k1_is_hull():
    rng = np.random.default_rng(5)
    lam = rng.normal(size=6) + 1j * rng.normal(size=6)
    r = normal_range(lam, 1)
    assert r.distance(lam).max() <= 1e-12
    # every vertex is an eigenvalue
    d = np.abs(r.vertices[:, 0, None] + 1j * r.vertices[:, 1, None] - lam[None]).min(axis=1)
    assert d.max() <= r.tol


# ellipse fitting

def test_ellipse_fit_circle():
    t = np.linspace(0, 2 * np.pi, 50, endpoint=False)
    fit = ellipse_fit(np.exp(1j * t))
    assert fit.is_ellipse and fit.residual <= 1e-12
    np.testing.assert_allclose(fit.semi_axes, (1, 1), atol=1e-12)


def test_ellipse_fit_rotated():
    t = np.linspace(0, 2 * np.pi, 80, endpoint=False)
    z = 0.5 - 1j + np.exp(0.3j) * (3 * np.cos(t) + 1j * np.sin(t))
    fit = ellipse_fit(z)
    assert fit.residual <= 1e-12
    np.testing.assert_allclose(fit.semi_axes, (3, 1), atol=1e-10)
    assert abs(fit.center - (0.5 - 1j)) <= 1e-10
    assert abs(fit.angle - 0.3) <= 1e-10


def test_ellipse_fit_degenerate():
    fit = ellipse_fit(np.linspace(0, 1, 20) * (1 + 1j))
    assert fit.degenerate and not fit.is_ellipse
    assert ellipse_fit(np.exp(1j * np.arange(4))).degenerate


def test_ellipse_fit_reciprocal_n7():
    A = to_dense(build(ReciprocalSpec.from_A(7, 1.05, 1.62)))
    c1, c2, c3 = kippenhahn_components(A, [1, 2, 3])
    assert ellipse_fit(c2.points).residual <= 1e-8
    assert ellipse_fit(c1.points).residual > 1e-5
    assert ellipse_fit(c3.points).residual > 1e-5


# 3x3 classification

def test_classify_m1():
    c = classify_3x3(M1)
    assert c.shape == "Ovular" and c.rank2.is_empty
    assert c.prop1_consistent and c.prop2_consistent


def test_classify_m2():
    c = classify_3x3(M2)
    assert c.shape == "EllipticalDisk"
    assert c.rank2.kind is RegionKind.POINT and abs(c.rank2.center) <= 1e-6
    foci = np.sort(np.linalg.eigvals(M2).real)
    np.testing.assert_allclose(foci[[0, 2]], [-1.5, 1.5], atol=1e-9)
    assert c.prop1_consistent and c.prop2_consistent


def test_classify_normal_triangle():
    c = classify_3x3(np.diag([0, 1, 1j]))
    assert c.shape == "Other"
    assert c.prop1_consistent and c.prop2_consistent


# intersections

def test_m3_components_intersect():
    c2, c3 = kippenhahn_components(M3, [2, 3])
    assert curve_intersections(c2, c3)


@settings(max_examples=10, deadline=None)
@given(seed=seeds, n=st.integers(3, 7))
def test_outer_component_never_crosses_next(seed, n):
    A = generic_matrix(seed, n)
    c1, c2 = kippenhahn_components(A, [1, 2])
    assert curve_intersections(c1, c2) == []


def test_reciprocal_intersection_example():
    # near-balanced second pair: the middle component pokes through gamma_2
    A = to_dense(build(ReciprocalSpec.from_A(6, 1.62, 1.001)))
    c2, c3 = kippenhahn_components(A, [2, 3])
    assert curve_intersections(c2, c3)


@pytest.mark.xfail(strict=True, reason="no crossing found for these parameters; see the decisions ledger")
def test_reciprocal_n6_published_intersection():
    A = to_dense(build(ReciprocalSpec.from_A(6, 1.05, 1.62)))
    c2, c3 = kippenhahn_components(A, [2, 3], N=4096)
    assert curve_intersections(c2, c3)


def test_batched_ranges_match_single(rng):
    A = random_complex(rng, 6)
    batch = rank_k_ranges(A, N=256)
    assert sorted(batch) == list(range(1, 7))
    for k, r in batch.items():
        single = rank_k_range(A, k, 256)
        assert r.kind == single.kind
        assert np.array_equal(r.vertices, single.vertices)
    with pytest.raises(ValueError):
        rank_k_ranges(A, [0, 1])

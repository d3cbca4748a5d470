"""Catalogue of the example matrices and the figures drawn from them."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .numerical_range import ellipse_fit, kippenhahn_components, numerical_radius
from .reciprocal import ReciprocalSpec, build
from .svg import Figure, ellipse_points
from .tridiagonal import TwoPeriodicTridiagonal, to_dense

M1 = np.array([[0, -0.5, 0], [2, 0, -0.5], [0, 0.5, math.sqrt(2)]], dtype=complex)
M2 = np.array([[0, 0.5, 0], [0.5, 0, 2], [0, 1, 0]], dtype=complex)
M3 = np.array(
    [
        [1, 1, 0, 0, 0],
        [0.25, 2, 0.5, 0, 0],
        [0, 0.25, 0, 0.75, 0],
        [0, 0, 0.25, -2, 1],
        [0, 0, 0, 0.25, -1],
    ],
    dtype=complex,
)
M4_SPEC = TwoPeriodicTridiagonal(7, 0, 0, ((3, 2), (6, 2)))
M4 = to_dense(M4_SPEC)

RECIPROCAL_CASES = {
    "rec_n4": ReciprocalSpec(4, 2.0, 21 / 20),
    "rec_n5": ReciprocalSpec(5, 2.0, 21 / 20),
    "rec_n6_a": ReciprocalSpec.from_A(6, 1.25, 1.5),
    "rec_n6_b": ReciprocalSpec.from_A(6, 1.05, 1.62),
    "rec_n7_a": ReciprocalSpec.from_A(7, 1.05, 1.62),
    "rec_n7_b": ReciprocalSpec.from_A(7, 2.0, 1.5),
}


@dataclass(frozen=True)
class FigureSpec:
    name: str
    title: str
    matrix: np.ndarray
    best_fit: bool = False


def catalogue():
    figs = [
        FigureSpec("fig_m1", "M1 (3x3, ovular)", M1),
        FigureSpec("fig_m2", "M2 (3x3, elliptical)", M2),
        FigureSpec("fig_m3", "M3 (5x5)", M3),
        FigureSpec("fig_m4", "M4 (7x7, b=3,6 c=2,2)", M4),
    ]
    dotted = {"rec_n6_a", "rec_n6_b", "rec_n7_b"}
    for name, spec in RECIPROCAL_CASES.items():
        title = f"reciprocal n={spec.n}, A1={spec.A1:.4g}, A2={spec.A2:.4g}"
        figs.append(FigureSpec(f"fig_{name}", title, to_dense(build(spec)), name in dotted))
    return figs


def draw(matrix, title="", N=1024, best_fit=False, ks=None):
    comps = kippenhahn_components(matrix, ks, N)
    fig = Figure(numerical_radius(matrix, N), title)
    scale = max(float(np.abs(c.points).max()) for c in comps) or 1.0
    for c in comps:
        label = f"gamma_{c.k}"
        if c.spread() <= 1e-9 * scale:
            fig.dot(c.points.mean(), label)
            continue
        fig.curve(c.points, label)
        if best_fit:
            fit = ellipse_fit(c.points)
            if fit.is_ellipse and fit.semi_axes is not None:
                fig.curve(ellipse_points(fit.center, fit.semi_axes, fit.angle), color="#555555", dashed=True)
    return fig.render()


def write_figures(outdir, N=1024):
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for spec in catalogue():
        path = os.path.join(outdir, spec.name + ".svg")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(draw(spec.matrix, spec.title, N, spec.best_fit))
        paths.append(path)
    return paths

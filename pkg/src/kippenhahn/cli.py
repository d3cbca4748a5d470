"""Command line interface: ``kippenhahn {range,curve,check,figures,probe-conjecture}``.

Exit codes: 0 success (an empty range is a success), 1 a check failed or an
output could not be written, 2 invalid input, 3 the input is not generic where
genericity is required.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import figures
from .matrix_io import InputError, curves_csv, parse_input
from .numerical_range import (
    DEFAULT_SAMPLES,
    DegenerateEigenvalueError,
    ellipse_fit,
    is_generic,
    kippenhahn_components,
    normal_range,
    numerical_radius,
    rank_k_ranges,
)
from .reciprocal import (
    EXACT_ELLIPSE,
    NEAR_ELLIPSE,
    NonGenericError,
    conjecture_probe,
    elliptical_components,
    symmetry_check,
    zeta_spectra,
)
from .svg import Figure, ellipse_points
from .linalg import jacobi_eigh, rotated_real_stack
from .tridiagonal import aas_condition, oracle_deviation

ORACLE_TOL = 1e-8


@dataclass(frozen=True)
class RunConfig:
    samples: int = DEFAULT_SAMPLES
    tol: float | None = None  # None: scaled default of the compute modules
    k: str = "all"
    format: str | None = None
    out: str | None = None

    def __post_init__(self):
        if self.samples < 8:
            raise InputError(f"--samples must be at least 8, got {self.samples}")
        if self.tol is not None and not self.tol > 0:
            raise InputError(f"--tol must be positive, got {self.tol}")

    @classmethod
    def from_args(cls, args):
        return cls(**{f: getattr(args, f) for f in ("samples", "tol", "k", "format", "out") if hasattr(args, f)})


def _k_values(spec, upper):
    if spec == "all":
        return list(range(1, upper + 1))
    try:
        k = int(spec)
    except ValueError:
        raise InputError(f"--k: expected an integer or 'all', got {spec!r}") from None
    if not 1 <= k <= upper:
        raise InputError(f"--k: must lie in 1..{upper}, got {k}")
    return [k]


def _load(args):
    if args.input is None:
        raise InputError("--input is required")
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{args.input}: {exc.strerror}") from None
    return parse_input(text)


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _regions(inp, ks, N, tol, refine):
    if inp.kind == "normal":
        return {k: normal_range(inp.eigenvalues, k, tol) for k in ks}
    return rank_k_ranges(inp.matrix(), ks, N, tol, refine=refine)


def cmd_range(args, cfg):
    inp = _load(args)
    ks = _k_values(cfg.k, inp.size)
    regions = list(_regions(inp, ks, cfg.samples, cfg.tol, args.refine).items())
    fmt = cfg.format or "json"
    if fmt == "json":
        if len(regions) == 1:
            payload = regions[0][1].to_dict()
        else:
            payload = {"regions": [{"k": k, **r.to_dict()} for k, r in regions]}
        _emit(json.dumps(payload, sort_keys=True) + "\n", cfg.out)
    elif fmt == "svg":
        M = inp.matrix()
        fig = Figure(numerical_radius(M, cfg.samples), "rank-k numerical ranges")
        for k, r in regions:
            if r.kind.value == "polygon":
                fig.region(r.vertices, f"Lambda_{k}")
            elif r.kind.value == "segment":
                fig.curve(r.endpoints, f"Lambda_{k}", closed=False)
            elif r.kind.value == "point":
                fig.dot(r.center, f"Lambda_{k}")
        _emit(fig.render(), cfg.out)
    else:
        raise InputError(f"--format {fmt} is not supported by 'range' (json or svg)")
    return 0


def cmd_curve(args, cfg):
    inp = _load(args)
    M = inp.matrix()
    n = M.shape[0]
    ks = _k_values(cfg.k, (n + 1) // 2)
    comps = kippenhahn_components(M, ks, cfg.samples)
    fmt = cfg.format or "csv"
    if fmt == "csv":
        _emit(curves_csv(comps), cfg.out)
    elif fmt == "json":
        payload = {"components": [
            {"k": c.k, "closed": c.closed, "theta": c.theta.tolist(),
             "points": [[float(z.real), float(z.imag)] for z in c.points]}
            for c in comps
        ]}
        _emit(json.dumps(payload) + "\n", cfg.out)
    else:
        fig = Figure(numerical_radius(M, cfg.samples), "Kippenhahn curve components")
        scale = max(float(np.abs(c.points).max()) for c in comps) or 1.0
        for c in comps:
            if c.spread() <= 1e-9 * scale:
                fig.dot(c.points.mean(), f"gamma_{c.k}")
                continue
            fig.curve(c.points, f"gamma_{c.k}")
            if args.ellipses:
                fit = ellipse_fit(c.points)
                if fit.is_ellipse and fit.semi_axes is not None:
                    fig.curve(ellipse_points(fit.center, fit.semi_axes, fit.angle), color="#555555", dashed=True)
        _emit(fig.render(), cfg.out)
    return 0


class Report:
    def __init__(self):
        self.lines = []
        self.ok = True
        self.data = {}

    def check(self, name, passed, detail=""):
        self.ok &= bool(passed)
        self.lines.append(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
        self.data[name] = {"pass": bool(passed), "detail": detail}

    def info(self, name, detail):
        self.lines.append(f"[INFO] {name}: {detail}")
        self.data[name] = {"detail": detail}

    def warn(self, name, detail):
        self.lines.append(f"[WARN] {name}: {detail}")
        self.data[name] = {"warning": detail}


def run_check(inp, N=DEFAULT_SAMPLES, tol=None):
    rep = Report()
    M = inp.matrix()
    n = M.shape[0]
    gen = is_generic(M, N)
    rep.info("generic", f"{gen.is_generic} (min relative gap {gen.min_gap:.3e} at theta={gen.argmin_theta:.6f})")

    T = inp.two_periodic()
    if T is not None:
        dev = oracle_deviation(T)
        rep.check("closed form vs dense eigensolver", dev <= ORACLE_TOL, f"max deviation {dev:.3e}")
        rep.info("AAS condition", str(aas_condition(T)))
        if T.unbalanced:
            rep.check("unbalanced pairs imply generic", gen.is_generic)
        else:
            rep.warn("balanced pair", "off-diagonal pair with equal moduli; genericity is not guaranteed "
                     "and the closed form may fall back to the dense solver")

    if inp.kind == "reciprocal":
        spec = inp.reciprocal
        thetas = 2 * np.pi * np.arange(360) / 360
        w, _ = jacobi_eigh(rotated_real_stack(M, thetas))
        dz = float(np.abs(zeta_spectra(spec, thetas) - w).max())
        rep.check("+-sqrt(zeta_k) vs dense eigensolver", dz <= ORACLE_TOL, f"max deviation {dz:.3e}")
        if spec.is_generic:
            comps = kippenhahn_components(M, None, N)
            sym = symmetry_check(comps, 1e-6, n)
            worst = max(max(d) for d in sym.distances.values())
            rep.check("axis symmetry of the components", sym.ok, f"max mirror distance {worst:.3e}")
            for v in elliptical_components(spec):
                res = ellipse_fit(comps[v.k - 1].points).residual
                if v.verdict == "ellipse":
                    rep.check(f"gamma_{v.k} predicted ellipse", res <= EXACT_ELLIPSE, f"residual {res:.3e}")
                elif v.verdict == "not ellipse":
                    rep.check(f"gamma_{v.k} predicted non-elliptical", res >= NEAR_ELLIPSE, f"residual {res:.3e}")
                else:
                    rep.info(f"gamma_{v.k} (even n, A1 != A2)", f"residual {res:.3e}")
        else:
            rep.warn("reciprocal", "A1 or A2 equals 1: not generic")

    if inp.kind == "normal":
        approxes = rank_k_ranges(M, None, N, refine=True)
        for k in range(1, n + 1):
            exact = normal_range(inp.eigenvalues, k)
            approx = approxes[k]
            d = exact.hausdorff(approx)
            passed = d <= 1e-5 or (exact.is_empty and approx.is_empty)
            rep.check(f"Lambda_{k}: subset hulls vs half-planes", passed, f"{exact.kind.value}, Hausdorff {d:.2e}")

    mid = (n + 1) // 2
    for k, r in rank_k_ranges(M, range(1, min(mid + 1, n) + 1), N, tol).items():
        rep.info(f"Lambda_{k}", r.kind.value + (f" at {r.center:.6g}" if r.kind.value == "point" else ""))
        if gen.is_generic and k > mid:
            rep.check(f"Lambda_{k} empty beyond ceil(n/2)", r.is_empty)
        if gen.is_generic and n % 2 and k == mid:
            gamma = kippenhahn_components(M, [mid], N)[0]
            collapsed = gamma.spread() <= r.tol
            rep.check(f"Lambda_{mid} is a point iff gamma_{mid} is", collapsed == (r.kind.value == "point"),
                      f"gamma_{mid} spread {gamma.spread():.3e}")
    return rep


def cmd_check(args, cfg):
    rep = run_check(_load(args), cfg.samples, cfg.tol)
    if cfg.format == "json":
        _emit(json.dumps({"ok": rep.ok, "checks": rep.data}, indent=2, sort_keys=True) + "\n", cfg.out)
    else:
        _emit("\n".join(rep.lines) + "\n", cfg.out)
    return 0 if rep.ok else 1


def cmd_figures(args, cfg):
    out = cfg.out or "figures"
    try:
        paths = figures.write_figures(out, cfg.samples)
    except OSError as exc:
        print(f"cannot write figures to {out}: {exc.strerror}", file=sys.stderr)
        return 1
    for p in paths:
        print(p)
    return 0


def cmd_probe(args, cfg):
    inp = _load(args)
    if inp.kind != "reciprocal":
        raise InputError("probe-conjecture needs a reciprocal input")
    spec = inp.reciprocal
    try:
        rows = conjecture_probe(spec.n, spec.A1, spec.A2, cfg.samples)
    except NonGenericError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if cfg.format == "json":
        _emit(json.dumps({"n": spec.n, "A1": spec.A1, "A2": spec.A2,
                          "residuals": {str(k): r for k, r in rows}}, sort_keys=True) + "\n", cfg.out)
    else:
        lines = [f"n={spec.n} A1={spec.A1:.6g} A2={spec.A2:.6g}", "k  ellipse-fit residual"]
        lines += [f"{k}  {r:.3e}" for k, r in rows]
        _emit("\n".join(lines) + "\n", cfg.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="kippenhahn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats):
        p.add_argument("--input", help="JSON matrix description")
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="angle grid size N")
        p.add_argument("--tol", type=float, default=None, help="region tolerance")
        p.add_argument("--k", default="all", help="index k or 'all'")
        p.add_argument("--format", choices=formats, default=None)
        p.add_argument("--out", default=None, help="output path (stdout if omitted)")

    p = sub.add_parser("range", help="rank-k numerical ranges")
    common(p, ("json", "svg"))
    p.add_argument("--refine", action="store_true", help="add half-planes at eigenvalue crossings")
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("curve", help="Kippenhahn curve components")
    common(p, ("csv", "json", "svg"))
    p.add_argument("--ellipses", action="store_true", help="overlay best-fit ellipses (dotted)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("check", help="cross-validate closed forms against the dense solver")
    common(p, ("json",))
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("figures", help="regenerate the example figures as SVG")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("probe-conjecture", help="ellipse residuals for even-n reciprocal matrices")
    common(p, ("json",))
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateEigenvalueError, NonGenericError) as exc:
        print(f"not generic: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        # input files are read in _load, so this is an output that could not be written
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

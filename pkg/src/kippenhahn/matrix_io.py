"""JSON matrix input and region/curve serialization.

Input files hold exactly one of four variants, complex numbers always as
``[re, im]`` pairs::

    {"dense": {"n": 2, "entries": [[0, 0], [1, 0], [0, 0], [0, 0]]}}
    {"tridiag2p": {"n": 7, "a1": [0, 0], "a2": [0, 0],
                   "b1": [3, 0], "c1": [2, 0], "b2": [6, 0], "c2": [2, 0]}}
    {"reciprocal": {"n": 5, "a1": 2, "a2": 1.05}}      # or "A1"/"A2"
    {"normal": {"eigenvalues": [[1, 0], [0, 1]]}}      # or a bare list
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .reciprocal import ReciprocalSpec, build
from .tridiagonal import TwoPeriodicTridiagonal, to_dense

VARIANTS = ("dense", "tridiag2p", "reciprocal", "normal")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class MatrixInput:
    kind: str
    dense: tuple | None = None  # row-major complex entries
    n: int | None = None
    tridiag: TwoPeriodicTridiagonal | None = None
    reciprocal: ReciprocalSpec | None = None
    eigenvalues: tuple | None = None

    @property
    def size(self):
        return len(self.eigenvalues) if self.kind == "normal" else self.n

    def matrix(self):
        if self.kind == "dense":
            return np.array(self.dense, dtype=complex).reshape(self.n, self.n)
        if self.kind == "tridiag2p":
            return to_dense(self.tridiag)
        if self.kind == "reciprocal":
            return to_dense(build(self.reciprocal))
        return np.diag(np.array(self.eigenvalues, dtype=complex))

    def two_periodic(self):
        if self.kind == "tridiag2p":
            return self.tridiag
        if self.kind == "reciprocal":
            return build(self.reciprocal)
        if self.kind == "dense":
            try:
                return TwoPeriodicTridiagonal.from_dense(self.matrix())
            except ValueError:
                return None
        return None

    @classmethod
    def from_matrix(cls, M):
        M = np.asarray(M, dtype=complex)
        return cls("dense", dense=tuple(complex(z) for z in M.ravel()), n=M.shape[0])


def _pair(value, where):
    if isinstance(value, bool) or not isinstance(value, (list, tuple)) or len(value) != 2:
        raise InputError(f"{where}: expected a [re, im] pair, got {value!r}")
    re, im = value
    for part in (re, im):
        if isinstance(part, bool) or not isinstance(part, (int, float)) or not math.isfinite(part):
            raise InputError(f"{where}: [re, im] entries must be finite numbers, got {value!r}")
    return complex(re, im)


def _real(value, where, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise InputError(f"{where}: expected a finite number, got {value!r}")
    if positive and value <= 0:
        raise InputError(f"{where}: must be positive, got {value!r}")
    return float(value)


def _dim(body, where, minimum=1):
    n = body.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < minimum:
        raise InputError(f"{where}.n: expected an integer >= {minimum}, got {n!r}")
    return n


def parse_input(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError("top level: expected a JSON object")
    present = [k for k in VARIANTS if k in data]
    unknown = sorted(set(data) - set(VARIANTS))
    if unknown:
        raise InputError(f"top level: unknown key(s) {unknown}; expected one of {list(VARIANTS)}")
    if len(present) != 1:
        raise InputError(f"top level: exactly one of {list(VARIANTS)} required, got {present}")
    kind = present[0]
    body = data[kind]

    if kind == "normal":
        eig = body.get("eigenvalues") if isinstance(body, dict) else body
        if not isinstance(eig, list) or not eig:
            raise InputError("normal.eigenvalues: expected a non-empty list of [re, im] pairs")
        vals = tuple(_pair(v, f"normal.eigenvalues[{i}]") for i, v in enumerate(eig))
        return MatrixInput("normal", eigenvalues=vals)

    if not isinstance(body, dict):
        raise InputError(f"{kind}: expected an object")
    if kind == "dense":
        n = _dim(body, kind)
        entries = body.get("entries")
        if not isinstance(entries, list) or len(entries) != n * n:
            got = len(entries) if isinstance(entries, list) else entries
            raise InputError(f"dense.entries: expected {n * n} [re, im] pairs, got {got!r}")
        vals = tuple(_pair(v, f"dense.entries[{i}]") for i, v in enumerate(entries))
        return MatrixInput("dense", dense=vals, n=n)
    if kind == "tridiag2p":
        n = _dim(body, kind, minimum=2)
        f = {key: _pair(body.get(key), f"tridiag2p.{key}") for key in ("a1", "a2", "b1", "c1", "b2", "c2")}
        T = TwoPeriodicTridiagonal(n, f["a1"], f["a2"], ((f["b1"], f["c1"]), (f["b2"], f["c2"])))
        return MatrixInput("tridiag2p", n=n, tridiag=T)
    n = _dim(body, kind, minimum=2)
    if "A1" in body or "A2" in body:
        if "a1" in body or "a2" in body:
            raise InputError("reciprocal: give either a1/a2 or A1/A2, not both")
        A1 = _real(body.get("A1"), "reciprocal.A1")
        A2 = _real(body.get("A2"), "reciprocal.A2")
        if A1 < 1 or A2 < 1:
            raise InputError("reciprocal.A1/A2: must be >= 1")
        spec = ReciprocalSpec.from_A(n, A1, A2)
    else:
        spec = ReciprocalSpec(n, _real(body.get("a1"), "reciprocal.a1", True),
                              _real(body.get("a2"), "reciprocal.a2", True))
    return MatrixInput("reciprocal", n=n, reciprocal=spec)


def _pj(z):
    return [float(z.real), float(z.imag)]


def input_to_dict(inp):
    if inp.kind == "dense":
        return {"dense": {"n": inp.n, "entries": [_pj(z) for z in inp.dense]}}
    if inp.kind == "tridiag2p":
        T = inp.tridiag
        (b1, c1), (b2, c2) = T.pairs
        vals = dict(a1=T.a1, a2=T.a2, b1=b1, c1=c1, b2=b2, c2=c2)
        return {"tridiag2p": {"n": T.n, **{k: _pj(v) for k, v in vals.items()}}}
    if inp.kind == "reciprocal":
        s = inp.reciprocal
        return {"reciprocal": {"n": s.n, "a1": s.a1, "a2": s.a2}}
    return {"normal": {"eigenvalues": [_pj(z) for z in inp.eigenvalues]}}


def serialize_input(inp):
    return json.dumps(input_to_dict(inp), sort_keys=True)


def fmt(x):
    """17 significant digits: round-trip safe for doubles."""
    return format(float(x), ".17g")


def curves_csv(curves):
    buf = io.StringIO()
    buf.write("theta,k,re,im\n")
    for c in curves:
        for t, z in zip(c.theta, c.points):
            buf.write(f"{fmt(t)},{c.k},{fmt(z.real)},{fmt(z.imag)}\n")
    return buf.getvalue()


def read_curves_csv(text):
    rows = [line.split(",") for line in text.strip().splitlines()[1:]]
    return [(float(t), int(k), complex(float(re), float(im))) for t, k, re, im in rows]

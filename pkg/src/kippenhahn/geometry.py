"""Planar convex geometry: half-plane clipping, hulls, regions, distances.

Points are ``(m, 2)`` float arrays.  Half-planes are written as
``normal . p <= offset``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial import cKDTree


def to_xy(z):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return np.column_stack([z.real, z.imag])


def to_complex(P):
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    return P[:, 0] + 1j * P[:, 1]


def clip(P, normal, offset, slack=0.0):
    """Sutherland-Hodgman step: keep the part of convex polygon P inside
    ``normal . p <= offset + slack``."""
    if len(P) == 0:
        return P
    vals = P @ normal - (offset + slack)
    inside = vals <= 0
    if inside.all():
        return P
    if not inside.any():
        return P[:0]
    pin = np.concatenate((inside[-1:], inside[:-1]))
    cross = inside != pin
    edges = np.flatnonzero(cross)
    if len(edges) == 2:
        # convex case: one inside run, only two edges to cut
        prev = P[edges - 1]
        pv = vals[edges - 1]
        t = pv / (pv - vals[edges])
        X = prev + t[:, None] * (P[edges] - prev)
        i1, i2 = edges
        if inside[i1]:
            return np.concatenate((X[:1], P[i1:i2], X[1:]))
        return np.concatenate((P[:i1], X, P[i2:]))
    prev = np.concatenate((P[-1:], P[:-1]))
    pvals = np.concatenate((vals[-1:], vals[:-1]))
    denom = np.where(cross, pvals - vals, 1.0)
    t = pvals / denom
    X = prev + t[:, None] * (P - prev)
    out = np.empty((2 * len(P), 2))
    out[0::2] = X
    out[1::2] = P
    keep = np.empty(2 * len(P), dtype=bool)
    keep[0::2] = cross
    keep[1::2] = inside
    return out[keep]


def box(half_width, center=(0.0, 0.0)):
    cx, cy = center
    h = half_width
    return np.array([[cx - h, cy - h], [cx + h, cy - h], [cx + h, cy + h], [cx - h, cy + h]])


def intersect_halfplanes(normals, offsets, bound, slack=0.0):
    """Clip the bounding polygon ``bound`` by every half-plane in turn."""
    P = np.asarray(bound, dtype=float)
    for nrm, off in zip(normals, offsets):
        P = clip(P, nrm, off, slack)
        if len(P) == 0:
            break
    return P


def polygon_area(P):
    if len(P) < 3:
        return 0.0
    x, y = P[:, 0], P[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def dedupe(P, tol):
    """Drop consecutive vertices closer than tol (cyclically)."""
    if len(P) < 2:
        return P
    keep = [0]
    for i in range(1, len(P)):
        if np.hypot(*(P[i] - P[keep[-1]])) >= tol:
            keep.append(i)
    while len(keep) > 1 and np.hypot(*(P[keep[-1]] - P[keep[0]])) < tol:
        keep.pop()
    return P[keep]


def drop_collinear(P, tol):
    """Remove vertices lying within tol of the chord through their neighbours."""
    changed = True
    while changed and len(P) > 3:
        prev = np.roll(P, 1, axis=0)
        nxt = np.roll(P, -1, axis=0)
        e = nxt - prev
        L = np.hypot(e[:, 0], e[:, 1])
        cross = e[:, 0] * (P[:, 1] - prev[:, 1]) - e[:, 1] * (P[:, 0] - prev[:, 0])
        dist = np.abs(cross) / np.where(L > 0, L, 1.0)
        flat = np.nonzero(dist < tol)[0]
        changed = len(flat) > 0
        if changed:
            # one at a time keeps neighbours of removed vertices honest
            P = np.delete(P, flat[0], axis=0)
    return P


def convex_hull(points):
    """Andrew's monotone chain; counterclockwise, no repeated end point."""
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                (ax, ay), (bx, by) = out[-2], out[-1]
                if (bx - ax) * (p[1] - ay) - (by - ay) * (p[0] - ax) <= 0:
                    out.pop()
                else:
                    break
            out.append(tuple(p))
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def hull_halfplanes(hull, pad=1.0):
    """Half-plane description of a (possibly degenerate) convex hull.

    Segments and points get explicit caps so that their H-representation is
    the set itself rather than a line or the whole plane.
    """
    hull = np.asarray(hull, dtype=float).reshape(-1, 2)
    normals, offsets = [], []
    if len(hull) == 1:
        p = hull[0]
        for nrm in ((1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)):
            nrm = np.array(nrm)
            normals.append(nrm)
            offsets.append(float(nrm @ p))
    elif len(hull) == 2:
        p, q = hull
        d = q - p
        d = d / np.hypot(*d)
        nrm = np.array([d[1], -d[0]])
        for v, pt in ((nrm, p), (-nrm, p), (d, q), (-d, p)):
            normals.append(v)
            offsets.append(float(v @ pt))
    else:
        nxt = np.roll(hull, -1, axis=0)
        e = nxt - hull
        nrm = np.column_stack([e[:, 1], -e[:, 0]])
        nrm = nrm / np.hypot(nrm[:, 0], nrm[:, 1])[:, None]
        normals.extend(nrm)
        offsets.extend(np.sum(nrm * hull, axis=1))
    return np.array(normals), np.array(offsets)


def _segment_distance(Q, A, B):
    """Distances from points Q (m,2) to segments A->B (s,2); shape (m, s)."""
    d = B - A
    dd = np.sum(d * d, axis=1)
    dd = np.where(dd > 0, dd, 1.0)
    rel = Q[:, None, :] - A[None, :, :]
    t = np.clip(np.sum(rel * d[None], axis=2) / dd[None], 0.0, 1.0)
    proj = A[None] + t[..., None] * d[None]
    return np.hypot(Q[:, None, 0] - proj[..., 0], Q[:, None, 1] - proj[..., 1])


def polyline_distance(Q, P, closed=True, chunk=2048, neighbours=8):
    """Distance from each point of Q to the polyline through P."""
    Q = np.asarray(Q, dtype=float).reshape(-1, 2)
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    if len(P) == 1:
        return np.hypot(Q[:, 0] - P[0, 0], Q[:, 1] - P[0, 1])
    A = P
    B = np.roll(P, -1, axis=0)
    if not closed:
        A, B = P[:-1], P[1:]
    out = np.full(len(Q), np.inf)
    todo = np.arange(len(Q))
    if len(Q) * len(A) > 1 << 16 and len(P) > 2 * neighbours:
        # a segment of length l whose endpoints both lie beyond the k-th
        # nearest vertex (radius r) is at least r - l/2 away; long segments
        # are checked directly so that l stays small for the rest
        seg = np.hypot(*(B - A).T)
        long = seg > 4 * np.median(seg)
        short = float(seg[~long].max(initial=0.0))
        dist, idx = cKDTree(P).query(Q, neighbours)
        cand = np.concatenate((idx, idx - 1), axis=1) % len(P)
        if not closed:
            cand = np.clip(cand, 0, len(A) - 1)
        Ac, Bc = A[cand], B[cand]
        d = Bc - Ac
        dd = np.sum(d * d, axis=2)
        dd = np.where(dd > 0, dd, 1.0)
        rel = Q[:, None] - Ac
        t = np.clip(np.sum(rel * d, axis=2) / dd, 0.0, 1.0)
        proj = Ac + t[..., None] * d
        out = np.hypot(Q[:, None, 0] - proj[..., 0], Q[:, None, 1] - proj[..., 1]).min(axis=1)
        if long.any():
            out = np.minimum(out, _segment_distance(Q, A[long], B[long]).min(axis=1))
        todo = np.flatnonzero(out > dist[:, -1] - short / 2)
    for i in range(0, len(todo), chunk):
        rows = todo[i:i + chunk]
        out[rows] = _segment_distance(Q[rows], A, B).min(axis=1)
    return out


def signed_depth(Q, P):
    """Signed distance of points Q to the boundary of the CCW convex polygon P:
    positive inside, negative outside (exact for points inside)."""
    Q = np.asarray(Q, dtype=float).reshape(-1, 2)
    e = np.roll(P, -1, axis=0) - P
    L = np.hypot(e[:, 0], e[:, 1])
    nrm = np.column_stack([-e[:, 1], e[:, 0]]) / L[:, None]
    cross = Q @ nrm.T - np.sum(nrm * P, axis=1)[None]
    depth = cross.min(axis=1)
    # inside a convex polygon the nearest edge line is the nearest edge
    out = depth < 0
    depth[out] = -polyline_distance(Q[out], P)
    return depth


class RegionKind(str, Enum):
    EMPTY = "empty"
    POINT = "point"
    SEGMENT = "segment"
    POLYGON = "polygon"


@dataclass
class ConvexRegion:
    """A compact convex planar set classified at tolerance ``tol``.

    ``vertices`` is empty for EMPTY, one row for POINT, the two endpoints for
    SEGMENT and the counterclockwise boundary for POLYGON.
    """

    kind: RegionKind
    vertices: np.ndarray
    tol: float

    @classmethod
    def empty(cls, tol):
        return cls(RegionKind.EMPTY, np.zeros((0, 2)), tol)

    @classmethod
    def from_polygon(cls, P, tol):
        P = np.asarray(P, dtype=float).reshape(-1, 2)
        if len(P) == 0:
            return cls.empty(tol)
        lo, hi = P.min(axis=0), P.max(axis=0)
        side = hi - lo
        if np.hypot(*side) < tol or (side.max() < tol and _diameter(P) < tol):
            return cls(RegionKind.POINT, P.mean(axis=0)[None], tol)
        P = dedupe(P, tol)
        if len(P) >= 3 and polygon_area(P) < 0:
            P = P[::-1]
        area = abs(polygon_area(P))
        # width >= area / diameter >= area / bbox diagonal
        diag = float(np.hypot(*(P.max(axis=0) - P.min(axis=0))))
        if len(P) < 3 or area / diag < tol and _width(P) < tol:
            i, j = _diameter_pair(P)
            return cls(RegionKind.SEGMENT, P[[i, j]], tol)
        P = drop_collinear(P, tol * 1e-3)
        return cls(RegionKind.POLYGON, P, tol)

    @property
    def is_empty(self):
        return self.kind is RegionKind.EMPTY

    @property
    def center(self):
        if self.is_empty:
            return None
        c = self.vertices.mean(axis=0)
        return complex(c[0], c[1])

    @property
    def endpoints(self):
        if self.kind is not RegionKind.SEGMENT:
            return None
        return tuple(complex(x, y) for x, y in self.vertices)

    @property
    def area(self):
        return abs(polygon_area(self.vertices)) if self.kind is RegionKind.POLYGON else 0.0

    @property
    def diameter(self):
        return _diameter(self.vertices) if len(self.vertices) else 0.0

    def distance(self, points):
        """Euclidean distance from points (complex or (m,2)) to the region."""
        Q = _as_points(points)
        if self.is_empty:
            return np.full(len(Q), np.inf)
        if self.kind is RegionKind.POLYGON:
            return np.maximum(-signed_depth(Q, self.vertices), 0.0)
        return polyline_distance(Q, self.vertices, closed=False)

    def depth(self, points):
        """Signed distance to the boundary, positive strictly inside."""
        Q = _as_points(points)
        if self.kind is RegionKind.POLYGON:
            return signed_depth(Q, self.vertices)
        return -self.distance(Q)

    def contains(self, points, tol=None):
        tol = self.tol if tol is None else tol
        return self.distance(points) <= tol

    def contains_region(self, other, tol=None):
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        return bool(np.all(self.contains(other.vertices, tol)))

    def hausdorff(self, other):
        if self.is_empty and other.is_empty:
            return 0.0
        if self.is_empty or other.is_empty:
            return float("inf")
        return float(max(self.distance(other.vertices).max(), other.distance(self.vertices).max()))

    def to_dict(self, digits=None):
        out = {"kind": self.kind.value}

        def pt(v):
            x, y = (float(c) if abs(c) >= self.tol else 0.0 for c in v)
            if digits is not None:
                x, y = round(x, digits), round(y, digits)
            return [x, y]

        if self.kind is RegionKind.POINT:
            out["center"] = pt(self.vertices[0])
        elif self.kind is RegionKind.SEGMENT:
            out["endpoints"] = [pt(v) for v in self.vertices]
        elif self.kind is RegionKind.POLYGON:
            out["vertices"] = [pt(v) for v in self.vertices]
        return out


def _as_points(points):
    arr = np.asarray(points)
    if np.iscomplexobj(arr) or arr.ndim <= 1:
        return to_xy(arr)
    return arr.astype(float).reshape(-1, 2)


def _diameter_pair(P, chunk=1024):
    best, pair = -1.0, (0, 0)
    for i in range(0, len(P), chunk):
        D = np.hypot(P[i:i + chunk, None, 0] - P[None, :, 0], P[i:i + chunk, None, 1] - P[None, :, 1])
        j = np.unravel_index(np.argmax(D), D.shape)
        if D[j] > best:
            best, pair = D[j], (i + j[0], j[1])
    return pair


def _diameter(P):
    if len(P) < 2:
        return 0.0
    i, j = _diameter_pair(P)
    return float(np.hypot(*(P[i] - P[j])))


def _width(P, chunk=1024):
    """Minimum over edge directions of the extent along the edge normal."""
    if len(P) < 3:
        return 0.0
    e = np.roll(P, -1, axis=0) - P
    L = np.hypot(e[:, 0], e[:, 1])
    ok = L > 0
    e, L = e[ok], L[ok]
    nrm = np.column_stack([e[:, 1], -e[:, 0]]) / L[:, None]
    best = np.inf
    for i in range(0, len(nrm), chunk):
        proj = nrm[i:i + chunk] @ P.T
        best = min(best, float((proj.max(axis=1) - proj.min(axis=1)).min()))
    return best

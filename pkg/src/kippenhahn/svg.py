"""Minimal deterministic SVG writer for curves and regions in the complex plane.

The drawing is a y-up frame centred on the origin; geometry is written as
plain polylines/polygons so that the file doubles as a data record.
"""

from __future__ import annotations

import math

import numpy as np

PALETTE = ("#1f4e9c", "#c0392b", "#1e8449", "#8e44ad", "#d35400", "#117a65", "#7f8c8d")
SIZE = 640


def _num(x):
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class Figure:
    def __init__(self, radius, title=""):
        self.R = 1.1 * (radius if radius > 0 else 1.0)
        self.title = title
        self.items = []
        self.legend = []

    def _pts(self, z):
        z = np.asarray(z)
        if z.ndim == 2 and z.shape[1] == 2 and not np.iscomplexobj(z):
            z = z[:, 0] + 1j * z[:, 1]
        z = np.atleast_1d(z.astype(complex))
        return " ".join(f"{_num(p.real)},{_num(-p.imag)}" for p in z)

    def curve(self, points, label=None, color=None, dashed=False, closed=True, width=1.0):
        color = color or PALETTE[len(self.legend) % len(PALETTE)]
        sw = _num(width * self.R / 300)
        dash = f' stroke-dasharray="{_num(self.R / 80)},{_num(self.R / 120)}"' if dashed else ""
        tag = "polygon" if closed else "polyline"
        self.items.append(
            f'<{tag} points="{self._pts(points)}" fill="none" stroke="{color}" stroke-width="{sw}"{dash}/>'
        )
        if label:
            self.legend.append((label, color, dashed))

    def region(self, vertices, label=None, color="#f5b041"):
        self.items.append(
            f'<polygon points="{self._pts(vertices)}" fill="{color}" fill-opacity="0.25" stroke="{color}" '
            f'stroke-width="{_num(self.R / 400)}"/>'
        )
        if label:
            self.legend.append((label, color, False))

    def dot(self, z, label=None, color="#000000"):
        z = complex(z)
        self.items.append(f'<circle cx="{_num(z.real)}" cy="{_num(-z.imag)}" r="{_num(self.R / 90)}" fill="{color}"/>')
        if label:
            self.legend.append((label, color, False))

    def render(self):
        R = self.R
        vb = f"{_num(-R)} {_num(-R)} {_num(2 * R)} {_num(2 * R)}"
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="{vb}">',
            f'<rect x="{_num(-R)}" y="{_num(-R)}" width="{_num(2 * R)}" height="{_num(2 * R)}" fill="white"/>',
            f'<g stroke="#bbbbbb" stroke-width="{_num(R / 600)}">'
            f'<line x1="{_num(-R)}" y1="0" x2="{_num(R)}" y2="0"/>'
            f'<line x1="0" y1="{_num(-R)}" x2="0" y2="{_num(R)}"/></g>',
        ]
        out.extend(self.items)
        fs = R / 22
        if self.title:
            out.append(f'<text x="{_num(-R + fs / 2)}" y="{_num(-R + 1.3 * fs)}" font-size="{_num(fs)}" '
                       f'font-family="sans-serif">{_escape(self.title)}</text>')
        for i, (label, color, dashed) in enumerate(self.legend):
            y = -R + (i + 2.6) * 1.3 * fs
            x0 = R - 9 * fs
            dash = f' stroke-dasharray="{_num(fs / 3)},{_num(fs / 4)}"' if dashed else ""
            out.append(f'<line x1="{_num(x0)}" y1="{_num(y - fs / 3)}" x2="{_num(x0 + 1.5 * fs)}" '
                       f'y2="{_num(y - fs / 3)}" stroke="{color}" stroke-width="{_num(fs / 6)}"{dash}/>')
            out.append(f'<text x="{_num(x0 + 2 * fs)}" y="{_num(y)}" font-size="{_num(fs)}" '
                       f'font-family="sans-serif">{_escape(label)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _escape(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def ellipse_points(center, semi_axes, angle, count=361):
    t = np.linspace(0, 2 * math.pi, count)
    a, b = semi_axes
    local = a * np.cos(t) + 1j * b * np.sin(t)
    return center + np.exp(1j * angle) * local

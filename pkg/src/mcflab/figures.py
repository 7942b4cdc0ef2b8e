"""Planar (n = 2) partition pictures as SVG.

A cylinder B(k1..ks) is cut out of the domain by linear inequalities: the
cell of k1, and the cell of k_j pulled back through A(k_{j-1})...A(k1).
Polygons are clipped exactly in rationals, so areas are exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import UnsupportedDimension
from .projlin import IntMatrix, identity
from .systems import FibredSystem, Halfspace, Simplex

Point = tuple[Fraction, Fraction]


def clip(poly: list[Point], h: Sequence[Fraction]) -> list[Point]:
    """Sutherland-Hodgman against ``h0 + h1 x + h2 y >= 0``."""
    if not poly:
        return []
    val = lambda p: h[0] + h[1] * p[0] + h[2] * p[1]  # noqa: E731
    out = []
    for a, b in zip(poly, poly[1:] + poly[:1]):
        va, vb = val(a), val(b)
        if va >= 0:
            out.append(a)
        if (va >= 0) != (vb >= 0) and va != vb:
            t = va / (va - vb)
            out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    # drop repeated vertices
    dedup = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def area(poly: list[Point]) -> Fraction:
    if len(poly) < 3:
        return Fraction(0)
    s = sum(a[0] * b[1] - b[0] * a[1] for a, b in zip(poly, poly[1:] + poly[:1]))
    return abs(s) / 2


def centroid(poly: list[Point]) -> tuple[float, float]:
    a2 = sum(a[0] * b[1] - b[0] * a[1] for a, b in zip(poly, poly[1:] + poly[:1]))
    if a2 == 0:
        return (float(sum(p[0] for p in poly) / len(poly)), float(sum(p[1] for p in poly) / len(poly)))
    cx = sum((a[0] + b[0]) * (a[0] * b[1] - b[0] * a[1]) for a, b in zip(poly, poly[1:] + poly[:1]))
    cy = sum((a[1] + b[1]) * (a[0] * b[1] - b[0] * a[1]) for a, b in zip(poly, poly[1:] + poly[:1]))
    return float(cx / (3 * a2)), float(cy / (3 * a2))


def pull_back(h: Halfspace, m: IntMatrix) -> tuple[Fraction, ...]:
    """Coefficients of ``h(act(m, x)) * den >= 0``, i.e. the row vector h m."""
    return tuple(sum(h.coeffs[i] * m.rows[i][j] for i in range(m.size)) for j in range(m.size))


def domain_polygon(system: FibredSystem, frame: Fraction) -> list[Point]:
    dom = system.domain
    if isinstance(dom, Simplex):
        verts = [tuple(v) for v in dom.vertices]
        # counterclockwise order
        cx = sum(v[0] for v in verts) / 3
        cy = sum(v[1] for v in verts) / 3
        return sorted(verts, key=lambda v: math.atan2(float(v[1] - cy), float(v[0] - cx)))
    lo = [Fraction(a) for a in dom.lower]
    hi = [Fraction(b) if math.isfinite(b) else frame for b in dom.upper]
    return [(lo[0], lo[1]), (hi[0], lo[1]), (hi[0], hi[1]), (lo[0], hi[1])]


def cylinder_polygon(system: FibredSystem, digits: Sequence, base: list[Point]) -> list[Point]:
    poly = list(base)
    m = identity(system.n)
    for d in digits:
        for h in system.cell_halfspaces(d):
            poly = clip(poly, pull_back(h, m))
            if not poly:
                return []
        m = system.branch_matrix(d) @ m
    return poly


@dataclass
class Cell:
    digits: tuple
    label: str
    polygon: list[Point]

    @property
    def area(self) -> Fraction:
        return area(self.polygon)


@dataclass
class Figure:
    system: str
    depth: int
    frame: Fraction
    domain: list[Point]
    cells: list[Cell]
    tail: list[Point] = field(default_factory=list)
    tail_label: str = ""

    @property
    def domain_area(self) -> Fraction:
        return area(self.domain)

    def tiling_error(self) -> float:
        """Relative gap between the domain area and cells plus tail."""
        covered = sum((c.area for c in self.cells), Fraction(0)) + area(self.tail)
        return float(abs(covered - self.domain_area) / self.domain_area)

    def svg(self, size: int = 480, margin: int = 30) -> str:
        xs = [p[0] for p in self.domain]
        ys = [p[1] for p in self.domain]
        x0, x1 = float(min(xs)), float(max(xs))
        y0, y1 = float(min(ys)), float(max(ys))
        scale = (size - 2 * margin) / max(x1 - x0, y1 - y0)

        def pt(p) -> str:
            return f"{margin + (float(p[0]) - x0) * scale:.3f},{size - margin - (float(p[1]) - y0) * scale:.3f}"

        def poly(points, style) -> str:
            return f'<polygon points="{" ".join(pt(p) for p in points)}" {style}/>'

        font = max(8, 16 - 2 * self.depth)
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">',
            f"<title>{self.system}, depth {self.depth}</title>",
            '<defs><pattern id="tail" width="6" height="6" patternUnits="userSpaceOnUse">'
            '<path d="M0,6 L6,0" stroke="#999" stroke-width="0.7"/></pattern></defs>',
            poly(self.domain, 'fill="white" stroke="black" stroke-width="1.5"'),
        ]
        if len(self.tail) >= 3:
            out.append(poly(self.tail, 'fill="url(#tail)" stroke="#666" stroke-width="0.5" class="tail"'))
            cx, cy = centroid(self.tail)
            out.append(
                f'<text x="{pt((cx, cy)).split(",")[0]}" y="{pt((cx, cy)).split(",")[1]}" font-size="{font - 2}" '
                f'text-anchor="middle" fill="#444">{self.tail_label}</text>'
            )
        for c in self.cells:
            out.append(poly(c.polygon, f'fill="none" stroke="black" stroke-width="0.8" class="cell" data-label="{c.label}"'))
        for c in self.cells:
            x, y = pt(centroid(c.polygon)).split(",")
            out.append(f'<text x="{x}" y="{y}" font-size="{font}" text-anchor="middle" dominant-baseline="middle">{c.label}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _label(system: FibredSystem, digits: tuple) -> str:
    parts = [system.format_digit(d) for d in digits]
    if all(len(p) == 1 for p in parts):
        return "".join(parts)
    return ",".join(parts)


def partition(system: FibredSystem, depth: int = 1, bound: int = 2, frame: float = 4.0) -> Figure:
    """Cells of the ``depth``-time partition.  Unbounded alphabets are cut at
    ``bound``; at depth 1 the remaining digits form a hatched tail region."""
    if system.n != 2:
        raise UnsupportedDimension("figures are planar: n must be 2")
    if not 1 <= depth <= 3:
        raise ValueError("depth must be 1, 2 or 3")
    fr = Fraction(frame).limit_denominator(1000)
    base = domain_polygon(system, fr)
    alphabet = system.alphabet(bound)
    cells = []
    for digits in itertools.product(alphabet, repeat=depth):
        poly = cylinder_polygon(system, digits, base)
        if area(poly) > 0:
            cells.append(Cell(digits, _label(system, digits), poly))
    fig = Figure(system.name, depth, fr, base, cells)
    if depth == 1 and not system.finite_alphabet:
        tail_hs = system.tail_halfspaces(bound)
        if tail_hs:
            tail = list(base)
            for h in tail_hs:
                tail = clip(tail, h.coeffs)
            fig.tail = tail
            fig.tail_label = f"≥{bound + 1}" if system.digit_kind == "int" else "tail"
    return fig

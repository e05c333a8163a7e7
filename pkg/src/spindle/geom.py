"""Planar primitives for radius-r arc geometry.

Points are plain ``(x, y)`` pairs.  A disc-polygon is described by its cyclic,
counter-clockwise vertex list together with the common arc radius ``r``; every
edge is the shorter radius-``r`` arc joining consecutive vertices and bulging
outward.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ChordTooLong, DegeneratePair, OrientationError, PairTooFar

#: relative slack used for every closed-disc membership test
REL_TOL = 1e-12


class Point2(NamedTuple):
    x: float
    y: float


class CircleR(NamedTuple):
    center: Point2
    radius: float

    def contains(self, p, tol: float | None = None) -> bool:
        if tol is None:
            tol = REL_TOL * self.radius
        return math.hypot(p[0] - self.center[0], p[1] - self.center[1]) <= self.radius + tol


@dataclass(frozen=True)
class ArcEdge:
    """Shorter arc of ``circle`` from ``start`` to ``end`` (counter-clockwise)."""

    circle: CircleR
    start: Point2
    end: Point2
    orientation: str = "ccw"

    @property
    def central_angle(self) -> float:
        half = 0.5 * math.dist(self.start, self.end)
        return 2.0 * math.asin(min(1.0, half / self.circle.radius))

    @property
    def length(self) -> float:
        return self.circle.radius * self.central_angle

    def midpoint(self) -> Point2:
        """Point of the arc halfway between its endpoints."""
        cx, cy = self.circle.center
        mx = 0.5 * (self.start[0] + self.end[0]) - cx
        my = 0.5 * (self.start[1] + self.end[1]) - cy
        norm = math.hypot(mx, my)
        if norm == 0.0:
            # half circle: bulge is to the right of start -> end
            dx, dy = self.end[0] - self.start[0], self.end[1] - self.start[1]
            mx, my, norm = dy, -dx, math.hypot(dx, dy)
        s = self.circle.radius / norm
        return Point2(cx + mx * s, cy + my * s)


def circles_through_pair(a, b, r: float) -> tuple[CircleR, CircleR]:
    """The two radius-``r`` circles through ``a`` and ``b``.

    The first circle has its center to the left of the directed segment
    ``a -> b``, the second to the right.  When ``|a - b| = 2r`` they coincide.
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    dx, dy = bx - ax, by - ay
    d = math.hypot(dx, dy)
    if d == 0.0:
        raise DegeneratePair(f"coincident points {a!r}")
    if d > 2.0 * r * (1.0 + REL_TOL):
        raise PairTooFar(f"|a-b| = {d:.12g} exceeds 2r = {2.0 * r:.12g}")
    h = math.sqrt(max(0.0, r * r - 0.25 * d * d))
    mx, my = 0.5 * (ax + bx), 0.5 * (ay + by)
    # unit left normal of a -> b
    nx, ny = -dy / d, dx / d
    left = CircleR(Point2(mx + h * nx, my + h * ny), r)
    right = CircleR(Point2(mx - h * nx, my - h * ny), r)
    return left, right


def spindle_contains(a, b, r: float, p, tol: float | None = None) -> bool:
    """Closed membership of ``p`` in the r-spindle of ``a`` and ``b``."""
    if tol is None:
        tol = REL_TOL * r
    if a[0] == b[0] and a[1] == b[1]:
        return math.hypot(p[0] - a[0], p[1] - a[1]) <= tol
    left, right = circles_through_pair(a, b, r)
    return left.contains(p, tol) and right.contains(p, tol)


def shoelace_area(vertices) -> float:
    """Signed area of the straight polygon (positive for ccw order)."""
    v = np.asarray(vertices, dtype=float)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def segment_area(half_chord, r: float):
    """Area between a chord of half-length ``half_chord`` and its shorter radius-r arc."""
    d = np.asarray(half_chord, dtype=float)
    s = np.clip(d / r, 0.0, 1.0)
    near_full = s > 1.0 - 1e-9
    arcsin_form = r * r * np.arcsin(s) - d * np.sqrt(np.maximum(r * r - d * d, 0.0))
    theta = np.arcsin(s)
    angle_form = r * r * (theta - np.sin(theta) * np.cos(theta))
    out = np.where(near_full, angle_form, arcsin_form)
    return float(out) if out.ndim == 0 else out


def _half_chords(vertices, r: float) -> np.ndarray:
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2:
        raise ValueError("vertices must be an (m, 2) array")
    if len(v) < 2:
        return np.zeros(0)
    if len(v) == 2:
        d = 0.5 * math.dist(v[0], v[1])
        half = np.array([d, d])
    else:
        half = 0.5 * np.hypot(*(np.roll(v, -1, axis=0) - v).T)
    if np.any(half > r * (1.0 + REL_TOL)):
        raise ChordTooLong(f"a chord exceeds 2r = {2.0 * r:.12g} (max {2.0 * half.max():.12g})")
    return np.minimum(half, r)


def arc_polygon_area(vertices, r: float) -> float:
    """Area of the disc-polygon with the given ccw vertices and arc radius ``r``.

    Straight-polygon (shoelace) area plus one circular segment per edge; two
    vertices describe a spindle (two segments on the same chord).
    """
    half = _half_chords(vertices, r)
    if half.size == 0:
        return 0.0
    base = shoelace_area(vertices)
    if base < 0.0:
        raise OrientationError("disc-polygon vertices must be in counter-clockwise order")
    return base + float(np.sum(segment_area(half, r)))


def arc_polygon_perimeter(vertices, r: float) -> float:
    half = _half_chords(vertices, r)
    if half.size == 0:
        return 0.0
    return float(np.sum(2.0 * r * np.arcsin(half / r)))


def arc_edges(vertices: Sequence, r: float) -> list[ArcEdge]:
    """Arc edges of a ccw disc-polygon (each arc centered on the inner side)."""
    v = [Point2(float(p[0]), float(p[1])) for p in vertices]
    if len(v) < 2:
        return []
    edges = []
    for i, a in enumerate(v):
        b = v[(i + 1) % len(v)]
        inner, _ = circles_through_pair(a, b, r)
        edges.append(ArcEdge(inner, a, b))
    return edges

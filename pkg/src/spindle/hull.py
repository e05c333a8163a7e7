"""r-hulls (spindle convex hulls) of finite point sets.

The fast path computes the linear convex hull with the monotone chain and then
deletes every hull vertex that lies in the r-spindle of its two current
neighbours.  ``r_hull_oracle`` is the brute-force edge test: the pair (p, q)
spans an edge when every point lies in the radius-r disc through p and q whose
center is left of ``p -> q``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import EmptyInput, NotRFeasible
from .geom import REL_TOL, ArcEdge, arc_edges, arc_polygon_area, arc_polygon_perimeter


@dataclass(frozen=True)
class DiscPolygon:
    """Ccw vertex cycle of a disc-polygon with arc radius ``r``.

    ``indices`` point back into the generating point array.  The cycle starts
    at the lexicographically smallest vertex.
    """

    r: float
    vertices: np.ndarray
    indices: np.ndarray = field(default=None)

    @property
    def f0(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> list[ArcEdge]:
        return arc_edges(self.vertices, self.r)

    def area(self) -> float:
        return arc_polygon_area(self.vertices, self.r)

    def perimeter(self) -> float:
        return arc_polygon_perimeter(self.vertices, self.r)

    def is_valid_for(self, points, tol: float | None = None) -> bool:
        """Every point of ``points`` lies in the closed disc of every edge."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        tol = REL_TOL * self.r if tol is None else tol
        for e in self.edges:
            d = np.hypot(pts[:, 0] - e.circle.center[0], pts[:, 1] - e.circle.center[1])
            if np.any(d > self.r + tol):
                return False
        return True


def _canonical(r, pts, order) -> DiscPolygon:
    order = np.asarray(order, dtype=np.intp)
    if len(order) > 1:
        v = pts[order]
        start = int(np.lexsort((v[:, 1], v[:, 0]))[0])
        order = np.roll(order, -start)
    return DiscPolygon(float(r), pts[order].copy(), order)


def minimal_enclosing_circle(points, seed: int = 0) -> tuple[tuple[float, float], float]:
    """Welzl's smallest enclosing circle (randomized incremental form).

    The shuffle uses a fixed seed so the result is reproducible.
    """
    pts = [(float(x), float(y)) for x, y in np.asarray(points, dtype=float).reshape(-1, 2)]
    if not pts:
        raise EmptyInput("no points")
    random.Random(seed).shuffle(pts)
    c = None
    for i, p in enumerate(pts):
        if c is None or not _in_circle(c, p):
            c = _mec_one(pts[: i + 1], p)
    return c


def _in_circle(c, p) -> bool:
    (cx, cy), rad = c
    return math.hypot(p[0] - cx, p[1] - cy) <= rad * (1.0 + 1e-14) + 1e-15


def _mec_one(pts, p):
    c = (p, 0.0)
    for i, q in enumerate(pts):
        if not _in_circle(c, q):
            if c[1] == 0.0:
                c = _diametral(p, q)
            else:
                c = _mec_two(pts[: i + 1], p, q)
    return c


def _mec_two(pts, p, q):
    circ = _diametral(p, q)
    left = right = None
    px, py = p
    qx, qy = q
    for r_ in pts:
        if _in_circle(circ, r_):
            continue
        cross = (qx - px) * (r_[1] - py) - (qy - py) * (r_[0] - px)
        c = _circumcircle(p, q, r_)
        if c is None:
            continue
        cc = (qx - px) * (c[0][1] - py) - (qy - py) * (c[0][0] - px)
        if cross > 0.0 and (left is None or cc > _side(p, q, left[0])):
            left = c
        elif cross < 0.0 and (right is None or cc < _side(p, q, right[0])):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[1] <= right[1] else right


def _side(p, q, c):
    return (q[0] - p[0]) * (c[1] - p[1]) - (q[1] - p[1]) * (c[0] - p[0])


def _diametral(a, b):
    return ((0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])), 0.5 * math.hypot(a[0] - b[0], a[1] - b[1]))


def _circumcircle(a, b, c):
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
              + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
              + (cx * cx + cy * cy) * (bx - ax)) / d
    return (x, y), max(math.hypot(x - q[0], y - q[1]) for q in (a, b, c))


def _as_points(points) -> np.ndarray:
    pts = np.ascontiguousarray(np.asarray(points, dtype=float).reshape(-1, 2))
    if len(pts) == 0:
        raise EmptyInput("r-hull of an empty point set")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must have finite coordinates")
    return pts


def check_r_feasible(points, r: float) -> float:
    """Raise :class:`NotRFeasible` unless the points fit in a radius-r disc;
    returns the minimal enclosing radius."""
    _, rad = minimal_enclosing_circle(points)
    if rad > r * (1.0 + REL_TOL):
        raise NotRFeasible(rad, r)
    return rad


def r_hull(points, r: float, check_feasible: bool = True) -> DiscPolygon:
    """The r-hull conv_r(points) as a :class:`DiscPolygon`.

    ``check_feasible=False`` skips the enclosing-circle gate; callers that know
    the points lie in a body sliding freely in a radius-r circle may use it.
    """
    pts = _as_points(points)
    idx = _kernels.linear_hull(pts)
    if check_feasible and len(idx) > 1:
        check_r_feasible(pts[idx], r)
    kept = _kernels.prune_r_hull(pts, idx, float(r), REL_TOL * r)
    return _canonical(r, pts, kept)


def r_hull_oracle(points, r: float) -> DiscPolygon:
    """O(n^3) reference r-hull from the pairwise edge criterion.

    Among several valid successors on one edge circle the farthest is taken,
    so points in the interior of an arc are not vertices.  When all points
    lie on a single circle of radius exactly r the vertex set is not defined
    and the result of this routine is meaningless.
    """
    pts = _as_points(points)
    # exact duplicates collapse onto their first occurrence
    _, first = np.unique(pts, axis=0, return_index=True)
    uniq = np.sort(first)
    if len(uniq) > 1:
        check_r_feasible(pts[uniq], r)
    if len(uniq) == 1:
        return _canonical(r, pts, uniq)
    tol = REL_TOL * r
    p = pts[uniq]
    m = len(p)
    ii, jj = np.nonzero(~np.eye(m, dtype=bool))
    ax, ay, bx, by = p[ii, 0], p[ii, 1], p[jj, 0], p[jj, 1]
    dx, dy = bx - ax, by - ay
    d = np.sqrt(dx * dx + dy * dy)
    h = r * r - 0.25 * d * d
    h = np.sqrt(np.where(h > 0.0, h, 0.0))
    cx = 0.5 * (ax + bx) + h * (-dy / d)
    cy = 0.5 * (ay + by) + h * (dx / d)
    qx = p[None, :, 0] - cx[:, None]
    qy = p[None, :, 1] - cy[:, None]
    is_edge = np.all(np.sqrt(qx * qx + qy * qy) <= r + tol, axis=1)

    # successor = farthest edge endpoint, measured ccw around the edge circle
    succ = {}
    for e in np.flatnonzero(is_edge):
        i, j = int(ii[e]), int(jj[e])
        sweep = (math.atan2(by[e] - cy[e], bx[e] - cx[e])
                 - math.atan2(ay[e] - cy[e], ax[e] - cx[e])) % (2.0 * math.pi)
        if i not in succ or sweep > succ[i][1]:
            succ[i] = (j, sweep)
    if not succ:
        return _canonical(r, pts, uniq[:1])
    start = min(succ, key=lambda k: (p[k, 0], p[k, 1]))
    cycle, cur = [start], succ[start][0]
    while cur != start:
        if cur in cycle or cur not in succ:
            raise RuntimeError("brute-force edges do not close into a cycle")
        cycle.append(cur)
        cur = succ[cur][0]
    return _canonical(r, pts, uniq[cycle])


def f0(dp: DiscPolygon) -> int:
    return dp.f0


def missed_area(body, dp: DiscPolygon) -> float:
    """Area of ``body`` not covered by the disc-polygon."""
    return body.area() - dp.area()

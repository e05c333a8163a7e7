"""r-duals and intersections of equal-radius discs.

The r-dual of K is the set of centers x with K inside the radius-r disc about
x.  Its support function is ``r - h_K(theta + pi)``.  A finite intersection of
radius-r discs is the r-dual of the r-hull of the centers, so it is built from
that hull: its vertices are the centers of the hull's edge circles and its
arcs are centered at the hull vertices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .asymptotics import boundary_integral
from .body import ConvexBody, DiscBody, _grid
from .errors import DualInfeasible, EmptyIntersection, NotRFeasible
from .geom import REL_TOL, arc_polygon_area, arc_polygon_perimeter
from .hull import DiscPolygon, _canonical, r_hull

IDENTITY_GRID = 1024


class DualBody(ConvexBody):
    kind = "dual"

    def __init__(self, base: ConvexBody, r: float):
        self.base = base
        self.r = float(r)
        super().__init__()

    @property
    def spec(self):
        return f"dual({self.base.spec};r={self.r:g})"

    def support(self, theta):
        return self.r - self.base.support(np.add(theta, math.pi))

    def support_d1(self, theta):
        return -self.base.support_d1(np.add(theta, math.pi))

    def support_d2(self, theta):
        return -self.base.support_d2(np.add(theta, math.pi))

    def radius_of_curvature(self, theta):
        return self.r - self.base.radius_of_curvature(np.add(theta, math.pi))

    def contains_points(self, xy):
        if isinstance(self.base, DiscBody):
            xy = np.asarray(xy, dtype=float).reshape(-1, 2)
            return xy[:, 0] ** 2 + xy[:, 1] ** 2 <= (self.r - self.base.radius) ** 2
        return super().contains_points(xy)

    def scaled(self, factor):
        return DualBody(self.base.scaled(factor), self.r * factor)


def r_dual(body: ConvexBody, r: float) -> DualBody:
    """The r-dual body; requires ``r * kappa_m > 1`` (that is ``r > r_M``)."""
    r_M = body.rolling_radii()[1]
    if not r > r_M:
        raise DualInfeasible(
            f"r-dual of {body.spec} needs r > r_M = {r_M:.6g} (r*kappa_m > 1), got r = {r:g}")
    return DualBody(body, r)


def _farthest_distance(body, points, iters: int = 60) -> np.ndarray:
    """For each point, the largest distance to the body (vectorized golden section)."""
    th = _grid(4096)
    bpts = body.boundary_points(th)
    d2 = ((points[:, None, :] - bpts[None, :, :]) ** 2).sum(-1)
    k = np.argmax(d2, axis=1)
    step = 2.0 * math.pi / len(th)
    lo, hi = th[k] - step, th[k] + step
    invphi = (math.sqrt(5.0) - 1.0) / 2.0

    def f(s):
        x = body.boundary_points(s)
        return -np.hypot(x[:, 0] - points[:, 0], x[:, 1] - points[:, 1])

    a = hi - invphi * (hi - lo)
    b = lo + invphi * (hi - lo)
    fa, fb = f(a), f(b)
    for _ in range(iters):
        left = fa < fb
        hi = np.where(left, b, hi)
        lo = np.where(left, lo, a)
        a_new = hi - invphi * (hi - lo)
        b_new = lo + invphi * (hi - lo)
        a, b = a_new, b_new
        fa, fb = f(a), f(b)
    return np.maximum(-np.minimum(fa, fb), np.sqrt(d2[np.arange(len(points)), k]))


def _curve_radius_fd(body, theta, h: float = 1e-3) -> np.ndarray:
    """Radius of curvature as the speed ``|dx/dtheta|`` of the boundary curve,
    by Richardson-extrapolated central differences."""
    def speed(step):
        d = (body.boundary_points(theta + step) - body.boundary_points(theta - step)) / (2.0 * step)
        return np.hypot(d[:, 0], d[:, 1])

    return (4.0 * speed(0.5 * h) - speed(h)) / 3.0


def dual_identity_report(body: ConvexBody, r: float) -> dict:
    """Residuals of the four r-dual identities.

    ``support``: the dual boundary point with normal v is at distance exactly r
    from the farthest point of K (and the support functions add to r);
    ``curvature``: radii of curvature at opposite normals add to r, the dual's
    measured from its boundary curve; ``perimeter`` and ``area`` compare
    independent quadratures.
    """
    dual = r_dual(body, r)
    th = _grid(IDENTITY_GRID)
    xs = dual.boundary_points(th)
    support = max(
        float(np.max(np.abs(_farthest_distance(body, xs) - r))),
        float(np.max(np.abs(body.support(th) + dual.support(th + math.pi) - r))),
    )
    curv = float(np.max(np.abs(body.radius_of_curvature(th) + _curve_radius_fd(dual, th + math.pi) - r)))
    perim = abs(body.perimeter() + dual.perimeter() - 2.0 * math.pi * r)
    area = abs(dual.area() - (body.area() - r * body.perimeter() + r * r * math.pi))
    return {"support": support, "curvature": curv, "perimeter": perim, "area": area}


def constant_width(body: ConvexBody, grid: int = IDENTITY_GRID) -> float | None:
    """The width if the body has constant width (to 1e-9), else ``None``."""
    w = body.width(_grid(grid))
    return float(w.mean()) if np.ptp(w) <= 1e-9 * w.mean() else None


def constant_width_residuals(body: ConvexBody, r: float, exponents=(1 / 3, 2 / 3, 2.0)) -> dict:
    """For a body of constant width r, residuals of
    ``int (kappa - 1/r)^p ds = r^(1-2p) int (kappa - 1/r)^(1-p) ds``."""
    w = constant_width(body)
    if w is None or abs(w - r) > 1e-9 * r:
        raise DualInfeasible(f"{body.spec} is not of constant width r = {r:g}")
    out = {}
    for p in exponents:
        lhs = boundary_integral(body, r, p)
        rhs = r ** (1.0 - 2.0 * p) * boundary_integral(body, r, 1.0 - p)
        out[p] = abs(lhs - rhs)
    return out


@dataclass(frozen=True)
class DiscIntersection:
    """Intersection of the radius-r discs about ``centers``.

    ``vertices`` is the ccw vertex cycle; the arc between ``vertices[j-1]`` and
    ``vertices[j]`` is centered at ``hull.vertices[j]``.
    """

    centers: np.ndarray
    r: float
    hull: DiscPolygon
    vertices: np.ndarray

    @property
    def f0(self) -> int:
        return self.hull.f0

    def area(self) -> float:
        if len(self.vertices) == 0:
            return math.pi * self.r ** 2
        return arc_polygon_area(self.vertices, self.r)

    def perimeter(self) -> float:
        if len(self.vertices) == 0:
            return 2.0 * math.pi * self.r
        return arc_polygon_perimeter(self.vertices, self.r)

    def contains_points(self, xy, tol: float | None = None) -> np.ndarray:
        xy = np.asarray(xy, dtype=float).reshape(-1, 2)
        tol = REL_TOL * self.r if tol is None else tol
        w = self.hull.vertices
        d = np.hypot(xy[:, None, 0] - w[None, :, 0], xy[:, None, 1] - w[None, :, 1])
        return np.all(d <= self.r + tol, axis=1)


def intersection_from_hull(centers, hull: DiscPolygon) -> DiscIntersection:
    r = hull.r
    w = hull.vertices
    m = len(w)
    if m == 1:
        verts = np.zeros((0, 2))
    else:
        # vertex j is the center of the hull edge circle through w[j], w[j+1],
        # on the left of w[j] -> w[j+1]
        nxt = np.roll(w, -1, axis=0)
        chord = nxt - w
        d = np.hypot(chord[:, 0], chord[:, 1])
        h = np.sqrt(np.maximum(r * r - 0.25 * d * d, 0.0))
        normal = np.column_stack([-chord[:, 1], chord[:, 0]]) / d[:, None]
        verts = 0.5 * (w + nxt) + h[:, None] * normal
    return DiscIntersection(np.asarray(centers, dtype=float).reshape(-1, 2), float(r), hull, verts)


def disc_intersection(centers, r: float) -> DiscIntersection:
    try:
        hull = r_hull(centers, r)
    except NotRFeasible as exc:
        raise EmptyIntersection(
            f"discs of radius {r:g} have empty intersection "
            f"(centers need enclosing radius {exc.enclosing_radius:.12g})") from exc
    return intersection_from_hull(centers, hull)


def intersection_arc_count(centers, r: float, candidates=None) -> int:
    """Number of boundary arcs of the disc intersection, counted directly.

    For each disc the part of its circle lying in every other disc is an
    angular interval; discs with a non-empty interval contribute one arc.
    Discs whose centers are not linear-hull vertices are redundant, so only
    those are examined unless ``candidates`` is given.
    """
    c = np.ascontiguousarray(np.asarray(centers, dtype=float).reshape(-1, 2))
    if candidates is None:
        candidates = _kernels.linear_hull(c)
    p = c[np.asarray(candidates, dtype=np.intp)]
    m = len(p)
    if m == 1:
        return 1
    dx = p[None, :, 0] - p[:, None, 0]
    dy = p[None, :, 1] - p[:, None, 1]
    d = np.hypot(dx, dy)
    alpha = np.arctan2(dy, dx)
    beta = np.arccos(np.clip(d / (2.0 * r), -1.0, 1.0))
    np.fill_diagonal(d, 1.0)
    ref = np.argmax(d > 0, axis=1)
    rel = np.remainder(alpha - alpha[np.arange(m), ref][:, None] + math.pi, 2.0 * math.pi) - math.pi
    lo = np.where(d > 0, rel - beta, -np.inf)
    hi = np.where(d > 0, rel + beta, np.inf)
    np.fill_diagonal(lo, -np.inf)
    np.fill_diagonal(hi, np.inf)
    span = hi.min(axis=1) - lo.max(axis=1)
    return int(np.count_nonzero(span > 1e-13))


def circumscribed_sample(body: ConvexBody, r: float, n: int, rng: np.random.Generator, dual=None):
    """One draw of the circumscribed model: ``n`` uniform centers in the r-dual.

    Returns the intersection and a dict of observables (``f0``, ``area_diff``,
    ``perim_diff``, ``arc_count``, ``contains_body``).
    """
    if n < 1:
        raise ValueError("need at least one center")
    if dual is None:
        dual = r_dual(body, r)
    centers = dual.sample_uniform(rng, n)
    lin = _kernels.linear_hull(centers)
    kept = _kernels.prune_r_hull(centers, lin, float(r), REL_TOL * r)
    inter = intersection_from_hull(centers, _canonical(r, centers, kept))
    probe = body.boundary_points(_grid(64))
    lin_pts = centers[lin]
    dist = np.hypot(probe[:, None, 0] - lin_pts[None, :, 0], probe[:, None, 1] - lin_pts[None, :, 1])
    obs = {
        "f0": inter.f0,
        "area_diff": inter.area() - body.area(),
        "perim_diff": inter.perimeter() - body.perimeter(),
        "arc_count": intersection_arc_count(centers, r, lin),
        "contains_body": bool(np.all(dist <= r * (1.0 + 1e-9))),
    }
    return inter, obs

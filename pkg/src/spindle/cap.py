"""Disc-caps ``D(u, t)``: the part of a body outside a radius-r circle.

The cutting circle of the cap with vertex ``x(theta)`` and height ``t`` has
center ``x(theta) - (r + t) u(theta)``.  Areas use Green's theorem along the
body arc and the circle arc, with the vertex as origin so that tiny caps keep
their relative precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError, NoIntersection, OutsideBody, RootBracketFailure, SingularJacobian
from .geom import CircleR, Point2, circles_through_pair
from .quadrature import gauss_legendre_fixed

TWO_PI = 2.0 * math.pi
ROOT_GRID = 2048


@dataclass(frozen=True)
class ReparamPoint:
    """Coordinates ``(theta, t, phi1, phi2)`` of a pair of points on a cutting circle."""

    theta: float
    t: float
    phi1: float
    phi2: float


def _u(theta):
    return np.array([math.cos(theta), math.sin(theta)])


def _center(body, theta: float, t: float, r: float) -> np.ndarray:
    return np.asarray(body.boundary_point(theta)) - (r + t) * _u(theta)


def cap_cutting_circle(body, theta: float, t: float, r: float = 1.0) -> CircleR:
    if t < 0:
        raise DomainError(f"cap height must be >= 0, got {t!r}")
    c = _center(body, theta, t, r)
    return CircleR(Point2(float(c[0]), float(c[1])), float(r))


def _distance_to_body(body, c) -> float:
    """Euclidean distance from ``c`` to the body (0 inside)."""
    th = np.arange(ROOT_GRID) * (TWO_PI / ROOT_GRID)
    gap = c[0] * np.cos(th) + c[1] * np.sin(th) - body.support(th)
    k = int(np.argmax(gap))
    step = TWO_PI / ROOT_GRID
    res = minimize_scalar(
        lambda s: -(c[0] * math.cos(s) + c[1] * math.sin(s) - float(body.support(s))),
        bounds=(th[k] - step, th[k] + step), method="bounded", options={"xatol": 1e-12})
    return max(0.0, float(gap[k]), -float(res.fun))


def t_star(body, theta: float, r: float = 1.0, tol: float = 1e-10) -> float:
    """Largest height for which the cutting disc still meets the body."""
    lo, hi = 0.0, float(body.width(theta))
    hi *= 1.0 + 1e-9
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _distance_to_body(body, _center(body, theta, mid, r)) <= r:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _crossings(body, theta, c, r, grid):
    """Normal angles of the two boundary points where the cutting circle enters
    and leaves the body, bracketing ``theta``."""
    def g(phi):
        x = body.boundary_points(phi)
        return (x[..., 0] - c[0]) ** 2 + (x[..., 1] - c[1]) ** 2 - r * r

    step = TWO_PI / grid
    offsets = np.arange(1, grid // 2 + 1) * step
    ends = []
    for sign in (1.0, -1.0):
        vals = g(theta + sign * offsets)
        hit = np.flatnonzero(vals <= 0.0)
        if hit.size == 0:
            return None
        k = int(hit[0])
        a = theta + sign * (offsets[k - 1] if k > 0 else 0.0)
        b = theta + sign * offsets[k]
        lo, hi = min(a, b), max(a, b)
        ends.append(brentq(lambda p: float(g(p)), lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps))
    return ends[1], ends[0]


def _body_arc_green(body, x0, phi_lo, phi_hi) -> float:
    """``1/2 \\oint X x dX`` along the boundary from ``phi_lo`` to ``phi_hi`` (origin ``x0``)."""
    def integrand(phi):
        x = body.boundary_points(phi)
        rho = body.radius_of_curvature(phi)
        X, Y = x[:, 0] - x0[0], x[:, 1] - x0[1]
        # dx/dphi = rho * (-sin, cos)
        return 0.5 * rho * (X * np.cos(phi) + Y * np.sin(phi))

    panels = 1
    prev = gauss_legendre_fixed(integrand, phi_lo, phi_hi, panels)
    while panels < 4096:
        panels *= 2
        cur = gauss_legendre_fixed(integrand, phi_lo, phi_hi, panels)
        if abs(cur - prev) <= 1e-13 * abs(cur) + 1e-300:
            return cur
        prev = cur
    return cur


def cap_measures(body, theta: float, t: float, r: float = 1.0) -> tuple[float, float]:
    """Area ``A(u, t)`` and inner arc length ``l(u, t)`` of the cap ``D(u, t)``."""
    if not t > 0:
        raise NoIntersection(f"cap height must be positive, got {t!r}")
    c = _center(body, theta, t, r)
    ends = _crossings(body, theta, c, r, ROOT_GRID)
    if ends is None:
        ends = _crossings(body, theta, c, r, 2 * ROOT_GRID)
    if ends is None:
        ts = t_star(body, theta, r)
        if t >= ts:
            raise NoIntersection(f"t = {t:g} exceeds t*(theta) = {ts:.10g}")
        raise RootBracketFailure(f"no sign change of the circle/boundary gap at theta={theta:g}, t={t:g}")
    phi_lo, phi_hi = ends
    x0 = np.asarray(body.boundary_point(theta))
    p_lo = np.asarray(body.boundary_point(phi_lo))
    p_hi = np.asarray(body.boundary_point(phi_hi))
    a_lo = math.remainder(math.atan2(p_lo[1] - c[1], p_lo[0] - c[0]) - theta, TWO_PI)
    a_hi = math.remainder(math.atan2(p_hi[1] - c[1], p_hi[0] - c[0]) - theta, TWO_PI)
    sweep = a_lo - a_hi  # clockwise along the circle, through direction theta
    psi_lo, psi_hi = theta + a_lo, theta + a_hi
    w = c - x0
    circle_part = 0.5 * (r * r * sweep
                         + r * (w[0] * (math.sin(psi_lo) - math.sin(psi_hi))
                                - w[1] * (math.cos(psi_lo) - math.cos(psi_hi))))
    area = _body_arc_green(body, x0, phi_lo, phi_hi) + circle_part
    return area, r * (a_hi - a_lo)


def cap_measures_circle(t: float) -> tuple[float, float]:
    """Closed forms for the unit disc cut by unit circles (height ``0 <= t <= 2``).

    ``A = t sqrt(1 - t^2/4) + 2 arcsin(t/2)``, ``l = 2 arcsin sqrt(1 - t^2/4)``.
    """
    if not 0.0 <= t <= 2.0:
        raise DomainError(f"circle cap height must lie in [0, 2], got {t!r}")
    s = math.sqrt(max(0.0, 1.0 - 0.25 * t * t))
    return t * s + 2.0 * math.asin(0.5 * t), 2.0 * math.asin(s)


def cap_measures_circle_printed(t: float) -> tuple[float, float]:
    """The same closed forms with coefficient ``t^2/2`` under the roots (``0 <= t <= sqrt 2``).

    Kept for comparison only: it disagrees with direct lens geometry.
    """
    if not 0.0 <= t <= math.sqrt(2.0):
        raise DomainError(f"height must lie in [0, sqrt(2)], got {t!r}")
    s = math.sqrt(max(0.0, 1.0 - 0.5 * t * t))
    return t * s + 2.0 * math.asin(0.5 * t), 2.0 * math.asin(s)


def cap_limit_constants(body, theta: float, r: float = 1.0) -> tuple[float, float]:
    """Small-height limits of ``l t^{-1/2}`` and ``A t^{-3/2}`` at the vertex ``x(theta)``."""
    excess = float(body.curvature(theta)) - 1.0 / r
    if excess <= 0:
        raise DomainError(f"curvature {excess + 1.0 / r:g} at theta={theta:g} does not exceed 1/r")
    k = math.sqrt(2.0 / excess)
    return 2.0 * k, 4.0 / 3.0 * k


# -- reparametrization of point pairs -------------------------------------------

def _phi_points(body, theta, t, phi1, phi2, r):
    c = _center(body, theta, t, r)
    return (c + r * np.array([math.cos(phi1), math.sin(phi1)]),
            c + r * np.array([math.cos(phi2), math.sin(phi2)]))


def phi_map(body, rp: ReparamPoint, r: float = 1.0) -> tuple[Point2, Point2]:
    """The two points at angles ``phi1``, ``phi2`` on the cutting circle of ``D(u, t)``."""
    x1, x2 = _phi_points(body, rp.theta, rp.t, rp.phi1, rp.phi2, r)
    inside = body.contains_points(np.vstack([x1, x2]))
    if not inside.all():
        raise OutsideBody(f"reparametrized point outside {body.spec}: {rp}")
    return Point2(*map(float, x1)), Point2(*map(float, x2))


def phi_jacobian_closed(body, rp: ReparamPoint, r: float = 1.0) -> float:
    """``|J| = |r + t - 1/kappa(x_u)| r^2 |u1 x u2|``."""
    rho = float(body.radius_of_curvature(rp.theta))
    return abs(r + rp.t - rho) * r * r * abs(math.sin(rp.phi2 - rp.phi1))


def phi_jacobian_fd(body, rp: ReparamPoint, r: float = 1.0, step: float = 1e-6) -> float:
    """Central-difference determinant of ``(theta, t, phi1, phi2) -> (x1, x2)``."""
    base = np.array([rp.theta, rp.t, rp.phi1, rp.phi2], dtype=float)

    def f(v):
        return np.concatenate(_phi_points(body, v[0], v[1], v[2], v[3], r))

    jac = np.empty((4, 4))
    for j in range(4):
        e = np.zeros(4)
        e[j] = step
        jac[:, j] = (f(base + e) - f(base - e)) / (2.0 * step)
    return abs(float(np.linalg.det(jac)))


def check_jacobian(body, rp: ReparamPoint, r: float = 1.0, step: float = 1e-6) -> float:
    """Relative gap between the closed-form and finite-difference Jacobians."""
    if abs(math.sin(rp.phi2 - rp.phi1)) < 1e-12:
        raise SingularJacobian(f"|u1 x u2| < 1e-12 at {rp}")
    closed = phi_jacobian_closed(body, rp, r)
    return abs(phi_jacobian_fd(body, rp, r, step) - closed) / closed


def cap_vertex(body, center, r: float = 1.0) -> tuple[float, float]:
    """Vertex angle and height of the cap cut by the radius-r circle about ``center``.

    The vertex is the boundary point farthest from the center; its outer
    normal points away from the center.
    """
    c = np.asarray(center, dtype=float)
    th = np.arange(ROOT_GRID) * (TWO_PI / ROOT_GRID)
    pts = body.boundary_points(th)
    d2 = (pts[:, 0] - c[0]) ** 2 + (pts[:, 1] - c[1]) ** 2
    k = int(np.argmax(d2))
    step = TWO_PI / ROOT_GRID

    def neg_dist(s):
        x = body.boundary_point(s)
        return -math.hypot(x[0] - c[0], x[1] - c[1])

    res = minimize_scalar(neg_dist, bounds=(th[k] - step, th[k] + step), method="bounded",
                          options={"xatol": 1e-13})
    theta = float(res.x) % TWO_PI
    return theta, -float(res.fun) - r


def caps_of_pair(body, x1, x2, r: float = 1.0):
    """``(D_minus, D_plus)`` as ``(theta, t, area)`` triples, smaller area first."""
    caps = []
    for circ in circles_through_pair(x1, x2, r):
        theta, t = cap_vertex(body, circ.center, r)
        caps.append((theta, t, cap_measures(body, theta, t, r)[0]))
    caps.sort(key=lambda c: c[2])
    return caps[0], caps[1]

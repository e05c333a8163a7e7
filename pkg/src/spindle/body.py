"""Smooth convex discs described by their support function.

A body is parametrized by the outer-normal angle ``theta``: the boundary point
with outer normal ``u(theta) = (cos theta, sin theta)`` is

    x(theta) = h(theta) u(theta) + h'(theta) u'(theta)

and ``rho = h + h''`` is the radius of curvature there, so ``ds = rho dtheta``.
"""
from __future__ import annotations

import math
import re
from functools import cached_property

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import BodySpecError, Infeasible, InvalidBody
from .geom import Point2
from .quadrature import integrate_periodic

TWO_PI = 2.0 * math.pi
VALIDATION_GRID = 4096
CONTAINS_GRID = 1024
CONTAINS_TOL = 1e-12
_POLY_GRID = 4096


def _grid(m: int) -> np.ndarray:
    return np.arange(m) * (TWO_PI / m)


class ConvexBody:
    """Base class; subclasses implement ``support`` and its two derivatives."""

    kind = "generic"

    def __init__(self):
        self._check_smooth()

    # -- support function -------------------------------------------------
    def support(self, theta):
        raise NotImplementedError

    def support_d1(self, theta):
        raise NotImplementedError

    def support_d2(self, theta):
        raise NotImplementedError

    def radius_of_curvature(self, theta):
        return self.support(theta) + self.support_d2(theta)

    def curvature(self, theta):
        return 1.0 / self.radius_of_curvature(theta)

    def width(self, theta):
        return self.support(theta) + self.support(np.add(theta, math.pi))

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec}>"

    def _check_smooth(self):
        th = _grid(VALIDATION_GRID)
        rho = self.radius_of_curvature(th)
        if not np.all(np.isfinite(rho)) or rho.min() <= 0.0:
            k = int(np.argmin(rho))
            raise InvalidBody(
                f"{self.spec}: boundary is not C^2_+ (radius of curvature "
                f"{rho[k]:.6g} <= 0 at theta={th[k]:.6g})")
        h = self.support(th)
        if h.min() <= 0.0:
            raise InvalidBody(f"{self.spec}: origin is not interior (min support {h.min():.6g})")

    # -- boundary -----------------------------------------------------------
    def boundary_points(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        c, s = np.cos(theta), np.sin(theta)
        h, dh = self.support(theta), self.support_d1(theta)
        return np.stack([h * c - dh * s, h * s + dh * c], axis=-1)

    def boundary_point(self, theta: float) -> Point2:
        x, y = self.boundary_points(float(theta))
        return Point2(float(x), float(y))

    # -- global measures ----------------------------------------------------
    @cached_property
    def _rolling(self):
        th = _grid(VALIDATION_GRID)
        rho = self.radius_of_curvature(th)
        step = TWO_PI / VALIDATION_GRID

        def lowest(f, k):
            res = minimize_scalar(f, bounds=(th[k] - step, th[k] + step), method="bounded",
                                  options={"xatol": 1e-10})
            return float(res.fun)

        k_lo, k_hi = int(np.argmin(rho)), int(np.argmax(rho))
        r_m = min(float(rho[k_lo]), lowest(lambda t: float(self.radius_of_curvature(t)), k_lo))
        r_M = max(float(rho[k_hi]), -lowest(lambda t: -float(self.radius_of_curvature(t)), k_hi))
        return r_m, r_M

    def rolling_radii(self) -> tuple[float, float]:
        """``(r_m, r_M)``: min and max radius of curvature (1/kappa_M, 1/kappa_m)."""
        return self._rolling

    @property
    def kappa_min(self) -> float:
        return 1.0 / self._rolling[1]

    @property
    def kappa_max(self) -> float:
        return 1.0 / self._rolling[0]

    @cached_property
    def _area(self) -> float:
        return 0.5 * integrate_periodic(lambda t: self.support(t) * self.radius_of_curvature(t))

    @cached_property
    def _perimeter(self) -> float:
        return integrate_periodic(self.radius_of_curvature)

    def area(self) -> float:
        return self._area

    def perimeter(self) -> float:
        return self._perimeter

    def require_sliding_radius_below(self, r: float, what: str = "inscribed model"):
        """Reject ``r <= r_M`` (the body must slide freely in a radius-r circle)."""
        r_M = self.rolling_radii()[1]
        if not r > r_M:
            raise Infeasible(
                f"{what} requires r > r_M: {self.spec} has r_M = {r_M:.6g} "
                f"(kappa_m = {1.0 / r_M:.6g}) but r = {r:g}")

    # -- containment --------------------------------------------------------
    def _support_gap(self, theta, p):
        return self.support(theta) - (p[0] * np.cos(theta) + p[1] * np.sin(theta))

    def contains(self, p, tol: float = CONTAINS_TOL) -> bool:
        """Exact support-inequality test: ``min_theta h(theta) - <p, u> >= -tol``."""
        p = (float(p[0]), float(p[1]))
        th = _grid(CONTAINS_GRID)
        g = self._support_gap(th, p)
        step = TWO_PI / CONTAINS_GRID
        # refine around the deepest few local minima of the sampled gap
        local = np.flatnonzero((g <= np.roll(g, 1)) & (g <= np.roll(g, -1)))
        best = float(g.min())
        for k in local[np.argsort(g[local])][:3]:
            res = minimize_scalar(lambda t: float(self._support_gap(t, p)),
                                  bounds=(th[k] - step, th[k] + step), method="bounded",
                                  options={"xatol": 1e-12})
            best = min(best, float(res.fun))
        return best >= -tol

    @cached_property
    def _polygon(self):
        th = _grid(_POLY_GRID)
        pts = self.boundary_points(th)
        psi = np.unwrap(np.arctan2(pts[:, 1], pts[:, 0]))
        psi_ext = np.append(psi, psi[0] + TWO_PI)
        return th, pts, psi_ext, self.support(th)

    def contains_points(self, xy) -> np.ndarray:
        """Vectorized closed containment test for an ``(m, 2)`` array.

        Bracketed between the inscribed boundary polygon and the circumscribed
        tangent polygon on a fine normal-angle grid; only points in the thin band
        between them fall back to the exact support inequality.
        """
        xy = np.asarray(xy, dtype=float).reshape(-1, 2)
        th, pts, psi_ext, h = self._polygon
        m = len(th)
        psi = np.arctan2(xy[:, 1], xy[:, 0])
        psi = psi_ext[0] + np.mod(psi - psi_ext[0], TWO_PI)
        k = np.clip(np.searchsorted(psi_ext, psi, side="right") - 1, 0, m - 1)
        k1 = (k + 1) % m
        p0, p1 = pts[k], pts[k1]
        cross = ((p1[:, 0] - p0[:, 0]) * (xy[:, 1] - p0[:, 1])
                 - (p1[:, 1] - p0[:, 1]) * (xy[:, 0] - p0[:, 0]))
        inside = cross >= 0.0
        c0, s0, c1, s1 = np.cos(th[k]), np.sin(th[k]), np.cos(th[k1]), np.sin(th[k1])
        within_tangents = ((xy[:, 0] * c0 + xy[:, 1] * s0 <= h[k] + CONTAINS_TOL)
                           & (xy[:, 0] * c1 + xy[:, 1] * s1 <= h[k1] + CONTAINS_TOL))
        band = np.flatnonzero(~inside & within_tangents)
        step = TWO_PI / m
        for i in band:
            p = xy[i]
            res = minimize_scalar(lambda t: float(self._support_gap(t, p)),
                                  bounds=(th[k[i]] - step, th[k[i]] + 2 * step),
                                  method="bounded", options={"xatol": 1e-13})
            inside[i] = res.fun >= -CONTAINS_TOL
        return inside

    # -- sampling -----------------------------------------------------------
    def bounding_box(self) -> tuple[float, float, float, float]:
        h = self.support(np.array([0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi]))
        return -float(h[2]), float(h[0]), -float(h[3]), float(h[1])

    def sample_uniform(self, rng: np.random.Generator, count: int, return_proposals: bool = False):
        """``count`` i.i.d. uniform points of the body by rejection from the bounding box."""
        x0, x1, y0, y1 = self.bounding_box()
        lo = np.array([x0, y0])
        span = np.array([x1 - x0, y1 - y0])
        rate = min(1.0, self.area() / float(span[0] * span[1]))
        chunks, have, proposals = [], 0, 0
        while have < count:
            need = count - have
            m = int(need / rate * 1.02) + 16
            prop = lo + span * rng.random((m, 2))
            hit = np.flatnonzero(self.contains_points(prop))
            # proposals past the last one needed are never looked at
            proposals += int(hit[need - 1]) + 1 if len(hit) >= need else m
            chunks.append(prop[hit[:need]])
            have += min(need, len(hit))
        out = np.concatenate(chunks) if chunks else np.zeros((0, 2))
        if return_proposals:
            return out, proposals
        return out

    # -- transforms ---------------------------------------------------------
    def scaled(self, factor: float) -> "ConvexBody":
        raise NotImplementedError


class DiscBody(ConvexBody):
    kind = "disc"

    def __init__(self, radius: float):
        if not radius > 0:
            raise InvalidBody(f"disc radius must be positive, got {radius!r}")
        self.radius = float(radius)
        super().__init__()

    @property
    def spec(self):
        return f"disc:{self.radius:g}"

    def support(self, theta):
        return np.full_like(np.asarray(theta, dtype=float), self.radius)

    def support_d1(self, theta):
        return np.zeros_like(np.asarray(theta, dtype=float))

    support_d2 = support_d1

    def contains_points(self, xy):
        xy = np.asarray(xy, dtype=float).reshape(-1, 2)
        return xy[:, 0] ** 2 + xy[:, 1] ** 2 <= self.radius ** 2

    def scaled(self, factor):
        return DiscBody(self.radius * factor)


class EllipseBody(ConvexBody):
    """Axis-aligned ellipse centered at the origin with semi-axes ``a`` (x) and ``b`` (y)."""

    kind = "ellipse"

    def __init__(self, a: float, b: float):
        if not (a > 0 and b > 0):
            raise InvalidBody(f"ellipse semi-axes must be positive, got {a!r}, {b!r}")
        self.a, self.b = float(a), float(b)
        super().__init__()

    @property
    def spec(self):
        return f"ellipse:{self.a:g},{self.b:g}"

    def _s(self, theta):
        theta = np.asarray(theta, dtype=float)
        return (self.a * np.cos(theta)) ** 2 + (self.b * np.sin(theta)) ** 2

    def support(self, theta):
        return np.sqrt(self._s(theta))

    def support_d1(self, theta):
        theta = np.asarray(theta, dtype=float)
        return 0.5 * (self.b ** 2 - self.a ** 2) * np.sin(2 * theta) / self.support(theta)

    def support_d2(self, theta):
        return self.radius_of_curvature(theta) - self.support(theta)

    def radius_of_curvature(self, theta):
        return (self.a * self.b) ** 2 / self._s(theta) ** 1.5

    def contains_points(self, xy):
        xy = np.asarray(xy, dtype=float).reshape(-1, 2)
        return (xy[:, 0] / self.a) ** 2 + (xy[:, 1] / self.b) ** 2 <= 1.0

    def scaled(self, factor):
        return EllipseBody(self.a * factor, self.b * factor)


class TrigBody(ConvexBody):
    """Support function ``a0 + sum_k (a_k cos k theta + b_k sin k theta)``."""

    kind = "trig"

    def __init__(self, a0: float, a=(), b=(), label: str | None = None):
        self.a0 = float(a0)
        self.a = np.asarray(a, dtype=float).ravel()
        self.b = np.asarray(b, dtype=float).ravel()
        if self.a.shape != self.b.shape:
            raise InvalidBody("trig body needs matching cosine and sine coefficient lists")
        self.k = np.arange(1, len(self.a) + 1, dtype=float)
        self._label = label
        super().__init__()

    @property
    def spec(self):
        if self._label is not None:
            return self._label
        terms = [f"{self.a0:g}"] + [f"{ak:g},{bk:g}" for ak, bk in zip(self.a, self.b)]
        return "trig:" + ",".join(terms)

    def _cs(self, theta):
        theta = np.asarray(theta, dtype=float)
        kt = np.multiply.outer(theta, self.k)
        return np.cos(kt), np.sin(kt)

    def support(self, theta):
        c, s = self._cs(theta)
        return self.a0 + c @ self.a + s @ self.b

    def support_d1(self, theta):
        c, s = self._cs(theta)
        return (s * -self.k) @ self.a + (c * self.k) @ self.b

    def support_d2(self, theta):
        c, s = self._cs(theta)
        k2 = self.k ** 2
        return -(c * k2) @ self.a - (s * k2) @ self.b

    def scaled(self, factor):
        return TrigBody(self.a0 * factor, self.a * factor, self.b * factor)

    def rotated(self, alpha: float) -> "TrigBody":
        """The body rotated ccw by ``alpha`` (support evaluated at ``theta - alpha``)."""
        ca, sa = np.cos(self.k * alpha), np.sin(self.k * alpha)
        return TrigBody(self.a0, self.a * ca - self.b * sa, self.a * sa + self.b * ca)

    def translated(self, v) -> "TrigBody":
        a, b = self.a.copy(), self.b.copy()
        if len(a) == 0:
            a, b = np.zeros(1), np.zeros(1)
        a[0] += float(v[0])
        b[0] += float(v[1])
        return TrigBody(self.a0, a, b)


def constant_width_body(w: float, b3: float) -> TrigBody:
    """Constant-width body with support ``w/2 + b3 cos 3 theta``."""
    return TrigBody(0.5 * w, [0.0, 0.0, b3], [0.0, 0.0, 0.0], label=f"cw:{w:g},{b3:g}")


_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_ARITY = {"disc": (1, 1), "ellipse": (2, 2), "cw": (2, 2)}


def parse_body(text: str) -> ConvexBody:
    """Parse a BodySpec: ``disc:R``, ``ellipse:a,b``, ``cw:w,b3`` or ``trig:a0[,ak,bk]*``."""
    if not isinstance(text, str):
        raise BodySpecError(f"body spec must be a string, got {type(text).__name__}", 0)
    colon = text.find(":")
    if colon < 0:
        raise BodySpecError(f"missing ':' in body spec {text!r}", len(text))
    kind = text[:colon].strip()
    if kind not in ("disc", "ellipse", "cw", "trig"):
        raise BodySpecError(f"unknown body kind {kind!r}", 0)
    values, pos = [], colon + 1
    while True:
        m = _NUMBER.match(text, pos)
        if m is None:
            raise BodySpecError(f"expected a decimal number in {text!r}", pos)
        values.append(float(m.group()))
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] != ",":
            raise BodySpecError(f"unexpected character {text[pos]!r} in {text!r}", pos)
        pos += 1
    if kind in _ARITY:
        lo, hi = _ARITY[kind]
        if not lo <= len(values) <= hi:
            raise BodySpecError(f"{kind} takes {lo} parameter(s), got {len(values)}", colon + 1)
    elif len(values) % 2 != 1:
        raise BodySpecError("trig takes a0 followed by (ak, bk) pairs", colon + 1)

    if kind == "disc":
        return DiscBody(values[0])
    if kind == "ellipse":
        return EllipseBody(*values)
    if kind == "cw":
        return constant_width_body(*values)
    return TrigBody(values[0], values[1::2], values[2::2])

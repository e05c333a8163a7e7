"""Boundary curvature integrals and the limit constants built from them.

All integrals use the normal-angle parametrization, ``ds = rho(theta) dtheta``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .body import VALIDATION_GRID, ConvexBody, _grid
from .errors import Infeasible, SingularIntegrand
from .quadrature import gamma_fn, integrate, integrate_periodic  # noqa: F401

QUAD_TOL = 1e-10
SINGULAR_MARGIN = 1e-6


def _min_excess_ratio(body: ConvexBody, r: float) -> float:
    """``min kappa * r`` over the boundary."""
    return body.kappa_min * r


def boundary_integral(body: ConvexBody, r: float, p: float, weight=None) -> float:
    """``int_{dK} (kappa - 1/r)^p w(kappa) ds`` with ``w`` defaulting to 1.

    Negative ``p`` needs ``kappa * r >= 1 + 1e-6`` everywhere; fractional
    ``p`` needs ``kappa >= 1/r`` so that the power is real.
    """
    p = float(p)
    ratio = _min_excess_ratio(body, r)
    if p < 0 and ratio < 1.0 + SINGULAR_MARGIN:
        raise SingularIntegrand(
            f"(kappa - 1/r)^{p:g} is singular: min kappa*r = {ratio:.9g} < 1 + {SINGULAR_MARGIN:g}")
    if p != int(p) and ratio < 1.0:
        raise SingularIntegrand(f"kappa < 1/r somewhere (min kappa*r = {ratio:.9g}); power {p:g} undefined")

    def f(theta):
        rho = body.radius_of_curvature(theta)
        excess = np.maximum(1.0 / rho - 1.0 / r, 0.0) if p != int(p) else 1.0 / rho - 1.0 / r
        val = excess ** p * rho
        if weight is not None:
            val = val * weight(1.0 / rho)
        return val

    if p == 0 and weight is None:
        return body.perimeter()
    return integrate_periodic(f, tol=QUAD_TOL)


@dataclass(frozen=True)
class LimitConstants:
    model: str
    c_f0: float
    c_area: float
    c_perim: float | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def inscribed_limits(body: ConvexBody, r: float) -> LimitConstants:
    """Limits of ``E f0 n^{-1/3}`` and ``E(missed area) n^{2/3}`` for uniform points in K."""
    body.require_sliding_radius_below(r, "inscribed model")
    a = body.area()
    g = gamma_fn(5.0 / 3.0) * boundary_integral(body, r, 1.0 / 3.0)
    return LimitConstants("inscribed", (2.0 / (3.0 * a)) ** (1.0 / 3.0) * g,
                          (2.0 * a * a / 3.0) ** (1.0 / 3.0) * g)


def circle_limits(r: float) -> LimitConstants:
    """Limits of ``E f0`` and ``E(missed area) n`` when K is the radius-r disc itself."""
    if not r > 0:
        raise Infeasible(f"radius must be positive, got {r!r}")
    return LimitConstants("circle", math.pi ** 2 / 2.0, r * r * math.pi ** 3 / 3.0)


def efron_missed_area_limit(area: float, f0_limit: float) -> float:
    """Limit of ``n E(missed area)`` implied by a vertex-count limit.

    A new uniform point is a vertex of the hull of ``n + 1`` points exactly
    when it misses the hull of the other ``n``, so
    ``E f0(K_{n+1}) = (n + 1) E(missed area of K_n) / A(K)``.
    For the radius-r disc with ``E f0 -> pi^2/2`` this gives ``r^2 pi^3 / 2``.
    """
    return area * f0_limit


def dual_area(body: ConvexBody, r: float) -> float:
    """``A(K) - r Per(K) + r^2 pi``, the area of the r-dual."""
    return body.area() - r * body.perimeter() + r * r * math.pi


def circumscribed_limits(body: ConvexBody, r: float) -> LimitConstants:
    """Limits for the intersection of n radius-r discs centered in the r-dual.

    ``c_f0`` multiplies ``n^{1/3}``; ``c_perim`` and ``c_area`` multiply
    ``n^{-2/3}``.  The last two assume a C^5 boundary (all built-in bodies are
    analytic).
    """
    if not body.kappa_min * r > 1.0:
        raise Infeasible(
            f"circumscribed model needs r > r_M = {body.rolling_radii()[1]:.6g} "
            f"(kappa_m = {body.kappa_min:.6g}), got r = {r:g}")
    a_star = dual_area(body, r)
    c_f0 = ((2.0 * r / (3.0 * a_star)) ** (1.0 / 3.0) * gamma_fn(5.0 / 3.0)
            * boundary_integral(body, r, 2.0 / 3.0))
    scale = (12.0 * a_star) ** (2.0 / 3.0) * gamma_fn(2.0 / 3.0) * r ** (-2.0 / 3.0)
    neg = boundary_integral(body, r, -1.0 / 3.0)
    perim_int = boundary_integral(body, r, -1.0 / 3.0, weight=lambda k: 4.0 * k - 1.0 / r)
    return LimitConstants("circumscribed", c_f0, scale / 12.0 * neg, scale / 36.0 * perim_int)


def limits_for(model: str, body: ConvexBody, r: float) -> LimitConstants:
    if model == "inscribed":
        return inscribed_limits(body, r)
    if model == "circle":
        return circle_limits(r)
    if model == "circumscribed":
        return circumscribed_limits(body, r)
    raise ValueError(f"unknown model {model!r}")


def curvature_excess_min(body: ConvexBody, r: float) -> float:
    """Smallest ``kappa - 1/r`` on the validation grid (diagnostic)."""
    return float(np.min(body.curvature(_grid(VALIDATION_GRID)) - 1.0 / r))

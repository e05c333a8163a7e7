"""Worked examples for each module, with their reference values."""
import math

import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.stats import chisquare

from spindle.body import parse_body
from spindle.cap import (
    ReparamPoint, _phi_points, cap_cutting_circle, cap_measures, cap_measures_circle, caps_of_pair, phi_jacobian_closed,
    phi_jacobian_fd, phi_map, t_star,
)
from spindle.errors import OutsideBody
from spindle.geom import arc_polygon_area, arc_polygon_perimeter, circles_through_pair, spindle_contains
from spindle.hull import missed_area, r_hull


# -- geometry ------------------------------------------------------------------------

def test_pair_centers():
    left, right = circles_through_pair((-0.3, 0), (0.3, 0), 1.0)
    assert left.center == pytest.approx((0, math.sqrt(0.91)))
    assert right.center == pytest.approx((0, -math.sqrt(0.91)))
    left, right = circles_through_pair((-1, 0), (1, 0), 1.0)
    assert left.center == pytest.approx((0, 0)) and right.center == pytest.approx((0, 0))


def test_spindle_membership_examples():
    a, b = (0, 0), (0.5, 0)
    assert spindle_contains(a, b, 1.0, (0.25, 0))
    assert not spindle_contains(a, b, 1.0, (0.25, 0.5))
    assert spindle_contains(a, b, 1.0, a)


def test_spindle_area_and_length():
    v = [(-0.2, 0), (0.2, 0)]
    assert arc_polygon_area(v, 1.0) == pytest.approx(2 * (math.asin(0.2) - 0.2 * math.sqrt(0.96)), rel=1e-12)
    assert arc_polygon_perimeter(v, 1.0) == pytest.approx(4 * math.asin(0.2), rel=1e-12)
    # a half-chord of r is a semicircle
    assert arc_polygon_perimeter([(-1, 0), (1, 0)], 1.0) == pytest.approx(2 * math.pi)


def test_small_triangle_area_vanishes():
    for s in (1e-2, 1e-4, 1e-6):
        tri = [(0, 0), (s, 0), (s / 2, s * math.sqrt(3) / 2)]
        assert 0 < arc_polygon_area(tri, 1.0) < s * s


def test_refined_polygon_approaches_disc():
    r = 1.7
    t = 2 * math.pi * np.arange(256) / 256
    v = r * np.column_stack([np.cos(t), np.sin(t)])
    assert arc_polygon_area(v, r) == pytest.approx(math.pi * r * r, abs=1e-4)
    assert arc_polygon_perimeter(v, r) == pytest.approx(2 * math.pi * r, abs=1e-6)


# -- bodies --------------------------------------------------------------------------

def test_boundary_points_examples():
    d = parse_body("disc:0.7")
    assert d.boundary_point(1.1) == pytest.approx((0.7 * math.cos(1.1), 0.7 * math.sin(1.1)))
    assert parse_body("ellipse:0.6,0.5").boundary_point(0.0) == pytest.approx((0.6, 0.0))
    cw = parse_body("cw:1,0.03")
    for th in np.linspace(0, 2 * math.pi, 17):
        assert math.dist(cw.boundary_point(th), cw.boundary_point(th + math.pi)) == pytest.approx(1.0, abs=1e-12)


def test_curvature_examples():
    assert np.allclose(parse_body("disc:0.8").curvature(np.linspace(0, 6, 7)), 1 / 0.8)
    assert float(parse_body("ellipse:0.6,0.5").curvature(0.0)) == pytest.approx(0.6 / 0.25)
    th = np.linspace(0, 2 * math.pi, 50)
    assert np.allclose(parse_body("cw:1,0.03").radius_of_curvature(th), 0.5 - 0.24 * np.cos(3 * th), atol=1e-14)


def test_containment_examples():
    d = parse_body("disc:1")
    assert d.contains((0.999, 0)) and not d.contains((1.001, 0))
    assert parse_body("ellipse:0.6,0.5").contains((0.6, 0.0))


def test_containment_against_radial_oracle():
    cw = parse_body("cw:1,0.03")
    rng = np.random.default_rng(0)
    p = rng.uniform(-0.6, 0.6, (10000, 2))
    fast = cw.contains_points(p)
    th = np.linspace(0, 2 * math.pi, 4097)
    bpts = cw.boundary_points(th)

    def radial(psi):
        # the boundary point in direction psi, by root finding on the polar angle of x(theta)
        ang = np.unwrap(np.arctan2(bpts[:, 1], bpts[:, 0]))
        target = ang[0] + (psi - ang[0]) % (2 * math.pi)
        k = int(np.searchsorted(ang, target))
        k = min(max(k, 1), len(th) - 1)
        s = brentq(lambda s: (math.atan2(*cw.boundary_point(s)[::-1]) - psi + math.pi) % (2 * math.pi) - math.pi,
                   th[k - 1], th[k])
        return math.hypot(*cw.boundary_point(s))

    checked = 0
    for (x, y), f in zip(p[:2000], fast[:2000]):
        rho = radial(math.atan2(y, x))
        if abs(math.hypot(x, y) - rho) > 1e-9:
            assert f == (math.hypot(x, y) < rho)
            checked += 1
    assert checked > 1900


def test_sampling_examples():
    rng = np.random.default_rng(2)
    d = parse_body("disc:1")
    pts, proposals = d.sample_uniform(rng, 100000, return_proposals=True)
    sigma = math.sqrt(0.25)
    assert np.all(np.abs(pts.mean(axis=0)) <= 3 * sigma / math.sqrt(len(pts)))
    assert len(pts) / proposals == pytest.approx(math.pi / 4, abs=0.01)


def test_ellipse_sampling_chi_square():
    rng = np.random.default_rng(3)
    e = parse_body("ellipse:0.6,0.5")
    pts = e.sample_uniform(rng, 200000)
    edges_x, edges_y = np.linspace(-0.6, 0.6, 11), np.linspace(-0.5, 0.5, 11)
    counts, _, _ = np.histogram2d(pts[:, 0], pts[:, 1], [edges_x, edges_y])
    # cell areas of the ellipse by a fine midpoint grid
    g = 1000
    gx = -0.6 + 1.2 * (np.arange(g) + 0.5) / g
    gy = -0.5 + 1.0 * (np.arange(g) + 0.5) / g
    X, Y = np.meshgrid(gx, gy, indexing="ij")
    inside = (X / 0.6) ** 2 + (Y / 0.5) ** 2 <= 1
    cell, _, _ = np.histogram2d(X[inside], Y[inside], [edges_x, edges_y])
    keep = cell > 0
    expected = cell[keep] / cell[keep].sum() * counts[keep].sum()
    # cells cut by the boundary carry a small midpoint-rule error; use interior cells only
    full = cell[keep] == cell.max()
    assert chisquare(counts[keep][full], expected[full] * counts[keep][full].sum() / expected[full].sum()).pvalue > 1e-3


# -- hulls ----------------------------------------------------------------------------

def test_hull_examples():
    dp = r_hull([[0, 0], [0.4, 0]], 1.0)
    assert dp.f0 == 2 and len(dp.edges) == 2
    assert r_hull([[0, 0], [0.4, 0], [0.2, 0.005]], 1.0).f0 == 2
    line = [[0.1 * k, 0.05 * k] for k in range(8)]
    dp = r_hull(line, 1.0)
    assert sorted(dp.indices) == [0, 7]
    t = 2 * math.pi * np.arange(5) / 5
    assert r_hull(0.5 * np.column_stack([np.cos(t), np.sin(t)]), 1.0).f0 == 5
    one = r_hull([[0.3, 0.3]], 1.0)
    assert one.f0 == 1 and one.edges == []


def test_hull_edge_invariants():
    rng = np.random.default_rng(6)
    pts = parse_body("ellipse:0.6,0.5").sample_uniform(rng, 500)
    dp = r_hull(pts, 1.0)
    assert dp.is_valid_for(pts)
    chords = np.hypot(*(np.roll(dp.vertices, -1, axis=0) - dp.vertices).T)
    assert np.all(chords <= 2.0)
    assert len(dp.edges) == dp.f0


def test_missed_area_examples():
    body = parse_body("disc:0.9")
    th = 2 * math.pi * np.arange(4096) / 4096
    dp = r_hull(body.boundary_points(th), 1.0)
    assert 0 <= missed_area(body, dp) <= 1e-3
    assert missed_area(body, r_hull([[0.1, 0.1]], 1.0)) == pytest.approx(body.area())
    rng = np.random.default_rng(7)
    for _ in range(1000):
        pts = body.sample_uniform(rng, int(rng.integers(1, 12)))
        a = missed_area(body, r_hull(pts[:-1], 1.0)) if len(pts) > 1 else body.area()
        b = missed_area(body, r_hull(pts, 1.0))
        assert b <= a + 1e-14


# -- caps -------------------------------------------------------------------------------

def test_cutting_circle_examples():
    disc = parse_body("disc:1")
    assert cap_cutting_circle(disc, 0.0, 0.3).center == pytest.approx((-0.3, 0))
    e = parse_body("ellipse:0.6,0.5")
    c0 = cap_cutting_circle(e, 0.8, 0.0, 1.0)
    assert math.dist(c0.center, e.boundary_point(0.8)) == pytest.approx(1.0)
    # a circle of radius at most r_m rolls inside the body
    r = 0.4
    c = cap_cutting_circle(e, 0.8, 0.0, r)
    ring = np.array(c.center) + r * np.column_stack([np.cos(np.linspace(0, 2 * math.pi, 256)),
                                                     np.sin(np.linspace(0, 2 * math.pi, 256))])
    assert all(e.contains(p, tol=1e-9) for p in ring)


def test_cap_examples():
    disc = parse_body("disc:1")
    assert cap_measures(disc, 0.0, 0.2)[0] == pytest.approx(cap_measures_circle(0.2)[0], abs=1e-9)
    ts = t_star(disc, 0.0)
    assert cap_measures(disc, 0.0, ts - 1e-6)[1] < 5e-3
    e = parse_body("ellipse:0.6,0.5")
    a, _ = cap_measures(e, 0.0, 1e-4)
    assert a * 1e-4 ** -1.5 == pytest.approx(4 / 3 * math.sqrt(2 / (2.4 - 1)), rel=0.02)
    assert cap_measures_circle(0.0) == (0.0, math.pi)
    assert cap_measures_circle(1e-6)[0] / 1e-6 == pytest.approx(2.0, rel=1e-6)


def test_phi_map_examples():
    disc = parse_body("disc:1")
    x1, x2 = phi_map(disc, ReparamPoint(0.0, 0.3, 0.4, 0.4))
    assert x1 == x2
    # direct substitution lands at (-0.3, 1), which is outside the unit disc
    x1, _ = _phi_points(disc, 0.0, 0.3, math.pi / 2, 0.0, 1.0)
    assert tuple(x1) == pytest.approx((-0.3, 1.0))
    with pytest.raises(OutsideBody):
        phi_map(disc, ReparamPoint(0.0, 0.3, math.pi / 2, 0.0))


def test_phi_map_round_trip_through_caps():
    e = parse_body("ellipse:0.6,0.5")
    rp = ReparamPoint(0.9, 0.02, 0.75, 1.05)
    x1, x2 = phi_map(e, rp)
    (th, t, _), _ = caps_of_pair(e, x1, x2)
    assert th == pytest.approx(rp.theta, abs=1e-7)
    assert t == pytest.approx(rp.t, abs=1e-9)


def test_jacobian_examples():
    disc = parse_body("disc:1")
    rp = ReparamPoint(0.0, 0.1, 0.3, 0.3 + math.pi / 2)
    assert phi_jacobian_closed(disc, rp) == pytest.approx(0.1)
    assert phi_jacobian_closed(disc, ReparamPoint(0.0, 0.1, 0.3, 0.3)) == 0.0
    e = parse_body("ellipse:0.6,0.5")
    rp = ReparamPoint(0.0, 0.05, 1.0, 2.2)
    assert phi_jacobian_fd(e, rp) == pytest.approx(phi_jacobian_closed(e, rp), rel=1e-5)

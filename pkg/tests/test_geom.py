import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spindle.errors import ChordTooLong, DegeneratePair, OrientationError, PairTooFar
from spindle.geom import (
    ArcEdge, CircleR, Point2, arc_edges, arc_polygon_area, arc_polygon_perimeter,
    circles_through_pair, segment_area, shoelace_area, spindle_contains,
)

coord = st.floats(-0.9, 0.9, allow_nan=False)


def lens_area(d, r=1.0):
    return 2 * r * r * math.acos(d / (2 * r)) - 0.5 * d * math.sqrt(4 * r * r - d * d)


def test_circles_through_pair_left_then_right():
    left, right = circles_through_pair((0, 0), (1, 0), 1.0)
    assert left.center[1] > 0 > right.center[1]
    assert left.center[0] == pytest.approx(0.5)
    assert left.center[1] == pytest.approx(math.sqrt(0.75))


def test_circles_through_pair_errors():
    with pytest.raises(DegeneratePair):
        circles_through_pair((1, 1), (1, 1), 1.0)
    with pytest.raises(PairTooFar):
        circles_through_pair((0, 0), (2.1, 0), 1.0)
    # exactly 2r: the circles coincide
    left, right = circles_through_pair((0, 0), (2, 0), 1.0)
    assert left.center == pytest.approx(right.center)


@given(coord, coord, coord, coord, st.floats(1.3, 3.0))
def test_circles_pass_through_both_points(ax, ay, bx, by, r):
    if math.hypot(ax - bx, ay - by) < 1e-6:
        return
    for c in circles_through_pair((ax, ay), (bx, by), r):
        assert math.hypot(ax - c.center[0], ay - c.center[1]) == pytest.approx(r, abs=1e-12)
        assert math.hypot(bx - c.center[0], by - c.center[1]) == pytest.approx(r, abs=1e-12)


def test_spindle_contains_basics():
    a, b = (0.0, 0.0), (1.0, 0.0)
    assert spindle_contains(a, b, 1.0, (0.5, 0.0))
    assert spindle_contains(a, b, 1.0, a) and spindle_contains(a, b, 1.0, b)
    # spindle half-width at the middle is 1 - sqrt(3)/2
    w = 1 - math.sqrt(0.75)
    assert spindle_contains(a, b, 1.0, (0.5, w * (1 - 1e-9)))
    assert not spindle_contains(a, b, 1.0, (0.5, w * (1 + 1e-6)))
    assert spindle_contains(a, a, 1.0, a)
    assert not spindle_contains(a, a, 1.0, (0.1, 0))


@given(coord, coord, coord, coord, st.floats(0.0, 1.0), st.floats(1.3, 3.0))
def test_spindle_contains_segment(ax, ay, bx, by, s, r):
    if math.hypot(ax - bx, ay - by) < 1e-6:
        return
    p = (ax + s * (bx - ax), ay + s * (by - ay))
    assert spindle_contains((ax, ay), (bx, by), r, p)


def test_shoelace_and_orientation():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert shoelace_area(sq) == 1.0
    assert shoelace_area(sq[::-1]) == -1.0
    with pytest.raises(OrientationError):
        arc_polygon_area(sq[::-1], 1.0)


def test_two_vertex_polygon_is_a_lens():
    for d in (0.1, 0.7, 1.5, 1.99):
        # the two arcs lie on circles whose centers are 2 sqrt(1 - d^2/4) apart
        centers = 2 * math.sqrt(1 - d * d / 4)
        assert arc_polygon_area([(0, 0), (d, 0)], 1.0) == pytest.approx(lens_area(centers), rel=1e-12)
        assert arc_polygon_perimeter([(0, 0), (d, 0)], 1.0) == pytest.approx(4 * math.asin(d / 2), rel=1e-12)


def test_regular_polygon_closed_form():
    # regular m-gon inscribed in the unit circle with unit-radius arcs is the unit disc
    for m in (3, 5, 12):
        t = 2 * math.pi * np.arange(m) / m
        v = np.column_stack([np.cos(t), np.sin(t)])
        assert arc_polygon_area(v, 1.0) == pytest.approx(math.pi, rel=1e-12)
        assert arc_polygon_perimeter(v, 1.0) == pytest.approx(2 * math.pi, rel=1e-12)


def test_segment_area_forms_agree():
    r = 1.3
    for s in (1e-6, 0.3, 0.999, 1.0 - 1e-10, 1.0):
        d = s * r
        theta = math.asin(s)
        assert segment_area(d, r) == pytest.approx(r * r * (theta - math.sin(theta) * math.cos(theta)),
                                                   rel=1e-9, abs=1e-18)


def test_chord_too_long():
    with pytest.raises(ChordTooLong):
        arc_polygon_area([(0, 0), (2.5, 0), (1, 1)], 1.0)


def test_arc_edges_structure():
    v = [(0.0, 0.0), (0.5, 0.0), (0.2, 0.4)]
    edges = arc_edges(v, 1.0)
    assert len(edges) == 3
    for e, (p, q) in zip(edges, zip(v, v[1:] + v[:1])):
        assert isinstance(e, ArcEdge)
        assert e.start == Point2(*p) and e.end == Point2(*q)
        assert e.circle.contains(p) and e.circle.contains(q)
        # inner circle: center lies left of the edge, so the arc bulges right (outward)
        cx, cy = e.circle.center
        assert (q[0] - p[0]) * (cy - p[1]) - (q[1] - p[1]) * (cx - p[0]) > 0
        m = e.midpoint()
        assert (q[0] - p[0]) * (m[1] - p[1]) - (q[1] - p[1]) * (m[0] - p[0]) < 0
    assert sum(e.length for e in edges) == pytest.approx(arc_polygon_perimeter(v, 1.0))


def test_circle_contains_tolerance():
    c = CircleR(Point2(0.0, 0.0), 1.0)
    assert c.contains((1.0 + 1e-13, 0.0))
    assert not c.contains((1.0 + 1e-9, 0.0))

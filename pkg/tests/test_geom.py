import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circumgon.geom import (
    ConvexPolygon,
    GeometryError,
    Issue,
    Line,
    Parallel,
    Point,
    UnboundedError,
    ValidationError,
    external_triangle,
    intersect_lines,
    point_on_boundary,
    polygon_contains,
    require_valid,
    signed_area,
    simplify_closed,
    validate_input,
)
from circumgon.oracle import regular_ngon

from polygen import random_polygon

coord = st.floats(-100, 100, allow_nan=False)


def test_signed_area_orientation():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert signed_area(sq) == 1.0
    assert signed_area(sq[::-1]) == -1.0
    with pytest.raises(GeometryError):
        signed_area(sq[:2])


def test_regular_polygon_areas():
    assert regular_ngon(6).area == pytest.approx(3 * math.sqrt(3) / 2, rel=1e-14)
    assert regular_ngon(5).area == pytest.approx(2.5 * math.sin(math.radians(72)), rel=1e-14)
    sq = regular_ngon(4)
    assert (sq.vertex(0) - sq.vertex(2)).norm() == pytest.approx(2.0)


def test_cyclic_indices():
    P = regular_ngon(7)
    assert P.vertex(9) == P.vertex(2)
    assert P.vertex(-1) == P.vertex(6)
    assert P.side(7) == P.side(0)


def test_polygon_rejects_clockwise_and_collinear():
    with pytest.raises(GeometryError):
        ConvexPolygon.from_coords([(0, 0), (0, 1), (1, 1), (1, 0)])
    with pytest.raises(GeometryError):
        ConvexPolygon.from_coords([(0, 0), (1, 0), (2, 0), (1, 1)])
    with pytest.raises(GeometryError):
        ConvexPolygon.from_coords([(0, 0), (2, 0), (0.5, 0.5), (0, 2)])


def test_json_round_trip():
    P = regular_ngon(5)
    Q = ConvexPolygon.from_json(P.to_json())
    assert Q.vertices == P.vertices
    with pytest.raises(GeometryError):
        ConvexPolygon.from_json(json.dumps({"points": []}))


def test_line_side_and_projection():
    line = Line.through(Point(0, 0), Point(2, 0))
    assert line.side(Point(5, 3)) == pytest.approx(3.0)
    assert line.side(Point(5, -1)) == pytest.approx(-1.0)
    assert line.project(Point(1.5, 7)) == Point(1.5, 0.0)
    assert line.same_as(Line.through(Point(4, 0), Point(7, 0)))
    assert not line.same_as(line.reversed())


@settings(max_examples=60, deadline=None)
@given(coord, coord, coord, coord, st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_intersection_lies_on_both_lines(px, py, qx, qy, a1, a2):
    l1 = Line.from_point_direction(Point(px, py), Point(math.cos(a1), math.sin(a1)))
    l2 = Line.from_point_direction(Point(qx, qy), Point(math.cos(a1 + a2), math.sin(a1 + a2)))
    x = intersect_lines(l1, l2)
    assert isinstance(x, Point)
    scale = 1 + abs(px) + abs(py) + abs(qx) + abs(qy)
    tol = 1e-9 * scale / min(1.0, abs(math.sin(a2)))
    assert abs(l1.side(x)) <= tol and abs(l2.side(x)) <= tol


def test_parallel_lines():
    l1 = Line.through(Point(0, 0), Point(1, 0))
    assert intersect_lines(l1, Line.through(Point(0, 1), Point(1, 1))) == Parallel(False)
    assert intersect_lines(l1, Line.through(Point(3, 0), Point(5, 0))) == Parallel(True)


def test_external_triangle_of_regular_pentagon():
    P = regular_ngon(5)
    s = (P.vertex(1) - P.vertex(0)).norm()
    # isosceles, base angles equal to the exterior angle
    expected = s * s / 4 * math.tan(2 * math.pi / 5)
    for i in range(5):
        T = external_triangle(P, i)
        assert T.bounded
        assert T.area == pytest.approx(expected, rel=1e-12)


def test_external_triangle_of_square_is_unbounded():
    sq = ConvexPolygon.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)])
    T = external_triangle(sq, 0)
    assert not T.bounded and math.isinf(T.area)


def test_validate_input_square_reports_both_issues():
    sq = ConvexPolygon.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert validate_input(sq) == [Issue.UNBOUNDED, Issue.TOO_FEW_VERTICES]
    with pytest.raises(UnboundedError):
        require_valid(sq)


def test_validate_input_regular_polygons():
    for n in range(5, 12):
        assert validate_input(regular_ngon(n)) == []
    # right angles at both ends of the bottom side: the sum is exactly pi
    P = ConvexPolygon.from_coords([(0, 0), (4, 0), (4, 1), (2, 1.5), (0, 1)])
    assert Issue.UNBOUNDED in validate_input(P)


def test_too_few_vertices_is_validation_error():
    P = ConvexPolygon.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)])
    with pytest.raises(ValidationError) as err:
        require_valid(P)
    assert Issue.TOO_FEW_VERTICES in err.value.issues


def test_boundary_and_containment():
    P = regular_ngon(6)
    mid = (P.vertex(0) + P.vertex(1)) * 0.5
    assert point_on_boundary(P, mid)
    assert polygon_contains(P, Point(0, 0))
    assert not point_on_boundary(P, Point(0, 0))
    assert not polygon_contains(P, Point(3, 0))


def test_simplify_closed_drops_straight_and_repeated_vertices():
    pts = [Point(0, 0), Point(1, 0), Point(2, 0), Point(2, 2), Point(2, 2), Point(0, 2)]
    assert simplify_closed(pts, 1e-12) == [Point(0, 0), Point(2, 0), Point(2, 2), Point(0, 2)]


def test_affine_transform_keeps_orientation():
    rng = np.random.default_rng(3)
    P = random_polygon(rng, 8)
    M = np.array([[0.0, 1.0], [1.0, 0.0]])  # reflection
    Q = P.transformed(M, (2.0, -1.0))
    assert Q.area == pytest.approx(P.area, rel=1e-12)
    assert Q.n == P.n


def test_normalized_polygon_has_unit_diameter():
    rng = np.random.default_rng(4)
    P = random_polygon(rng, 9)
    N, sim = P.normalized()
    assert N.scale == pytest.approx(1.0)
    assert sim.backward(N.vertex(3)).close_to(P.vertex(3), 1e-12)

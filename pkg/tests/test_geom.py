"""Geometry kernel tests with independent oracles."""

import math
import random

import numpy as np
import pytest

from trajkit import (
    GeometryCollection,
    LineString,
    Point,
    Polygon,
    SridMismatch,
    collect,
    distance,
    intersects,
    point_in_polygon,
    points_in_polygon,
)

from generators import _gen_polygon


def test_distance_3_4_5():
    assert distance(Point(0, 0), Point(3, 4)) == 5.0


def test_distance_self_zero():
    g = LineString(((0, 0), (1, 1), (2, 0)))
    assert distance(g, g) == 0.0


def test_distance_symmetry_and_triangle():
    rng = random.Random(2)
    for _ in range(200):
        pts = [Point(rng.uniform(-10, 10), rng.uniform(-10, 10)) for _ in range(3)]
        dab = distance(pts[0], pts[1])
        dba = distance(pts[1], pts[0])
        assert dab == dba
        assert distance(pts[0], pts[2]) <= dab + distance(pts[1], pts[2]) + 1e-9


def test_distance_segment_sampling_lower_bound():
    # densely sampled point distances upper-bound the exact distance and
    # converge toward it
    rng = random.Random(7)
    for _ in range(100):
        a = LineString(((rng.uniform(0, 10), rng.uniform(0, 10)),
                        (rng.uniform(0, 10), rng.uniform(0, 10))))
        b = LineString(((rng.uniform(20, 30), rng.uniform(0, 10)),
                        (rng.uniform(20, 30), rng.uniform(0, 10))))
        exact = distance(a, b)
        len_a = math.dist(a.points[0], a.points[1])
        len_b = math.dist(b.points[0], b.points[1])
        last = None
        for n in (8, 64, 512):
            ts = np.linspace(0.0, 1.0, n)
            pa = np.stack([
                a.points[0][0] + (a.points[1][0] - a.points[0][0]) * ts,
                a.points[0][1] + (a.points[1][1] - a.points[0][1]) * ts,
            ], axis=1)
            pb = np.stack([
                b.points[0][0] + (b.points[1][0] - b.points[0][0]) * ts,
                b.points[0][1] + (b.points[1][1] - b.points[0][1]) * ts,
            ], axis=1)
            diff = pa[:, None, :] - pb[None, :, :]
            sampled = float(np.sqrt((diff ** 2).sum(axis=2).min()))
            assert sampled >= exact - 1e-9
            # converging: error bounded by the grid pitch
            assert sampled - exact <= (len_a + len_b) / (n - 1) + 1e-9
            last = sampled
        assert last == pytest.approx(exact, abs=0.2)


def test_intersects_crossing_segments():
    poly = Polygon(((0, 0), (4, 0), (4, 4), (0, 4), (0, 0)))
    crossing = LineString(((-1, 2), (5, 2)))
    assert intersects(crossing, poly)
    assert intersects(poly, crossing)


def test_intersects_distant_false():
    assert not intersects(Point(0, 0), Point(5, 5))
    assert not intersects(
        LineString(((0, 0), (1, 0))), LineString(((3, 3), (4, 3)))
    )


def test_intersects_containment_without_boundary_touch():
    poly = Polygon(((0, 0), (10, 0), (10, 10), (0, 10), (0, 0)))
    inner = LineString(((4, 4), (6, 6)))
    assert intersects(inner, poly)
    assert intersects(poly, inner)


def test_intersects_matches_distance_zero():
    rng = random.Random(13)
    for _ in range(300):
        def gen(kind):
            if kind == 0:
                return Point(rng.uniform(0, 8), rng.uniform(0, 8))
            if kind == 1:
                return LineString(
                    tuple((rng.uniform(0, 8), rng.uniform(0, 8)) for _ in range(3))
                )
            return _gen_square(rng)

        a = gen(rng.randrange(3))
        b = gen(rng.randrange(3))
        assert intersects(a, b) == (distance(a, b) == 0.0)


def _gen_square(rng):
    x, y = rng.uniform(0, 6), rng.uniform(0, 6)
    w = rng.uniform(0.5, 2.5)
    return Polygon(((x, y), (x + w, y), (x + w, y + w), (x, y + w), (x, y)))


def test_collect_singleton_and_srid():
    p = Point(1, 2, srid=4326)
    c = collect([p])
    assert isinstance(c, GeometryCollection)
    assert c.geoms == (p,)
    assert c.srid == 4326


def test_collect_requires_consistent_srid():
    with pytest.raises(SridMismatch):
        collect([Point(0, 0, srid=4326), Point(1, 1)])


def test_collect_empty_rejected():
    with pytest.raises(ValueError):
        collect([])


def test_collection_distance_is_pairwise_min():
    rng = random.Random(19)
    for _ in range(50):
        ga = [Point(rng.uniform(0, 10), rng.uniform(0, 10)) for _ in range(4)]
        gb = [
            LineString(tuple((rng.uniform(10, 20), rng.uniform(0, 10)) for _ in range(2)))
            for _ in range(3)
        ]
        d = distance(collect(ga), collect(gb))
        pairwise = min(distance(a, b) for a in ga for b in gb)
        assert d == pytest.approx(pairwise, rel=1e-12)


def test_point_in_polygon_basics():
    square = Polygon(((0, 0), (1, 0), (1, 1), (0, 1), (0, 0)))
    assert point_in_polygon(Point(0.5, 0.5), square)
    assert not point_in_polygon(Point(5, 5), square)
    assert point_in_polygon(Point(0, 0.5), square)  # boundary counts inside
    assert point_in_polygon(Point(0, 0), square)  # vertex counts inside


def test_point_in_polygon_hole():
    outer = ((0, 0), (10, 0), (10, 10), (0, 10), (0, 0))
    hole = ((4, 4), (6, 4), (6, 6), (4, 6), (4, 4))
    poly = Polygon(outer, (hole,))
    assert not point_in_polygon(Point(5, 5), poly)
    assert point_in_polygon(Point(2, 2), poly)
    assert point_in_polygon(Point(4, 5), poly)  # hole boundary is polygon boundary


def _winding_number_inside(px, py, poly):
    """Independent winding-number oracle (boundary handled separately)."""
    wn = 0
    for ring in poly.rings():
        for (ax, ay), (bx, by) in zip(ring, ring[1:]):
            if ay <= py:
                if by > py and (bx - ax) * (py - ay) - (by - ay) * (px - ax) > 0:
                    wn += 1
            elif by <= py and (bx - ax) * (py - ay) - (by - ay) * (px - ax) < 0:
                wn -= 1
    return wn != 0


def test_point_in_polygon_winding_oracle():
    # for polygons without holes and non-boundary points, even-odd and
    # winding agree
    rng = random.Random(23)
    for _ in range(60):
        poly = _gen_polygon(rng)
        xs = [p[0] for p in poly.outer]
        ys = [p[1] for p in poly.outer]
        for _ in range(40):
            px = rng.uniform(min(xs) - 1, max(xs) + 1)
            py = rng.uniform(min(ys) - 1, max(ys) + 1)
            assert point_in_polygon(Point(px, py), poly) == _winding_number_inside(
                px, py, poly
            )


def test_points_in_polygon_vectorized_matches_scalar():
    rng = random.Random(27)
    poly = _gen_polygon(rng)
    xs = np.array([rng.uniform(-10, 10) for _ in range(500)])
    ys = np.array([rng.uniform(-10, 10) for _ in range(500)])
    mask = points_in_polygon(xs, ys, poly)
    for x, y, m in zip(xs, ys, mask):
        assert point_in_polygon(Point(x, y), poly) == m


def test_srid_mismatch_raises():
    with pytest.raises(SridMismatch):
        distance(Point(0, 0, srid=4326), Point(1, 1, srid=3857))
    with pytest.raises(SridMismatch):
        intersects(Point(0, 0, srid=4326), Point(1, 1))


def test_linestring_validation():
    with pytest.raises(ValueError):
        LineString(((0, 0),))
    with pytest.raises(ValueError):
        Polygon(((0, 0), (1, 0), (0, 0)))  # too short
    with pytest.raises(ValueError):
        Polygon(((0, 0), (1, 0), (1, 1), (2, 2)))  # not closed
    with pytest.raises(ValueError):
        GeometryCollection(())

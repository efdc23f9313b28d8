"""Planar geometry kernel: points, linestrings, polygons, collections.

All computation is Cartesian; coordinates are treated as projected units.
SRID is carried metadata compared for equality, never reprojected.
Polygon containment uses the even-odd rule with boundaries counting as
inside, which makes results independent of ring orientation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

Coord = tuple


class SridMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    x: float
    y: float
    srid: Optional[int] = None


@dataclass(frozen=True)
class LineString:
    points: tuple  # ((x, y), ...)
    srid: Optional[int] = None

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        if len(pts) < 2:
            raise ValueError("linestring needs at least 2 points")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class Polygon:
    outer: tuple
    inners: tuple = ()
    srid: Optional[int] = None

    def __post_init__(self):
        rings = []
        for ring in (self.outer,) + tuple(self.inners):
            r = tuple((float(x), float(y)) for x, y in ring)
            if len(r) < 4 or r[0] != r[-1]:
                raise ValueError("polygon ring must be closed with >= 4 points")
            rings.append(r)
        object.__setattr__(self, "outer", rings[0])
        object.__setattr__(self, "inners", tuple(rings[1:]))

    def rings(self):
        return (self.outer,) + self.inners


@dataclass(frozen=True)
class GeometryCollection:
    geoms: tuple
    srid: Optional[int] = None

    def __post_init__(self):
        if not self.geoms:
            raise ValueError("empty geometry collection rejected")
        object.__setattr__(self, "geoms", tuple(self.geoms))


Geometry = Union[Point, LineString, Polygon, GeometryCollection]

GEOMETRY_TYPES = (Point, LineString, Polygon, GeometryCollection)


def check_srid(a_srid, b_srid):
    if a_srid != b_srid:
        raise SridMismatch(f"srid mismatch: {a_srid} vs {b_srid}")


def collect(gs: Sequence[Geometry]) -> GeometryCollection:
    """Aggregate geometries into a collection, preserving order."""
    gs = list(gs)
    if not gs:
        raise ValueError("collect requires at least one geometry")
    srid = gs[0].srid
    for g in gs[1:]:
        check_srid(srid, g.srid)
    return GeometryCollection(tuple(gs), srid=srid)


def _walk(g: Geometry):
    if isinstance(g, GeometryCollection):
        for sub in g.geoms:
            yield from _walk(sub)
    else:
        yield g


def decompose(g: Geometry):
    """Split a geometry into bare vertices, boundary segments, and polygons."""
    pts, segs, polys = [], [], []
    for part in _walk(g):
        if isinstance(part, Point):
            pts.append((part.x, part.y))
        elif isinstance(part, LineString):
            pts.extend(part.points)
            segs.extend(zip(part.points, part.points[1:]))
        else:
            polys.append(part)
            for ring in part.rings():
                pts.extend(ring[:-1])
                segs.extend(zip(ring, ring[1:]))
    return pts, segs, polys


def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_segment(px, py, ax, ay, bx, by) -> bool:
    if _orient(ax, ay, bx, by, px, py) != 0.0:
        return False
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def segments_intersect(p1, p2, q1, q2) -> bool:
    d1 = _orient(*q1, *q2, *p1)
    d2 = _orient(*q1, *q2, *p2)
    d3 = _orient(*p1, *p2, *q1)
    d4 = _orient(*p1, *p2, *q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and _on_segment(*p1, *q1, *q2):
        return True
    if d2 == 0 and _on_segment(*p2, *q1, *q2):
        return True
    if d3 == 0 and _on_segment(*q1, *p1, *p2):
        return True
    if d4 == 0 and _on_segment(*q2, *p1, *p2):
        return True
    return False


def point_in_polygon(p, poly: Polygon) -> bool:
    """Even-odd membership test; boundary points count as inside."""
    px = p.x if isinstance(p, Point) else p[0]
    py = p.y if isinstance(p, Point) else p[1]
    crossings = 0
    for ring in poly.rings():
        for (ax, ay), (bx, by) in zip(ring, ring[1:]):
            if _on_segment(px, py, ax, ay, bx, by):
                return True
            if (ay <= py) != (by <= py):
                # x coordinate where the edge crosses the horizontal through p
                xc = ax + (py - ay) * (bx - ax) / (by - ay)
                if xc > px:
                    crossings += 1
    return crossings % 2 == 1


def points_in_polygon(xs: np.ndarray, ys: np.ndarray, poly: Polygon) -> np.ndarray:
    """Vectorized even-odd test for many points; boundary counts as inside."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    inside = np.zeros(xs.shape, dtype=bool)
    boundary = np.zeros(xs.shape, dtype=bool)
    for ring in poly.rings():
        arr = np.asarray(ring)
        ax, ay = arr[:-1, 0], arr[:-1, 1]
        bx, by = arr[1:, 0], arr[1:, 1]
        for i in range(len(ax)):
            cross = (bx[i] - ax[i]) * (ys - ay[i]) - (by[i] - ay[i]) * (xs - ax[i])
            on = (
                (cross == 0.0)
                & (xs >= min(ax[i], bx[i]))
                & (xs <= max(ax[i], bx[i]))
                & (ys >= min(ay[i], by[i]))
                & (ys <= max(ay[i], by[i]))
            )
            boundary |= on
            straddles = (ay[i] <= ys) != (by[i] <= ys)
            if by[i] != ay[i]:
                xc = ax[i] + (ys - ay[i]) * (bx[i] - ax[i]) / (by[i] - ay[i])
                inside ^= straddles & (xc > xs)
    return inside | boundary


def _point_seg_dist_sq(px, py, ax, ay, bx, by) -> float:
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        ex, ey = px - ax, py - ay
        return ex * ex + ey * ey
    t = ((px - ax) * dx + (py - ay) * dy) / denom
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    ex, ey = px - (ax + t * dx), py - (ay + t * dy)
    return ex * ex + ey * ey


def _points_to_segs_min_sq(pts: np.ndarray, segs: np.ndarray) -> float:
    """Min squared distance from any point in pts (n,2) to any segment in segs (m,4)."""
    a = segs[:, 0:2]
    d = segs[:, 2:4] - a
    denom = np.einsum("ij,ij->i", d, d)
    denom_safe = np.where(denom == 0.0, 1.0, denom)
    best = np.inf
    for chunk in np.array_split(pts, max(1, len(pts) * len(segs) // 500_000 + 1)):
        rel = chunk[:, None, :] - a[None, :, :]
        t = np.einsum("nmj,mj->nm", rel, d) / denom_safe
        np.clip(t, 0.0, 1.0, out=t)
        proj = a[None, :, :] + t[:, :, None] * d[None, :, :]
        diff = chunk[:, None, :] - proj
        dist_sq = np.einsum("nmj,nmj->nm", diff, diff)
        best = min(best, float(dist_sq.min()))
    return best


def _cross2(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _bulk_segments_intersect(seg_a, seg_b) -> bool:
    """Vectorized pairwise intersection; degenerate (touching/collinear)
    candidates are re-checked with the scalar predicate."""
    A = np.asarray(seg_a, dtype=float)
    B = np.asarray(seg_b, dtype=float)
    chunk = max(1, 2_000_000 // max(1, len(B)))
    for start in range(0, len(A), chunk):
        part = A[start : start + chunk]
        p1 = part[:, None, 0:2]
        p2 = part[:, None, 2:4]
        q1 = B[None, :, 0:2]
        q2 = B[None, :, 2:4]
        r = p2 - p1
        s = q2 - q1
        d1 = _cross2(s, p1 - q1)
        d2 = _cross2(s, p2 - q1)
        d3 = _cross2(r, q1 - p1)
        d4 = _cross2(r, q2 - p1)
        if ((d1 * d2 < 0) & (d3 * d4 < 0)).any():
            return True
        zero = (d1 == 0) | (d2 == 0) | (d3 == 0) | (d4 == 0)
        if zero.any():
            boxes_touch = (
                (np.minimum(p1[..., 0], p2[..., 0]) <= np.maximum(q1[..., 0], q2[..., 0]))
                & (np.maximum(p1[..., 0], p2[..., 0]) >= np.minimum(q1[..., 0], q2[..., 0]))
                & (np.minimum(p1[..., 1], p2[..., 1]) <= np.maximum(q1[..., 1], q2[..., 1]))
                & (np.maximum(p1[..., 1], p2[..., 1]) >= np.minimum(q1[..., 1], q2[..., 1]))
            )
            for i, j in zip(*np.nonzero(zero & boxes_touch)):
                sa = seg_a[start + i]
                sb = seg_b[j]
                if segments_intersect(
                    (sa[0], sa[1]), (sa[2], sa[3]), (sb[0], sb[1]), (sb[2], sb[3])
                ):
                    return True
    return False


def _bulk_points_on_segments(pts, segs) -> bool:
    P = np.asarray(pts, dtype=float)
    S = np.asarray(segs, dtype=float).reshape(len(segs), 4)
    q1 = S[None, :, 0:2]
    q2 = S[None, :, 2:4]
    p = P[:, None, :]
    cross = _cross2(q2 - q1, p - q1)
    on = (
        (cross == 0.0)
        & (p[..., 0] >= np.minimum(q1[..., 0], q2[..., 0]))
        & (p[..., 0] <= np.maximum(q1[..., 0], q2[..., 0]))
        & (p[..., 1] >= np.minimum(q1[..., 1], q2[..., 1]))
        & (p[..., 1] <= np.maximum(q1[..., 1], q2[..., 1]))
    )
    return bool(on.any())


def intersects(a: Geometry, b: Geometry) -> bool:
    """True iff the shapes share at least one point (polygons are filled)."""
    check_srid(a.srid, b.srid)
    pts_a, segs_a, polys_a = decompose(a)
    pts_b, segs_b, polys_b = decompose(b)
    if segs_a and segs_b:
        if len(segs_a) * len(segs_b) > 2000:
            if _bulk_segments_intersect(
                [s[0] + s[1] for s in segs_a], [s[0] + s[1] for s in segs_b]
            ):
                return True
        else:
            for p1, p2 in segs_a:
                for q1, q2 in segs_b:
                    if segments_intersect(p1, p2, q1, q2):
                        return True
    if pts_a and segs_b:
        if len(pts_a) * len(segs_b) > 2000:
            if _bulk_points_on_segments(pts_a, [s[0] + s[1] for s in segs_b]):
                return True
        else:
            for (px, py) in pts_a:
                for q1, q2 in segs_b:
                    if _on_segment(px, py, *q1, *q2):
                        return True
    if pts_b and segs_a:
        if len(pts_b) * len(segs_a) > 2000:
            if _bulk_points_on_segments(pts_b, [s[0] + s[1] for s in segs_a]):
                return True
        else:
            for (px, py) in pts_b:
                for q1, q2 in segs_a:
                    if _on_segment(px, py, *q1, *q2):
                        return True
    if pts_a and pts_b:
        if set(pts_a) & set(pts_b):
            return True
    for poly in polys_b:
        xs = np.array([p[0] for p in pts_a])
        ys = np.array([p[1] for p in pts_a])
        if len(xs) and points_in_polygon(xs, ys, poly).any():
            return True
    for poly in polys_a:
        xs = np.array([p[0] for p in pts_b])
        ys = np.array([p[1] for p in pts_b])
        if len(xs) and points_in_polygon(xs, ys, poly).any():
            return True
    return False


def distance(a: Geometry, b: Geometry) -> float:
    """Minimum Euclidean distance between two geometries; 0 when they intersect."""
    check_srid(a.srid, b.srid)
    if intersects(a, b):
        return 0.0
    pts_a, segs_a, _ = decompose(a)
    pts_b, segs_b, _ = decompose(b)
    best = np.inf
    arr_a = np.asarray(pts_a, dtype=float)
    arr_b = np.asarray(pts_b, dtype=float)
    if len(arr_a) and len(arr_b):
        if len(arr_a) * len(arr_b) <= 4_000_000:
            diff = arr_a[:, None, :] - arr_b[None, :, :]
            best = float(np.einsum("nmj,nmj->nm", diff, diff).min())
        else:
            for pa in arr_a:
                diff = arr_b - pa
                best = min(best, float(np.einsum("mj,mj->m", diff, diff).min()))
    if segs_b and len(arr_a):
        best = min(best, _points_to_segs_min_sq(arr_a, np.asarray([s[0] + s[1] for s in segs_b])))
    if segs_a and len(arr_b):
        best = min(best, _points_to_segs_min_sq(arr_b, np.asarray([s[0] + s[1] for s in segs_a])))
    return float(np.sqrt(best))


def segment_crossing_params(p0, p1, a, b):
    """Parameters t in [0, 1] where p0 + t*(p1-p0) meets segment ab.

    Collinear overlap contributes both overlap endpoints.
    """
    rx, ry = p1[0] - p0[0], p1[1] - p0[1]
    sx, sy = b[0] - a[0], b[1] - a[1]
    denom = rx * sy - ry * sx
    qpx, qpy = a[0] - p0[0], a[1] - p0[1]
    if denom == 0.0:
        if qpx * ry - qpy * rx != 0.0:
            return []
        # collinear: project ab onto the direction of p
        rr = rx * rx + ry * ry
        if rr == 0.0:
            return []
        t0 = (qpx * rx + qpy * ry) / rr
        t1 = ((b[0] - p0[0]) * rx + (b[1] - p0[1]) * ry) / rr
        lo, hi = min(t0, t1), max(t0, t1)
        out = []
        for t in (lo, hi):
            if 0.0 <= t <= 1.0:
                out.append(t)
        return out
    t = (qpx * sy - qpy * sx) / denom
    u = (qpx * ry - qpy * rx) / denom
    if 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0:
        return [t]
    return []

"""Temporal geometry points: the moving-object type and its spatial operators.

A TGeomPoint wraps a temporal value whose base values are points.  The
``kind`` tag distinguishes the moving-point flavor (linear interpolation is
its default and step sequences are marked in text form) from the general
temporal-geometry flavor (step is the default and never marked).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import temporal as tm
from .boxes import STBox
from .geom import (
    GeometryCollection,
    LineString,
    Point,
    Polygon,
    check_srid,
    intersects,
    point_in_polygon,
    segment_crossing_params,
    _walk,
)
from .spans import Span
from .temporal import TInstant, TSequence, TSequenceSet

KINDS = ("tgeompoint", "tgeometry")


@dataclass(frozen=True)
class TGeomPoint:
    temporal: tm.TemporalValue
    srid: Optional[int] = None
    kind: str = "tgeompoint"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown temporal geometry kind: {self.kind!r}")
        for seq in tm._as_sequences(self.temporal):
            if seq.basetype != "geompoint":
                raise ValueError("temporal geometry requires point values")

    def _with(self, temporal) -> Optional[TGeomPoint]:
        if temporal is None:
            return None
        return TGeomPoint(temporal, self.srid, self.kind)


def tgeometry_from(g: Point, span: Span, interp: str) -> TGeomPoint:
    """Constant temporal geometry over a time span."""
    if not isinstance(g, Point):
        raise ValueError("tgeometry constructor requires a point geometry")
    if interp not in ("step", "linear"):
        raise ValueError("interp must be 'step' or 'linear'")
    p = Point(g.x, g.y)
    if span.lower == span.upper:
        tv = TInstant(p, span.lower)
    else:
        tv = TSequence(
            (TInstant(p, span.lower), TInstant(p, span.upper)),
            span.lower_inc,
            span.upper_inc,
            interp,
        )
    return TGeomPoint(tv, srid=g.srid, kind="tgeometry")


def at_time(x, span: Span):
    """Restrict a temporal value or temporal point to a time span."""
    if isinstance(x, TGeomPoint):
        return x._with(tm.at_time(x.temporal, span))
    return tm.at_time(x, span)


def at_values(x, v):
    """Restrict a temporal value or temporal point to a base value."""
    if isinstance(x, TGeomPoint):
        check_srid(x.srid, getattr(v, "srid", None))
        return x._with(tm.at_values(x.temporal, Point(v.x, v.y)))
    return tm.at_values(x, v)


def value_at_timestamp(x, t: int):
    if isinstance(x, TGeomPoint):
        v = tm.value_at_timestamp(x.temporal, t)
        if v is None:
            return None
        return Point(v.x, v.y, x.srid)
    return tm.value_at_timestamp(x, t)


def trajectory(tp: TGeomPoint):
    """The purely spatial trace: linestrings for linear motion, distinct
    points for step or discrete sequences."""
    srid = tp.srid
    parts = []
    seqs = tm._as_sequences(tp.temporal)
    if seqs[0].interp == "linear":
        for seq in seqs:
            verts = [(i.value.x, i.value.y) for i in seq.instants]
            dedup = [verts[0]]
            for v in verts[1:]:
                if v != dedup[-1]:
                    dedup.append(v)
            if len(dedup) == 1:
                parts.append(Point(dedup[0][0], dedup[0][1], srid))
            else:
                parts.append(LineString(tuple(dedup), srid))
    else:
        seen = []
        for seq in seqs:
            for inst in seq.instants:
                xy = (inst.value.x, inst.value.y)
                if xy not in seen:
                    seen.append(xy)
        parts = [Point(x, y, srid) for x, y in seen]
    if len(parts) == 1:
        return parts[0]
    return GeometryCollection(tuple(parts), srid)


def length(tp: TGeomPoint) -> float:
    """Distance traveled: summed segment lengths of linear sequences."""
    total = 0.0
    for seq in tm._as_sequences(tp.temporal):
        if seq.interp != "linear":
            continue
        for a, b in zip(seq.instants, seq.instants[1:]):
            total += math.hypot(b.value.x - a.value.x, b.value.y - a.value.y)
    return total


def to_stbox(tp: TGeomPoint) -> STBox:
    xs, ys = [], []
    for seq in tm._as_sequences(tp.temporal):
        for inst in seq.instants:
            xs.append(inst.value.x)
            ys.append(inst.value.y)
    return STBox(
        x=(min(xs), max(xs)),
        y=(min(ys), max(ys)),
        t=tm.to_tstzspan(tp.temporal),
        srid=tp.srid,
    )


def geometry_to_stbox(g) -> STBox:
    xs, ys = [], []
    for part in _walk(g):
        if isinstance(part, Point):
            xs.append(part.x)
            ys.append(part.y)
        elif isinstance(part, LineString):
            xs.extend(p[0] for p in part.points)
            ys.extend(p[1] for p in part.points)
        else:
            for ring in part.rings():
                xs.extend(p[0] for p in ring)
                ys.extend(p[1] for p in ring)
    return STBox(x=(min(xs), max(xs)), y=(min(ys), max(ys)), srid=g.srid)


def _polygons_of(g):
    polys = [p for p in _walk(g) if isinstance(p, Polygon)]
    if not polys:
        raise ValueError("at_geometry requires a polygon or collection of polygons")
    return polys


def _inside(xy, polys) -> bool:
    return any(point_in_polygon(xy, poly) for poly in polys)


def _segment_inside_spans(a: TInstant, b: TInstant, polys):
    """Closed time spans within [a.t, b.t] where the moving point is inside."""
    p0 = (a.value.x, a.value.y)
    p1 = (b.value.x, b.value.y)
    dt = b.t - a.t
    cuts = {0.0, 1.0}
    for poly in polys:
        for ring in poly.rings():
            for e0, e1 in zip(ring, ring[1:]):
                for tau in segment_crossing_params(p0, p1, e0, e1):
                    cuts.add(min(1.0, max(0.0, tau)))
    taus = sorted(cuts)
    spans = []
    for lo, hi in zip(taus, taus[1:]):
        mid = (lo + hi) / 2.0
        mx = p0[0] + (p1[0] - p0[0]) * mid
        my = p0[1] + (p1[1] - p0[1]) * mid
        if _inside((mx, my), polys):
            spans.append((a.t + round(lo * dt), a.t + round(hi * dt)))
    # isolated boundary touches between two outside stretches
    for tau in taus:
        tx = p0[0] + (p1[0] - p0[0]) * tau
        ty = p0[1] + (p1[1] - p0[1]) * tau
        if _inside((tx, ty), polys):
            t_us = a.t + round(tau * dt)
            if not any(lo <= t_us <= hi for lo, hi in spans):
                spans.append((t_us, t_us))
    spans.sort()
    return spans


def at_geometry(tp: TGeomPoint, g) -> Optional[TGeomPoint]:
    """Restrict a temporal point to the times it lies inside a polygonal
    region (boundaries count as inside)."""
    check_srid(tp.srid, g.srid)
    polys = _polygons_of(g)
    tv = tp.temporal

    if isinstance(tv, TInstant):
        return tp if _inside((tv.value.x, tv.value.y), polys) else None

    pieces = []
    for seq in tm._as_sequences(tv):
        if seq.interp == "discrete":
            hits = tuple(
                i for i in seq.instants if _inside((i.value.x, i.value.y), polys)
            )
            if hits:
                pieces.append(TSequence(hits, interp="discrete"))
            continue
        if seq.interp == "step":
            runs = tm.runs_where(seq, lambda p: _inside((p.x, p.y), polys))
            for lo, hi, lo_inc, hi_inc in runs:
                clipped = tm.at_time(seq, Span("timestamptz", lo, hi, lo_inc, hi_inc))
                if clipped is not None:
                    pieces.append(clipped)
            continue
        spans = []
        for a, b in zip(seq.instants, seq.instants[1:]):
            spans.extend(_segment_inside_spans(a, b, polys))
        if len(seq.instants) == 1:
            inst = seq.instants[0]
            if _inside((inst.value.x, inst.value.y), polys):
                spans.append((inst.t, inst.t))
        for lo, hi in _merge_ranges(spans):
            clipped = tm.at_time(seq, Span("timestamptz", lo, hi))
            if clipped is not None:
                pieces.append(clipped)

    if not pieces:
        return None
    if len(pieces) == 1 and (
        pieces[0].interp == "discrete" or isinstance(tv, TSequence)
    ):
        return tp._with(pieces[0])
    return tp._with(TSequenceSet(tuple(pieces)))


def _merge_ranges(ranges):
    if not ranges:
        return []
    ranges = sorted(ranges)
    out = [list(ranges[0])]
    for lo, hi in ranges[1:]:
        if lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


def _true_intervals_linear(pa: TSequence, pb: TSequence, d: float):
    """Closed intervals where the aligned linear sequences come within d."""
    d_sq = d * d
    out = []
    for i in range(len(pa.instants) - 1):
        a0, a1 = pa.instants[i], pa.instants[i + 1]
        b0, b1 = pb.instants[i], pb.instants[i + 1]
        t0, t1 = a0.t, a1.t
        dt = t1 - t0
        px = a0.value.x - b0.value.x
        py = a0.value.y - b0.value.y
        vx = (a1.value.x - b1.value.x) - px
        vy = (a1.value.y - b1.value.y) - py
        aa = vx * vx + vy * vy
        bb = 2.0 * (px * vx + py * vy)
        cc = px * px + py * py - d_sq
        if aa == 0.0:
            if cc <= 0.0:
                out.append((t0, t1))
            continue
        disc = bb * bb - 4.0 * aa * cc
        if disc < 0.0:
            continue  # never within d on this piece (aa > 0 opens upward)
        sq = math.sqrt(disc)
        # citardauq-style split avoids cancellation when bb dominates
        if bb >= 0.0:
            q = -0.5 * (bb + sq)
        else:
            q = -0.5 * (bb - sq)
        r1 = q / aa
        r2 = cc / q if q != 0.0 else r1
        lo, hi = min(r1, r2), max(r1, r2)
        lo = max(lo, 0.0)
        hi = min(hi, 1.0)
        if lo > hi:
            continue
        t_lo = t0 + round(lo * dt)
        t_hi = t0 + round(hi * dt)
        if t_lo > t_hi:
            t_lo = t_hi
        out.append((t_lo, t_hi))
    return out


def t_dwithin(a: TGeomPoint, b: TGeomPoint, d: float):
    """Temporal boolean: whether the two moving points are within distance d.

    Evaluated per aligned segment over the common time domain; linear
    interpolation is used whenever either input is linear.  Returns None
    when the time domains are disjoint.
    """
    check_srid(a.srid, b.srid)
    if d < 0:
        raise ValueError("distance must be non-negative")
    if tm._is_discrete(a.temporal) or tm._is_discrete(b.temporal):
        sync = tm.synchronize(a.temporal, b.temporal)
        if sync is None:
            return None
        sa, sb = sync
        insts = tuple(
            TInstant(
                math.hypot(ia.value.x - ib.value.x, ia.value.y - ib.value.y) <= d,
                ia.t,
            )
            for ia, ib in zip(sa.instants, sb.instants)
        )
        return TSequence(insts, interp="discrete")

    pieces = []
    for pa, pb, span in tm.aligned_piece_pairs(a.temporal, b.temporal):
        if pa.interp == "step" and pb.interp == "step":
            d_sq = d * d
            insts = tuple(
                TInstant(
                    (ia.value.x - ib.value.x) ** 2 + (ia.value.y - ib.value.y) ** 2
                    <= d_sq,
                    ia.t,
                )
                for ia, ib in zip(pa.instants, pb.instants)
            )
            pieces.append(TSequence(insts, span.lower_inc, span.upper_inc, "step"))
        else:
            true_ranges = _merge_ranges(_true_intervals_linear(pa, pb, d))
            pieces.extend(_bool_pieces(span, true_ranges))
    if not pieces:
        return None
    return TSequenceSet(tuple(pieces))


def _bool_pieces(span: Span, true_ranges):
    """Step tbool sequences covering span: true on the given closed ranges,
    false elsewhere."""
    pieces = []
    cursor = span.lower
    cursor_inc = span.lower_inc
    for lo, hi in true_ranges:
        lo_inc = span.lower_inc if lo == span.lower else True
        hi_inc = span.upper_inc if hi == span.upper else True
        if (lo, not lo_inc) > (cursor, not cursor_inc):
            pieces.append(_const_bool(cursor, lo, cursor_inc, not lo_inc, False))
        pieces.append(_const_bool(lo, hi, lo_inc, hi_inc, True))
        cursor, cursor_inc = hi, not hi_inc
    if (cursor, not cursor_inc) < (span.upper, span.upper_inc):
        pieces.append(_const_bool(cursor, span.upper, cursor_inc, span.upper_inc, False))
    return [p for p in pieces if p is not None]


def _const_bool(lo: int, hi: int, lo_inc: bool, hi_inc: bool, value: bool):
    if lo > hi:
        return None
    if lo == hi:
        if not (lo_inc and hi_inc):
            return None
        return TSequence((TInstant(value, lo),), interp="step")
    return TSequence(
        (TInstant(value, lo), TInstant(value, hi)), lo_inc, hi_inc, "step"
    )


def e_dwithin(a: TGeomPoint, b: TGeomPoint, d: float) -> bool:
    """Whether the two moving points are ever within distance d."""
    td = t_dwithin(a, b, d)
    if td is None:
        return False
    return tm.when_true(td) is not None


def e_intersects(tp: TGeomPoint, g) -> bool:
    """Whether the moving point's trace ever touches the geometry."""
    return intersects(trajectory(tp), g)

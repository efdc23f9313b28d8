"""Value-time (TBox) and spatiotemporal (STBox) bounding boxes.

Spatial ranges are closed float intervals; time dimensions are spans and
keep their inclusivity flags.  Comparison operators only look at the
dimensions present in both operands; a dimension carried by a single
operand is ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .geom import check_srid
from .spans import Span
from .timetypes import Interval


@dataclass(frozen=True)
class STBox:
    x: Optional[Tuple[float, float]] = None
    y: Optional[Tuple[float, float]] = None
    t: Optional[Span] = None
    srid: Optional[int] = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("stbox spatial dims require both x and y")
        if self.x is None and self.t is None:
            raise ValueError("stbox needs a spatial or temporal dimension")
        for name in ("x", "y"):
            rng = getattr(self, name)
            if rng is not None:
                lo, hi = float(rng[0]), float(rng[1])
                if lo > hi:
                    raise ValueError("stbox range min > max")
                object.__setattr__(self, name, (lo, hi))
        if self.t is not None and self.t.basetype != "timestamptz":
            raise ValueError("stbox time dimension must be a timestamptz span")

    @property
    def has_xy(self) -> bool:
        return self.x is not None


@dataclass(frozen=True)
class TBox:
    v: Optional[Span] = None
    t: Optional[Span] = None

    def __post_init__(self):
        if self.v is None and self.t is None:
            raise ValueError("tbox needs a value or temporal dimension")
        if self.v is not None and self.v.basetype not in ("int", "float"):
            raise ValueError("tbox value dimension must be int or float")
        if self.t is not None and self.t.basetype != "timestamptz":
            raise ValueError("tbox time dimension must be a timestamptz span")


def expand_space(b: STBox, d: float) -> STBox:
    """Widen both spatial ranges by d on each side; time is untouched."""
    if not b.has_xy:
        raise ValueError("expand_space requires spatial dimensions")
    x = (b.x[0] - d, b.x[1] + d)
    y = (b.y[0] - d, b.y[1] + d)
    if x[0] > x[1] or y[0] > y[1]:
        raise ValueError("expansion collapses the box")
    return STBox(x=x, y=y, t=b.t, srid=b.srid)


def expand_time(b, iv: Interval):
    """Widen the temporal span of a TBox or STBox by an interval on each side."""
    if b.t is None:
        raise ValueError("expand_time requires a temporal dimension")
    t = Span("timestamptz", b.t.lower - iv.us, b.t.upper + iv.us, b.t.lower_inc, b.t.upper_inc)
    if isinstance(b, STBox):
        return STBox(x=b.x, y=b.y, t=t, srid=b.srid)
    return TBox(v=b.v, t=t)


def _ranges_overlap(a, b) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def overlaps(a, b) -> bool:
    """The ``&&`` operator: every dimension present in both boxes intersects."""
    if isinstance(a, STBox) and isinstance(b, STBox):
        check_srid(a.srid, b.srid)
        if a.x is not None and b.x is not None:
            if not (_ranges_overlap(a.x, b.x) and _ranges_overlap(a.y, b.y)):
                return False
        if a.t is not None and b.t is not None:
            if not a.t.overlaps(b.t):
                return False
        return True
    if isinstance(a, TBox) and isinstance(b, TBox):
        if a.v is not None and b.v is not None and not a.v.overlaps(b.v):
            return False
        if a.t is not None and b.t is not None and not a.t.overlaps(b.t):
            return False
        return True
    raise TypeError("overlaps expects two boxes of the same family")


def _range_contains(outer, inner) -> bool:
    return outer[0] <= inner[0] and inner[1] <= outer[1]


def contains(a, b) -> bool:
    """Every dimension shared by both boxes of b lies within a."""
    if isinstance(a, STBox) and isinstance(b, STBox):
        check_srid(a.srid, b.srid)
        if a.x is not None and b.x is not None:
            if not (_range_contains(a.x, b.x) and _range_contains(a.y, b.y)):
                return False
        if a.t is not None and b.t is not None:
            if not a.t.contains_span(b.t):
                return False
        return True
    if isinstance(a, TBox) and isinstance(b, TBox):
        if a.v is not None and b.v is not None and not a.v.contains_span(b.v):
            return False
        if a.t is not None and b.t is not None and not a.t.contains_span(b.t):
            return False
        return True
    raise TypeError("contains expects two boxes of the same family")


def _span_hull(a: Span, b: Span) -> Span:
    lo, lo_inc = min((a.lower, not a.lower_inc), (b.lower, not b.lower_inc))
    hi, hi_inc = max((a.upper, a.upper_inc), (b.upper, b.upper_inc))
    return Span(a.basetype, lo, hi, not lo_inc, hi_inc)


def union_mbr(a: STBox, b: STBox) -> STBox:
    """Per-axis hull of two boxes with identical dimensionality."""
    check_srid(a.srid, b.srid)
    if (a.x is None) != (b.x is None) or (a.t is None) != (b.t is None):
        raise ValueError("union_mbr requires matching dimensionality")
    x = y = t = None
    if a.x is not None:
        x = (min(a.x[0], b.x[0]), max(a.x[1], b.x[1]))
        y = (min(a.y[0], b.y[0]), max(a.y[1], b.y[1]))
    if a.t is not None:
        t = _span_hull(a.t, b.t)
    return STBox(x=x, y=y, t=t, srid=a.srid)

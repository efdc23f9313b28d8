"""Ordered ranges and collections over a base type.

Three value families share one base-type vocabulary: ``Span`` (a single
range with inclusivity flags), ``Set`` (a sorted duplicate-free collection)
and ``SpanSet`` (a normalized list of disjoint, non-adjacent spans).
Discrete bases (int, bigint, date) are canonicalized to lower-inclusive /
upper-exclusive form internally and rendered back inclusive by the text
layer.  All values are immutable.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Any, Iterable, Optional, Sequence

from .timetypes import Interval, date_to_timestamp, timestamp_to_date

SPAN_BASES = ("int", "bigint", "float", "date", "timestamptz")
SET_BASES = SPAN_BASES + ("text", "geompoint")

_DISCRETE = {"int", "bigint", "date"}

_INT4_MIN, _INT4_MAX = -(2**31), 2**31 - 1
_INT8_MIN, _INT8_MAX = -(2**63), 2**63 - 1


def _succ(basetype: str, v):
    if basetype == "date":
        return v + timedelta(days=1)
    return v + 1


def _sort_key(basetype: str, v):
    if basetype == "geompoint":
        return (v.x, v.y)
    return v


@dataclass(frozen=True)
class Span:
    """A range of a base type with bound inclusivity flags."""

    basetype: str
    lower: Any
    upper: Any
    lower_inc: bool = True
    upper_inc: bool = True

    def __post_init__(self):
        if self.basetype not in SPAN_BASES:
            raise ValueError(f"unsupported span base type: {self.basetype!r}")
        if self.basetype in _DISCRETE:
            # canonical form for discrete bases: [lower, upper)
            if not self.lower_inc:
                object.__setattr__(self, "lower", _succ(self.basetype, self.lower))
                object.__setattr__(self, "lower_inc", True)
            if self.upper_inc:
                object.__setattr__(self, "upper", _succ(self.basetype, self.upper))
                object.__setattr__(self, "upper_inc", False)
            if not self.lower < self.upper:
                raise ValueError("invalid span bounds: lower >= upper")
        else:
            if self.lower > self.upper or (
                self.lower == self.upper and not (self.lower_inc and self.upper_inc)
            ):
                raise ValueError("invalid span bounds: lower > upper")

    def contains(self, v) -> bool:
        if v < self.lower or (v == self.lower and not self.lower_inc):
            return False
        if v > self.upper or (v == self.upper and not self.upper_inc):
            return False
        return True

    def contains_span(self, other: Span) -> bool:
        if (other.lower, not other.lower_inc) < (self.lower, not self.lower_inc):
            return False
        if (other.upper, other.upper_inc) > (self.upper, self.upper_inc):
            return False
        return True

    def overlaps(self, other: Span) -> bool:
        if self.upper < other.lower or other.upper < self.lower:
            return False
        if self.upper == other.lower:
            return self.upper_inc and other.lower_inc
        if other.upper == self.lower:
            return other.upper_inc and self.lower_inc
        return True

    def width(self):
        return self.upper - self.lower


@dataclass(frozen=True)
class Set:
    """A sorted, duplicate-free, non-empty collection of base values."""

    basetype: str
    elements: tuple = ()
    srid: Optional[int] = None

    def __post_init__(self):
        if self.basetype not in SET_BASES:
            raise ValueError(f"unsupported set base type: {self.basetype!r}")
        if not self.elements:
            raise ValueError("empty set rejected")
        if self.srid is not None and self.basetype != "geompoint":
            raise ValueError("srid only valid for geometry sets")
        key = lambda v: _sort_key(self.basetype, v)
        ordered = sorted(self.elements, key=key)
        deduped = [ordered[0]]
        for v in ordered[1:]:
            if key(v) != key(deduped[-1]):
                deduped.append(v)
        object.__setattr__(self, "elements", tuple(deduped))

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class SpanSet:
    """Disjoint, sorted spans; overlapping or adjacent inputs are merged."""

    basetype: str
    spans: tuple = ()

    def __post_init__(self):
        if not self.spans:
            raise ValueError("empty spanset rejected")
        if any(s.basetype != self.basetype for s in self.spans):
            raise ValueError("mixed base types in spanset")
        object.__setattr__(self, "spans", _normalize_spans(self.spans))

    def contains(self, v) -> bool:
        return any(s.contains(v) for s in self.spans)

    def __len__(self) -> int:
        return len(self.spans)


def _normalize_spans(spans: Sequence[Span]) -> tuple:
    ordered = sorted(spans, key=lambda s: (s.lower, not s.lower_inc))
    merged = [ordered[0]]
    for s in ordered[1:]:
        last = merged[-1]
        touches = s.lower < last.upper or (
            s.lower == last.upper and (last.upper_inc or s.lower_inc)
        )
        if touches:
            if (s.upper, s.upper_inc) > (last.upper, last.upper_inc):
                merged[-1] = Span(last.basetype, last.lower, s.upper, last.lower_inc, s.upper_inc)
        else:
            merged.append(s)
    return tuple(merged)


def spanset_union_normalize(spans: Iterable[Span]) -> SpanSet:
    spans = list(spans)
    if not spans:
        raise ValueError("empty spanset rejected")
    return SpanSet(spans[0].basetype, tuple(spans))


def span_contains(span: Span, v) -> bool:
    """The ``@>`` operator between a span and a base value."""
    return span.contains(v)


def value_to_set(v, basetype: Optional[str] = None) -> Set:
    if basetype is None:
        basetype = _infer_base(v)
    return Set(basetype, (v,))


def _infer_base(v) -> str:
    if isinstance(v, bool):
        raise ValueError("bool has no set type")
    if isinstance(v, int):
        return "int" if _INT4_MIN <= v <= _INT4_MAX else "bigint"
    if isinstance(v, float):
        return "float"
    if isinstance(v, str):
        return "text"
    if isinstance(v, date):
        return "date"
    if hasattr(v, "x") and hasattr(v, "y"):
        return "geompoint"
    raise ValueError(f"no set base type for {type(v).__name__}")


def shift_scale(s: Set, shift=None, width=None) -> Set:
    """Shift a set's start and rescale its extent to ``width``.

    Timestamp sets take Interval arguments, numeric sets take numbers.
    Single-element sets ignore ``width``.
    """
    if shift is None and width is None:
        raise ValueError("shift_scale requires shift and/or width")
    if s.basetype == "timestamptz":
        shift_v = shift.us if isinstance(shift, Interval) else (shift or 0)
        width_v = width.us if isinstance(width, Interval) else width
    elif s.basetype in ("int", "bigint", "float"):
        shift_v = shift or 0
        width_v = width
    else:
        raise ValueError(f"shift_scale unsupported for {s.basetype} sets")
    if width_v is not None and width_v <= 0:
        raise ValueError("width must be positive")

    old = s.elements
    start = old[0]
    extent = old[-1] - old[0]
    new_start = start + shift_v
    if width_v is None or len(old) == 1 or extent == 0:
        scale = 1.0
        width_v = extent
    else:
        scale = width_v / extent
    out = []
    for v in old:
        if scale == 1.0:
            nv = v + shift_v
        else:
            nv = new_start + (v - start) * scale
        if s.basetype in ("int", "bigint", "timestamptz"):
            nv = _round_half_away(nv)
        out.append(nv)
    return Set(s.basetype, tuple(out))


def _round_half_away(x) -> int:
    if isinstance(x, int):
        return x
    return int(math.floor(x + 0.5)) if x >= 0 else int(math.ceil(x - 0.5))


_CASTS = {
    ("int", "float"),
    ("float", "int"),
    ("date", "timestamptz"),
    ("timestamptz", "date"),
}


def cast_set(s: Set, target: str) -> Set:
    if (s.basetype, target) not in _CASTS:
        raise ValueError(f"unsupported set cast {s.basetype} -> {target}")
    if target == "float":
        out = [float(v) for v in s.elements]
    elif target == "int":
        out = []
        for v in s.elements:
            r = _round_half_away(v)
            if not _INT4_MIN <= r <= _INT4_MAX:
                raise ValueError(f"float {v} out of int range")
            out.append(r)
    elif target == "timestamptz":
        out = [date_to_timestamp(v) for v in s.elements]
    else:
        out = [timestamp_to_date(v) for v in s.elements]
    return Set(target, tuple(out))


_SET_TAG = {
    "int": 1,
    "bigint": 2,
    "float": 3,
    "date": 4,
    "timestamptz": 5,
    "text": 6,
    "geompoint": 7,
}

_EPOCH_DATE = date(1970, 1, 1)


def canonical_set_bytes(s: Set) -> bytes:
    """Canonical binary form: tag, flags, optional srid, count, fixed-width elements."""
    flags = 1 if s.srid is not None else 0
    head = struct.pack("<BB", _SET_TAG[s.basetype], flags)
    if s.srid is not None:
        head += struct.pack("<i", s.srid)
    head += struct.pack("<I", len(s.elements))
    body = b""
    for v in s.elements:
        if s.basetype == "int":
            body += struct.pack("<i", v)
        elif s.basetype in ("bigint", "timestamptz"):
            body += struct.pack("<q", v)
        elif s.basetype == "float":
            body += struct.pack("<d", v)
        elif s.basetype == "date":
            body += struct.pack("<i", (v - _EPOCH_DATE).days)
        elif s.basetype == "text":
            raw = v.encode("utf-8")
            body += struct.pack("<I", len(raw)) + raw
        else:
            body += struct.pack("<dd", v.x, v.y)
    return head + body


def set_mem_size(s: Set) -> int:
    """Size in bytes of the canonical serialized representation."""
    return len(canonical_set_bytes(s))

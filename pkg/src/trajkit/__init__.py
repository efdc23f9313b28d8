"""trajkit: a moving-object data engine.

Spans, sets and spansets over ordered base types; temporal values with
discrete, step and linear interpolation; a planar geometry kernel;
value-time and spatiotemporal bounding boxes; an R-tree overlap index;
and literal text formats tying them together.  The ``workbench``
subpackage adds trip ingestion, benchmark queries and a CLI.
"""

from .boxes import STBox, TBox, contains, expand_space, expand_time, overlaps, union_mbr
from .geom import (
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
from .literals import Literal, ParseError, fmt_float, parse, serialize, serialize_ewkt
from .rtree import BulkBuilder, ColumnRef, IndexScanBinding, RTree, bulk_build, scan_plan
from .spans import (
    Set,
    Span,
    SpanSet,
    cast_set,
    set_mem_size,
    shift_scale,
    span_contains,
    spanset_union_normalize,
    value_to_set,
)
from .temporal import (
    TInstant,
    TSequence,
    TSequenceSet,
    duration,
    end_timestamp,
    start_timestamp,
    synchronize,
    to_tstzspan,
    when_true,
)
from .timetypes import (
    Interval,
    format_interval,
    format_timestamp,
    parse_interval,
    parse_timestamp,
)
from .tpoint import (
    TGeomPoint,
    at_geometry,
    at_time,
    at_values,
    value_at_timestamp,
    e_dwithin,
    e_intersects,
    geometry_to_stbox,
    length,
    t_dwithin,
    tgeometry_from,
    to_stbox,
    trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "STBox",
    "TBox",
    "contains",
    "expand_space",
    "expand_time",
    "overlaps",
    "union_mbr",
    "GeometryCollection",
    "LineString",
    "Point",
    "Polygon",
    "SridMismatch",
    "collect",
    "distance",
    "intersects",
    "point_in_polygon",
    "points_in_polygon",
    "Literal",
    "ParseError",
    "fmt_float",
    "parse",
    "serialize",
    "serialize_ewkt",
    "BulkBuilder",
    "ColumnRef",
    "IndexScanBinding",
    "RTree",
    "bulk_build",
    "scan_plan",
    "Set",
    "Span",
    "SpanSet",
    "cast_set",
    "set_mem_size",
    "shift_scale",
    "span_contains",
    "spanset_union_normalize",
    "value_to_set",
    "TInstant",
    "TSequence",
    "TSequenceSet",
    "at_time",
    "at_values",
    "duration",
    "end_timestamp",
    "start_timestamp",
    "synchronize",
    "to_tstzspan",
    "value_at_timestamp",
    "when_true",
    "Interval",
    "format_interval",
    "format_timestamp",
    "parse_interval",
    "parse_timestamp",
    "TGeomPoint",
    "at_geometry",
    "e_dwithin",
    "e_intersects",
    "geometry_to_stbox",
    "length",
    "t_dwithin",
    "tgeometry_from",
    "to_stbox",
    "trajectory",
]

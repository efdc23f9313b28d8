"""GeoJSON export: one Feature per result row (RFC 7946)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import List

from ..geom import GEOMETRY_TYPES, GeometryCollection, LineString, Point, Polygon
from ..literals import serialize
from ..spans import Set, Span, SpanSet
from ..temporal import TInstant, TSequence, TSequenceSet
from ..timetypes import Interval, format_timestamp
from ..tpoint import TGeomPoint


def geometry_to_geojson(g) -> dict:
    if isinstance(g, Point):
        return {"type": "Point", "coordinates": [g.x, g.y]}
    if isinstance(g, LineString):
        return {"type": "LineString", "coordinates": [[x, y] for x, y in g.points]}
    if isinstance(g, Polygon):
        return {
            "type": "Polygon",
            "coordinates": [[[x, y] for x, y in ring] for ring in g.rings()],
        }
    if isinstance(g, GeometryCollection):
        return {
            "type": "GeometryCollection",
            "geometries": [geometry_to_geojson(sub) for sub in g.geoms],
        }
    raise TypeError(f"not a geometry: {type(g).__name__}")


def _property_value(v):
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    if isinstance(v, (Span, SpanSet, Set, Interval, TGeomPoint)):
        return serialize(v)
    if isinstance(v, (TInstant, TSequence, TSequenceSet)) or isinstance(v, GEOMETRY_TYPES):
        return serialize(v)
    return str(v)


def export_geojson(rows: List[dict], path, timestamp_keys=("instant",)) -> dict:
    """Write a FeatureCollection; the first geometry-valued column becomes
    the feature geometry, everything else lands in properties."""
    features = []
    for row in rows:
        geometry = None
        props = {}
        for key, value in row.items():
            if geometry is None and isinstance(value, GEOMETRY_TYPES):
                geometry = geometry_to_geojson(value)
            elif key in timestamp_keys and isinstance(value, int):
                props[key] = format_timestamp(value)
            else:
                props[key] = _property_value(value)
        features.append(
            {"type": "Feature", "geometry": geometry, "properties": props}
        )
    fc = {"type": "FeatureCollection", "features": features}
    Path(path).write_text(json.dumps(fc, indent=2), encoding="utf-8")
    return fc

"""Literal text formats: parsing and canonical serialization.

One grammar covers every value family: sets ``{e1, e2}``, spans
``[lo, hi]`` with ``(``/``)`` for open bounds, spansets ``{span, span}``,
temporal instants ``v@t``, discrete sequences ``{v@t, ...}``, continuous
sequences ``[v@t, ...]`` with an optional trailing ``;interp=step``
marker, sequence sets ``{[...], [...]}``, STBOX/TBOX variants, WKT
geometries, intervals and timestamps.  Serialization is canonical:
deterministic, upper-case tags, inclusive bounds rendered with square
brackets, timestamps always ``+00``, floats in shortest round-trip form
with whole numbers printed without a decimal point.

See docs/literals.ebnf for the formal grammar.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from datetime import date
from typing import Any, Optional

from .boxes import STBox, TBox
from .geom import GeometryCollection, LineString, Point, Polygon
from .spans import Set, Span, SpanSet
from .temporal import TInstant, TSequence, TSequenceSet
from .timetypes import (
    Interval,
    format_date,
    format_interval,
    format_timestamp,
    parse_date,
    parse_interval,
    parse_timestamp,
)
from .tpoint import TGeomPoint


class ParseError(ValueError):
    """Literal syntax error carrying the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Literal:
    kind: str
    payload: Any


_SET_KINDS = {
    "intset": "int",
    "bigintset": "bigint",
    "floatset": "float",
    "textset": "text",
    "dateset": "date",
    "tstzset": "timestamptz",
    "geomset": "geompoint",
}
_SPAN_KINDS = {
    "intspan": "int",
    "bigintspan": "bigint",
    "floatspan": "float",
    "datespan": "date",
    "tstzspan": "timestamptz",
}
_SPANSET_KINDS = {
    "intspanset": "int",
    "bigintspanset": "bigint",
    "floatspanset": "float",
    "datespanset": "date",
    "tstzspanset": "timestamptz",
}
_TEMPORAL_KINDS = {
    "tbool": "bool",
    "tint": "int",
    "tfloat": "float",
    "ttext": "text",
    "tgeompoint": "geompoint",
    "tgeometry": "geompoint",
}

_NUM_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INT_RE = re.compile(r"[+-]?\d+")
_TS_RE = re.compile(
    r"(\d{4})-(\d{2})-(\d{2})"
    r"(?:[ T]\d{2}:\d{2}(?::\d{2}(?:\.\d{1,6})?)?)?"
    r"(?:Z|[+-]\d{2}(?::?\d{2})?)?"
)
_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}")
_SRID_RE = re.compile(r"SRID=(\d+);", re.IGNORECASE)
_WORD_RE = re.compile(r"[A-Za-z]+")


def fmt_float(x: float) -> str:
    """Shortest decimal that round-trips; whole values drop the point."""
    if math.isfinite(x) and x == int(x):
        return str(int(x))
    return repr(x)


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.pos)

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def match_word(self, word: str) -> bool:
        end = self.pos + len(word)
        if self.text[self.pos : end].lower() == word.lower():
            self.pos = end
            return True
        return False

    def take_re(self, regex, what: str):
        m = regex.match(self.text, self.pos)
        if m is None:
            self.error(f"expected {what}")
        self.pos = m.end()
        return m


def _scan_int(cur: _Cursor) -> int:
    return int(cur.take_re(_INT_RE, "integer")[0])


def _scan_float(cur: _Cursor) -> float:
    return float(cur.take_re(_NUM_RE, "number")[0])


def _scan_timestamp(cur: _Cursor) -> int:
    m = cur.take_re(_TS_RE, "timestamp")
    try:
        return parse_timestamp(m[0])
    except ValueError as exc:
        raise ParseError(str(exc), m.start()) from None


def _scan_date(cur: _Cursor) -> date:
    m = cur.take_re(_DATE_RE, "date")
    try:
        return parse_date(m[0])
    except ValueError as exc:
        raise ParseError(str(exc), m.start()) from None


def _scan_quoted(cur: _Cursor) -> str:
    cur.expect('"')
    out = []
    while True:
        if cur.eof():
            cur.error("unterminated string")
        ch = cur.text[cur.pos]
        cur.pos += 1
        if ch == "\\":
            if cur.eof():
                cur.error("dangling escape")
            out.append(cur.text[cur.pos])
            cur.pos += 1
        elif ch == '"':
            return "".join(out)
        else:
            out.append(ch)


def _scan_wkt(cur: _Cursor):
    srid = None
    m = _SRID_RE.match(cur.text, cur.pos)
    if m:
        srid = int(m[1])
        cur.pos = m.end()
    cur.skip_ws()
    word = cur.take_re(_WORD_RE, "geometry tag")[0].upper()
    cur.skip_ws()
    if word == "POINT":
        cur.expect("(")
        cur.skip_ws()
        x = _scan_float(cur)
        cur.skip_ws()
        y = _scan_float(cur)
        cur.skip_ws()
        cur.expect(")")
        return Point(x, y, srid)
    if word == "LINESTRING":
        return LineString(tuple(_scan_coord_list(cur)), srid)
    if word == "POLYGON":
        cur.expect("(")
        rings = [tuple(_scan_coord_list(cur))]
        cur.skip_ws()
        while cur.peek() == ",":
            cur.pos += 1
            cur.skip_ws()
            rings.append(tuple(_scan_coord_list(cur)))
            cur.skip_ws()
        cur.expect(")")
        try:
            return Polygon(rings[0], tuple(rings[1:]), srid)
        except ValueError as exc:
            raise ParseError(str(exc), cur.pos) from None
    if word == "GEOMETRYCOLLECTION":
        cur.expect("(")
        geoms = []
        while True:
            cur.skip_ws()
            geoms.append(_scan_wkt(cur))
            cur.skip_ws()
            if cur.peek() == ",":
                cur.pos += 1
                continue
            break
        cur.expect(")")
        return GeometryCollection(tuple(geoms), srid)
    cur.error(f"unknown geometry tag {word!r}")


def _scan_coord_list(cur: _Cursor):
    cur.skip_ws()
    cur.expect("(")
    coords = []
    while True:
        cur.skip_ws()
        x = _scan_float(cur)
        cur.skip_ws()
        y = _scan_float(cur)
        coords.append((x, y))
        cur.skip_ws()
        if cur.peek() == ",":
            cur.pos += 1
            continue
        break
    cur.expect(")")
    return coords


_ELEMENT_SCANNERS = {
    "int": _scan_int,
    "bigint": _scan_int,
    "float": _scan_float,
    "date": _scan_date,
    "timestamptz": _scan_timestamp,
    "text": _scan_quoted,
    "geompoint": _scan_wkt,
}


def _scan_element(cur: _Cursor, basetype: str):
    if basetype in ("timestamptz", "date", "geompoint") and cur.peek() == '"':
        # quoted canonical form; reparse the content
        raw = _scan_quoted(cur)
        sub = _Cursor(raw)
        value = _ELEMENT_SCANNERS[basetype](sub)
        sub.skip_ws()
        if not sub.eof():
            cur.error(f"invalid quoted {basetype} element")
        return value
    return _ELEMENT_SCANNERS[basetype](cur)


def _infer_element_base(cur: _Cursor) -> str:
    ch = cur.peek()
    if ch == '"':
        # peek inside the quotes
        save = cur.pos
        raw = _scan_quoted(cur)
        cur.pos = save
        if _TS_RE.fullmatch(raw.strip()):
            return "timestamptz"
        return "text"
    full = _TS_RE.match(cur.text, cur.pos)
    if full:
        return "timestamptz" if len(full[0]) > 10 else "date"
    if _NUM_RE.match(cur.text, cur.pos):
        m = _NUM_RE.match(cur.text, cur.pos)
        return "float" if any(c in m[0] for c in ".eE") else "int"
    if _WORD_RE.match(cur.text, cur.pos) or _SRID_RE.match(cur.text, cur.pos):
        return "geompoint"
    cur.error("cannot infer element type")


def _parse_set(cur: _Cursor, basetype: Optional[str]) -> Set:
    srid = None
    m = _SRID_RE.match(cur.text, cur.pos)
    if m and (basetype in (None, "geompoint")):
        srid = int(m[1])
        cur.pos = m.end()
        basetype = "geompoint"
        cur.skip_ws()
    cur.expect("{")
    cur.skip_ws()
    if cur.peek() == "}":
        cur.error("empty set literal rejected")
    if basetype is None:
        basetype = _infer_element_base(cur)
    elements = []
    while True:
        cur.skip_ws()
        elements.append(_scan_element(cur, basetype))
        cur.skip_ws()
        if cur.peek() == ",":
            cur.pos += 1
            continue
        break
    cur.expect("}")
    if basetype == "geompoint":
        for p in elements:
            if not isinstance(p, Point):
                cur.error("geometry sets hold points only")
        if srid is None and elements[0].srid is not None:
            srid = elements[0].srid
        elements = [Point(p.x, p.y) for p in elements]
    try:
        return Set(basetype, tuple(elements), srid=srid)
    except ValueError as exc:
        raise ParseError(str(exc), cur.pos) from None


def _parse_span(cur: _Cursor, basetype: Optional[str]) -> Span:
    open_ch = cur.peek()
    if open_ch not in "[(":
        cur.error("expected '[' or '(' opening a span")
    cur.pos += 1
    cur.skip_ws()
    if basetype is None:
        basetype = _infer_element_base(cur)
        if basetype == "text" or basetype == "geompoint":
            cur.error(f"spans of {basetype} are not supported")
    lower = _scan_element(cur, basetype)
    cur.skip_ws()
    cur.expect(",")
    cur.skip_ws()
    upper = _scan_element(cur, basetype)
    cur.skip_ws()
    close_ch = cur.peek()
    if close_ch not in "])":
        cur.error("expected ']' or ')' closing a span")
    cur.pos += 1
    try:
        return Span(basetype, lower, upper, open_ch == "[", close_ch == "]")
    except ValueError as exc:
        raise ParseError(str(exc), cur.pos) from None


def _parse_spanset(cur: _Cursor, basetype: Optional[str]) -> SpanSet:
    cur.expect("{")
    spans = []
    while True:
        cur.skip_ws()
        spans.append(_parse_span(cur, basetype))
        basetype = spans[-1].basetype
        cur.skip_ws()
        if cur.peek() == ",":
            cur.pos += 1
            continue
        break
    cur.expect("}")
    return SpanSet(basetype, tuple(spans))


_BOOL_WORDS = {"t": True, "true": True, "f": False, "false": False}


def _scan_temporal_value(cur: _Cursor, basetype: str):
    if basetype == "bool":
        word = cur.take_re(_WORD_RE, "boolean")[0].lower()
        if word not in _BOOL_WORDS:
            cur.error(f"invalid boolean {word!r}")
        return _BOOL_WORDS[word]
    if basetype == "text":
        return _scan_quoted(cur)
    if basetype == "geompoint":
        g = _scan_wkt(cur)
        if not isinstance(g, Point):
            cur.error("temporal geometry values must be points")
        return g
    if basetype == "int":
        return _scan_int(cur)
    return _scan_float(cur)


def _infer_temporal_base(cur: _Cursor) -> str:
    ch = cur.peek()
    if ch == '"':
        return "text"
    m = _WORD_RE.match(cur.text, cur.pos)
    if m:
        if m[0].lower() in _BOOL_WORDS:
            return "bool"
        return "geompoint"
    if _SRID_RE.match(cur.text, cur.pos):
        return "geompoint"
    m = _NUM_RE.match(cur.text, cur.pos)
    if m:
        return "float" if any(c in m[0] for c in ".eE") else "int"
    cur.error("cannot infer temporal base type")


def _scan_tinstant(cur: _Cursor, basetype: str) -> TInstant:
    value = _scan_temporal_value(cur, basetype)
    cur.skip_ws()
    cur.expect("@")
    cur.skip_ws()
    t = _scan_timestamp(cur)
    return TInstant(value, t)


def _interp_suffix(cur: _Cursor) -> Optional[str]:
    save = cur.pos
    cur.skip_ws()
    if cur.peek() == ";":
        cur.pos += 1
        cur.skip_ws()
        if not cur.match_word("interp=step"):
            cur.error("expected 'interp=step'")
        return "step"
    cur.pos = save
    return None


def _default_interp(basetype: str, kind: str) -> str:
    if kind == "tgeometry":
        return "step"
    return "linear" if basetype in ("float", "geompoint") else "step"


def _scan_sequence(cur: _Cursor, basetype: str, interp: str) -> TSequence:
    open_ch = cur.peek()
    cur.pos += 1
    instants = []
    while True:
        cur.skip_ws()
        instants.append(_scan_tinstant(cur, basetype))
        cur.skip_ws()
        if cur.peek() == ",":
            cur.pos += 1
            continue
        break
    close_ch = cur.peek()
    if close_ch not in "])":
        cur.error("expected ']' or ')' closing a sequence")
    cur.pos += 1
    try:
        return TSequence(tuple(instants), open_ch == "[", close_ch == "]", interp)
    except ValueError as exc:
        raise ParseError(str(exc), cur.pos) from None


def _parse_temporal(cur: _Cursor, kind: str):
    basetype = _TEMPORAL_KINDS.get(kind)
    srid = None
    m = _SRID_RE.match(cur.text, cur.pos)
    if m and kind in ("tgeompoint", "tgeometry", "temporal"):
        srid = int(m[1])
        cur.pos = m.end()
        cur.skip_ws()
        if kind == "temporal":
            kind = "tgeompoint"
            basetype = "geompoint"

    start = cur.pos
    ch = cur.peek()
    if ch == "{":
        cur.pos += 1
        cur.skip_ws()
        seq_set = cur.peek() in "[("
        cur.pos = start
        if basetype is None:
            probe = _Cursor(cur.text)
            probe.pos = start + 1
            probe.skip_ws()
            if seq_set:
                probe.pos += 1
                probe.skip_ws()
            basetype = _infer_temporal_base(probe)
            kind = _kind_for_base(basetype)
        if seq_set:
            cur.expect("{")
            seqs = []
            while True:
                cur.skip_ws()
                seqs.append(_scan_sequence(cur, basetype, "step"))
                cur.skip_ws()
                if cur.peek() == ",":
                    cur.pos += 1
                    continue
                break
            cur.expect("}")
            interp = _interp_suffix(cur) or _default_interp(basetype, kind)
            seqs = [
                TSequence(s.instants, s.lower_inc, s.upper_inc, interp) for s in seqs
            ]
            try:
                value = TSequenceSet(tuple(seqs))
            except ValueError as exc:
                raise ParseError(str(exc), cur.pos) from None
        else:
            cur.expect("{")
            instants = []
            while True:
                cur.skip_ws()
                instants.append(_scan_tinstant(cur, basetype))
                cur.skip_ws()
                if cur.peek() == ",":
                    cur.pos += 1
                    continue
                break
            cur.expect("}")
            try:
                value = TSequence(tuple(instants), interp="discrete")
            except ValueError as exc:
                raise ParseError(str(exc), cur.pos) from None
    elif ch in "[(":
        if basetype is None:
            probe = _Cursor(cur.text)
            probe.pos = start + 1
            probe.skip_ws()
            basetype = _infer_temporal_base(probe)
            kind = _kind_for_base(basetype)
        seq = _scan_sequence(cur, basetype, "step")
        interp = _interp_suffix(cur) or _default_interp(basetype, kind)
        try:
            value = TSequence(seq.instants, seq.lower_inc, seq.upper_inc, interp)
        except ValueError as exc:
            raise ParseError(str(exc), cur.pos) from None
    else:
        if basetype is None:
            basetype = _infer_temporal_base(cur)
            kind = _kind_for_base(basetype)
        value = _scan_tinstant(cur, basetype)

    if basetype == "geompoint":
        value = _strip_point_srids(value)
        return kind, TGeomPoint(value, srid=srid, kind=kind)
    return kind, value


def _kind_for_base(basetype: str) -> str:
    return {
        "bool": "tbool",
        "int": "tint",
        "float": "tfloat",
        "text": "ttext",
        "geompoint": "tgeompoint",
    }[basetype]


def _strip_point_srids(tv):
    def strip_inst(i: TInstant) -> TInstant:
        p = i.value
        if p.srid is not None:
            return TInstant(Point(p.x, p.y), i.t)
        return i

    if isinstance(tv, TInstant):
        return strip_inst(tv)
    if isinstance(tv, TSequence):
        return TSequence(
            tuple(strip_inst(i) for i in tv.instants), tv.lower_inc, tv.upper_inc, tv.interp
        )
    return TSequenceSet(
        tuple(
            TSequence(
                tuple(strip_inst(i) for i in s.instants), s.lower_inc, s.upper_inc, s.interp
            )
            for s in tv.sequences
        )
    )


def _scan_float_pair(cur: _Cursor):
    cur.skip_ws()
    cur.expect("(")
    cur.skip_ws()
    x = _scan_float(cur)
    cur.skip_ws()
    cur.expect(",")
    cur.skip_ws()
    y = _scan_float(cur)
    cur.skip_ws()
    cur.expect(")")
    return x, y


def _parse_stbox(cur: _Cursor) -> STBox:
    srid = None
    m = _SRID_RE.match(cur.text, cur.pos)
    if m:
        srid = int(m[1])
        cur.pos = m.end()
        cur.skip_ws()
    if not cur.match_word("stbox"):
        cur.error("expected STBOX tag")
    cur.skip_ws()
    variant = cur.take_re(_WORD_RE, "stbox variant")[0].upper()
    cur.skip_ws()
    x = y = t = None
    if variant == "X":
        cur.expect("(")
        (xmin, ymin) = _scan_float_pair(cur)
        cur.skip_ws()
        cur.expect(",")
        (xmax, ymax) = _scan_float_pair(cur)
        cur.skip_ws()
        cur.expect(")")
        x, y = (xmin, xmax), (ymin, ymax)
    elif variant == "T":
        cur.expect("(")
        cur.skip_ws()
        t = _parse_span(cur, "timestamptz")
        cur.skip_ws()
        cur.expect(")")
    elif variant == "XT":
        cur.expect("(")
        cur.skip_ws()
        cur.expect("(")
        (xmin, ymin) = _scan_float_pair(cur)
        cur.skip_ws()
        cur.expect(",")
        (xmax, ymax) = _scan_float_pair(cur)
        cur.skip_ws()
        cur.expect(")")
        cur.skip_ws()
        cur.expect(",")
        cur.skip_ws()
        t = _parse_span(cur, "timestamptz")
        cur.skip_ws()
        cur.expect(")")
        x, y = (xmin, xmax), (ymin, ymax)
    else:
        cur.error(f"unknown STBOX variant {variant!r}")
    try:
        return STBox(x=x, y=y, t=t, srid=srid)
    except ValueError as exc:
        raise ParseError(str(exc), cur.pos) from None


def _parse_tbox(cur: _Cursor) -> TBox:
    basetype = None
    if cur.match_word("tboxint"):
        basetype = "int"
    elif cur.match_word("tboxfloat"):
        basetype = "float"
    elif cur.match_word("tbox"):
        basetype = None
    else:
        cur.error("expected TBOX tag")
    cur.skip_ws()
    variant = cur.take_re(_WORD_RE, "tbox variant")[0].upper()
    cur.skip_ws()
    v = t = None
    cur.expect("(")
    cur.skip_ws()
    if variant == "X":
        v = _parse_span(cur, basetype or "float")
    elif variant == "T":
        t = _parse_span(cur, "timestamptz")
    elif variant == "XT":
        v = _parse_span(cur, basetype or "float")
        cur.skip_ws()
        cur.expect(",")
        cur.skip_ws()
        t = _parse_span(cur, "timestamptz")
    else:
        cur.error(f"unknown TBOX variant {variant!r}")
    cur.skip_ws()
    cur.expect(")")
    try:
        return TBox(v=v, t=t)
    except ValueError as exc:
        raise ParseError(str(exc), cur.pos) from None


def _parse_scalar(cur: _Cursor):
    ch = cur.peek()
    if ch == '"':
        return _scan_quoted(cur)
    m = _WORD_RE.match(cur.text, cur.pos)
    if m and m[0].lower() in ("true", "false"):
        cur.pos = m.end()
        return m[0].lower() == "true"
    m = _NUM_RE.match(cur.text, cur.pos)
    if m:
        cur.pos = m.end()
        return float(m[0]) if any(c in m[0] for c in ".eE") else int(m[0])
    cur.error("expected a scalar literal")


def parse(text: str, expected_kind: str) -> Literal:
    """Parse a literal of the expected kind; raises ParseError on bad input."""
    kind = expected_kind.strip().lower()
    cur = _Cursor(text)
    cur.skip_ws()

    if kind in _SET_KINDS or kind == "set":
        value = _parse_set(cur, _SET_KINDS.get(kind))
        kind = _kind_for_set(value)
    elif kind in _SPAN_KINDS or kind == "span":
        value = _parse_span(cur, _SPAN_KINDS.get(kind))
        kind = _kind_for_span(value.basetype)
    elif kind in _SPANSET_KINDS or kind == "spanset":
        value = _parse_spanset(cur, _SPANSET_KINDS.get(kind))
        kind = _kind_for_span(value.basetype) + "set"
    elif kind in _TEMPORAL_KINDS or kind == "temporal":
        kind, value = _parse_temporal(cur, kind)
    elif kind == "stbox":
        value = _parse_stbox(cur)
    elif kind == "tbox":
        value = _parse_tbox(cur)
    elif kind == "geometry":
        value = _scan_wkt(cur)
    elif kind == "interval":
        raw = text.strip().strip("'")
        try:
            return Literal("interval", parse_interval(raw))
        except ValueError as exc:
            raise ParseError(str(exc), 0) from None
    elif kind == "timestamptz":
        value = _scan_timestamp(cur)
    elif kind == "date":
        value = _scan_date(cur)
    elif kind == "scalar":
        value = _parse_scalar(cur)
    else:
        raise ParseError(f"unknown literal kind {expected_kind!r}", 0)

    cur.skip_ws()
    if not cur.eof():
        cur.error("trailing characters after literal")
    return Literal(kind, value)


def _kind_for_set(s: Set) -> str:
    for tag, base in _SET_KINDS.items():
        if base == s.basetype:
            return tag
    raise ValueError(s.basetype)


def _kind_for_span(basetype: str) -> str:
    for tag, base in _SPAN_KINDS.items():
        if base == basetype:
            return tag
    raise ValueError(basetype)


# ---------------------------------------------------------------------------
# serialization


def _fmt_base(v, basetype: str) -> str:
    if basetype in ("int", "bigint"):
        return str(v)
    if basetype == "float":
        return fmt_float(v)
    if basetype == "date":
        return format_date(v)
    if basetype == "timestamptz":
        return format_timestamp(v)
    raise ValueError(f"no span rendering for {basetype}")


_PRED = {"int": lambda v: v - 1, "bigint": lambda v: v - 1}


def _span_text(s: Span) -> str:
    lower, upper = s.lower, s.upper
    lower_inc, upper_inc = s.lower_inc, s.upper_inc
    if s.basetype in ("int", "bigint"):
        upper, upper_inc = upper - 1, True
    elif s.basetype == "date":
        from datetime import timedelta

        upper, upper_inc = upper - timedelta(days=1), True
    lo = _fmt_base(lower, s.basetype)
    hi = _fmt_base(upper, s.basetype)
    return f"{'[' if lower_inc else '('}{lo}, {hi}{']' if upper_inc else ')'}"


_QUOTED_SET_BASES = {"timestamptz", "text", "geompoint"}


def _set_element_text(v, basetype: str) -> str:
    if basetype == "text":
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if basetype == "geompoint":
        return '"' + _wkt(v) + '"'
    if basetype == "timestamptz":
        return '"' + format_timestamp(v) + '"'
    return _fmt_base(v, basetype)


def _set_text(s: Set) -> str:
    return "{" + ", ".join(_set_element_text(v, s.basetype) for v in s.elements) + "}"


def _spanset_text(ss: SpanSet) -> str:
    return "{" + ", ".join(_span_text(s) for s in ss.spans) + "}"


def _temporal_value_text(v) -> str:
    if isinstance(v, bool):
        return "t" if v else "f"
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, Point):
        return _wkt(v)
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def _instant_text(i: TInstant) -> str:
    return f"{_temporal_value_text(i.value)}@{format_timestamp(i.t)}"


def _sequence_text(s: TSequence) -> str:
    body = ", ".join(_instant_text(i) for i in s.instants)
    if s.interp == "discrete":
        return "{" + body + "}"
    return f"{'[' if s.lower_inc else '('}{body}{']' if s.upper_inc else ')'}"


def _temporal_text(tv, step_marker: bool) -> str:
    if isinstance(tv, TInstant):
        return _instant_text(tv)
    if isinstance(tv, TSequence):
        out = _sequence_text(tv)
        if step_marker and tv.interp == "step":
            out += ";interp=step"
        return out
    out = "{" + ", ".join(_sequence_text(s) for s in tv.sequences) + "}"
    if step_marker and tv.interp == "step":
        out += ";interp=step"
    return out


def _needs_step_marker(tv, kind: str) -> bool:
    if kind == "tgeometry":
        return False
    if isinstance(tv, TInstant):
        return False
    base = tv.basetype
    return base in ("float", "geompoint")


def _coord(x: float) -> str:
    return fmt_float(x)


def _wkt(g) -> str:
    if isinstance(g, Point):
        return f"POINT({_coord(g.x)} {_coord(g.y)})"
    if isinstance(g, LineString):
        return "LINESTRING(" + ",".join(f"{_coord(x)} {_coord(y)}" for x, y in g.points) + ")"
    if isinstance(g, Polygon):
        rings = []
        for ring in g.rings():
            rings.append("(" + ",".join(f"{_coord(x)} {_coord(y)}" for x, y in ring) + ")")
        return "POLYGON(" + ",".join(rings) + ")"
    if isinstance(g, GeometryCollection):
        return "GEOMETRYCOLLECTION(" + ",".join(_wkt(sub) for sub in g.geoms) + ")"
    raise TypeError(f"not a geometry: {type(g).__name__}")


def _stbox_text(b: STBox) -> str:
    prefix = f"SRID={b.srid};" if b.srid is not None else ""
    if b.x is not None and b.t is not None:
        return (
            f"{prefix}STBOX XT((({_coord(b.x[0])},{_coord(b.y[0])}),"
            f"({_coord(b.x[1])},{_coord(b.y[1])})),{_span_text(b.t)})"
        )
    if b.x is not None:
        return (
            f"{prefix}STBOX X(({_coord(b.x[0])},{_coord(b.y[0])}),"
            f"({_coord(b.x[1])},{_coord(b.y[1])}))"
        )
    return f"{prefix}STBOX T({_span_text(b.t)})"


def _tbox_text(b: TBox) -> str:
    tag = "TBOX"
    if b.v is not None:
        tag = "TBOXINT" if b.v.basetype == "int" else "TBOXFLOAT"
    if b.v is not None and b.t is not None:
        return f"{tag} XT({_span_text(b.v)},{_span_text(b.t)})"
    if b.v is not None:
        return f"{tag} X({_span_text(b.v)})"
    return f"{tag} T({_span_text(b.t)})"


def serialize(v) -> str:
    """Canonical text form of a domain value (or of a parsed Literal)."""
    if isinstance(v, Literal):
        if v.kind == "timestamptz":
            return format_timestamp(v.payload)
        if v.kind == "date":
            return format_date(v.payload)
        return serialize(v.payload)
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, date):
        return format_date(v)
    if isinstance(v, Interval):
        return format_interval(v)
    if isinstance(v, Span):
        return _span_text(v)
    if isinstance(v, Set):
        return _set_text(v)
    if isinstance(v, SpanSet):
        return _spanset_text(v)
    if isinstance(v, (TInstant, TSequence, TSequenceSet)):
        return _temporal_text(v, _needs_step_marker(v, ""))
    if isinstance(v, TGeomPoint):
        return _temporal_text(v.temporal, _needs_step_marker(v.temporal, v.kind))
    if isinstance(v, STBox):
        return _stbox_text(v)
    if isinstance(v, TBox):
        return _tbox_text(v)
    if isinstance(v, (Point, LineString, Polygon, GeometryCollection)):
        return _wkt(v)
    raise TypeError(f"cannot serialize {type(v).__name__}")


def serialize_ewkt(v) -> str:
    """Like serialize, with an ``SRID=n;`` prefix when the value carries one."""
    if isinstance(v, Literal):
        return serialize_ewkt(v.payload)
    srid = None
    if isinstance(v, (Point, LineString, Polygon, GeometryCollection, Set, TGeomPoint)):
        srid = v.srid
    body = serialize(v)
    if srid is None:
        return body
    return f"SRID={srid};{body}"

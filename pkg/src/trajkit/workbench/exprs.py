"""A small expression evaluator over the library's scalar functions.

Grammar::

    expr        := term (('&&' | '@>') term)?
    term        := name '(' expr {',' expr} ')' | typed-literal | bare
    typed-literal := kindtag quoted | quoted '::' kindtag
    bare        := quoted | number | true | false

Bare quoted strings are coerced by the receiving function (an interval
argument parses interval text, a geometry argument parses WKT, and so
on).  Results come back as Literal values; render_literal() produces the
printable form.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from ..boxes import STBox, TBox, contains as box_contains, expand_space, expand_time, overlaps
from ..geom import GEOMETRY_TYPES, Point
from ..literals import Literal, ParseError, parse, serialize, serialize_ewkt
from ..spans import Set, Span, shift_scale, span_contains
from ..temporal import (
    TInstant,
    TSequence,
    TSequenceSet,
    duration,
    start_timestamp,
    to_tstzspan,
    when_true,
)
from ..timetypes import Interval, parse_interval, parse_timestamp
from ..tpoint import (
    TGeomPoint,
    at_geometry,
    at_time,
    at_values,
    e_dwithin,
    geometry_to_stbox,
    length,
    t_dwithin,
    tgeometry_from,
    to_stbox,
    trajectory,
    value_at_timestamp,
)


class EvalError(ValueError):
    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<string>'(?:[^']|'')*')"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<op>&&|@>|::|[(),])"
    r")"
)

_LITERAL_KINDS = {
    "tbool", "tint", "tfloat", "ttext", "tgeompoint", "tgeometry",
    "intset", "bigintset", "floatset", "textset", "dateset", "tstzset", "geomset",
    "intspan", "bigintspan", "floatspan", "datespan", "tstzspan",
    "intspanset", "bigintspanset", "floatspanset", "datespanset", "tstzspanset",
    "stbox", "tbox", "geometry", "interval", "timestamptz", "date",
}


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise EvalError(f"unexpected character {stripped[0]!r}", pos)
        for group in ("string", "name", "number", "op"):
            if m[group] is not None:
                tokens.append((group, m[group], m.start(group)))
                break
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, off = self.next()
        if kind != "op" or value != op:
            raise EvalError(f"expected {op!r}", off)

    def parse_expr(self):
        left = self.parse_term()
        kind, value, off = self.peek()
        if kind == "op" and value in ("&&", "@>"):
            self.next()
            right = self.parse_term()
            return _apply_operator(value, left, right)
        return left

    def parse_term(self):
        kind, value, off = self.peek()
        if kind == "string":
            self.next()
            raw = value[1:-1].replace("''", "'")
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "::":
                self.next()
                k3, tag, off3 = self.next()
                if k3 != "name" or tag.lower() not in _LITERAL_KINDS:
                    raise EvalError(f"unknown type tag {tag!r}", off3)
                return _parse_literal(raw, tag.lower(), off)
            return Literal("string", raw)
        if kind == "number":
            self.next()
            if any(c in value for c in ".eE"):
                return Literal("float", float(value))
            return Literal("int", int(value))
        if kind == "name":
            lowered = value.lower()
            if lowered in ("true", "false"):
                self.next()
                return Literal("bool", lowered == "true")
            k2, v2, _ = self.tokens[self.i + 1][:3] if self.i + 1 < len(self.tokens) else ("eof", "", 0)
            if lowered in _LITERAL_KINDS and k2 == "string":
                self.next()
                _, raw, off2 = self.next()
                return _parse_literal(raw[1:-1].replace("''", "'"), lowered, off2)
            self.next()
            self.expect_op("(")
            args = [self.parse_expr()]
            while True:
                kind3, value3, off3 = self.peek()
                if kind3 == "op" and value3 == ",":
                    self.next()
                    args.append(self.parse_expr())
                    continue
                break
            self.expect_op(")")
            return _call(lowered, args, off)
        raise EvalError(f"unexpected token {value!r}", off)


def _parse_literal(raw: str, tag: str, offset: int) -> Literal:
    try:
        return parse(raw, tag)
    except ParseError as exc:
        raise EvalError(f"bad {tag} literal: {exc}", offset) from None


def eval_expression(text: str) -> Literal:
    parser = _Parser(text)
    result = parser.parse_expr()
    kind, value, off = parser.peek()
    if kind != "eof":
        raise EvalError(f"trailing input {value!r}", off)
    return result


def render_literal(lit: Literal) -> str:
    """Printable form: strings render raw, everything else canonically."""
    if lit.kind == "string":
        return lit.payload
    if lit.payload is None:
        return "null"
    return serialize(lit)


# --- coercions -------------------------------------------------------------


def _want_temporal(lit: Literal, what: str):
    if isinstance(lit.payload, (TInstant, TSequence, TSequenceSet, TGeomPoint)):
        return lit.payload
    if lit.kind == "string":
        return parse(lit.payload, "temporal").payload
    raise EvalError(f"{what} expects a temporal value, got {lit.kind}")


def _want_interval(lit: Literal, what: str) -> Interval:
    if isinstance(lit.payload, Interval):
        return lit.payload
    if lit.kind == "string":
        try:
            return parse_interval(lit.payload)
        except ValueError as exc:
            raise EvalError(str(exc)) from None
    raise EvalError(f"{what} expects an interval, got {lit.kind}")


def _want_number(lit: Literal, what: str) -> float:
    if lit.kind in ("int", "float") and not isinstance(lit.payload, bool):
        return lit.payload
    raise EvalError(f"{what} expects a number, got {lit.kind}")


def _want_bool(lit: Literal, what: str) -> bool:
    if lit.kind == "bool":
        return lit.payload
    raise EvalError(f"{what} expects a boolean, got {lit.kind}")


def _want_geometry(lit: Literal, what: str):
    if isinstance(lit.payload, GEOMETRY_TYPES):
        return lit.payload
    if lit.kind == "string":
        return parse(lit.payload, "geometry").payload
    raise EvalError(f"{what} expects a geometry, got {lit.kind}")


def _want_tstzspan(lit: Literal, what: str) -> Span:
    if isinstance(lit.payload, Span) and lit.payload.basetype == "timestamptz":
        return lit.payload
    if lit.kind == "string":
        return parse(lit.payload, "tstzspan").payload
    raise EvalError(f"{what} expects a tstzspan, got {lit.kind}")


def _want_set(lit: Literal, what: str) -> Set:
    if isinstance(lit.payload, Set):
        return lit.payload
    if lit.kind == "string":
        return parse(lit.payload, "set").payload
    raise EvalError(f"{what} expects a set, got {lit.kind}")


def _want_stbox(lit: Literal, what: str) -> STBox:
    if isinstance(lit.payload, STBox):
        return lit.payload
    if isinstance(lit.payload, TGeomPoint):
        return to_stbox(lit.payload)
    if lit.kind == "string":
        return parse(lit.payload, "stbox").payload
    raise EvalError(f"{what} expects an stbox, got {lit.kind}")


def _want_timestamp(lit: Literal, what: str) -> int:
    if lit.kind == "timestamptz":
        return lit.payload
    if lit.kind == "string":
        try:
            return parse_timestamp(lit.payload)
        except ValueError as exc:
            raise EvalError(str(exc)) from None
    raise EvalError(f"{what} expects a timestamp, got {lit.kind}")


def _temporal_literal(value) -> Literal:
    if isinstance(value, TGeomPoint):
        return Literal(value.kind, value)
    return Literal("temporal", value)


def _arity(name: str, args, *counts):
    if len(args) not in counts:
        raise EvalError(
            f"{name} expects {' or '.join(str(c) for c in counts)} arguments, got {len(args)}"
        )


def _call(name: str, args: List[Literal], offset: int) -> Literal:
    if name == "duration":
        _arity(name, args, 2)
        tv = _want_temporal(args[0], name)
        return Literal("interval", duration(tv, _want_bool(args[1], name)))
    if name == "shiftscale":
        _arity(name, args, 2, 3)
        s = _want_set(args[0], name)
        if s.basetype == "timestamptz":
            shift = _want_interval(args[1], name)
            width = _want_interval(args[2], name) if len(args) == 3 else None
        else:
            shift = _want_number(args[1], name)
            width = _want_number(args[2], name) if len(args) == 3 else None
        return Literal("set", shift_scale(s, shift, width))
    if name == "expandspace":
        _arity(name, args, 2)
        return Literal(
            "stbox", expand_space(_want_stbox(args[0], name), _want_number(args[1], name))
        )
    if name == "expandtime":
        _arity(name, args, 2)
        box = args[0].payload
        if not isinstance(box, (STBox, TBox)):
            box = _want_stbox(args[0], name)
        out = expand_time(box, _want_interval(args[1], name))
        return Literal("stbox" if isinstance(out, STBox) else "tbox", out)
    if name == "tgeometry":
        _arity(name, args, 3)
        g = _want_geometry(args[0], name)
        span = _want_tstzspan(args[1], name)
        if args[2].kind != "string":
            raise EvalError("tgeometry expects an interpolation name")
        return Literal("tgeometry", tgeometry_from(g, span, args[2].payload.lower()))
    if name == "astext":
        _arity(name, args, 1)
        return Literal("string", render_literal_body(args[0]))
    if name == "asewkt":
        _arity(name, args, 1)
        return Literal("string", serialize_ewkt(args[0].payload))
    if name == "attime":
        _arity(name, args, 2)
        tv = _want_temporal(args[0], name)
        out = at_time(tv, _want_tstzspan(args[1], name))
        return _temporal_literal(out) if out is not None else Literal("null", None)
    if name == "atvalues":
        _arity(name, args, 2)
        tv = _want_temporal(args[0], name)
        if isinstance(tv, TGeomPoint):
            v = _want_geometry(args[1], name)
        else:
            v = args[1].payload
        out = at_values(tv, v)
        return _temporal_literal(out) if out is not None else Literal("null", None)
    if name == "atgeometry":
        _arity(name, args, 2)
        tv = _want_temporal(args[0], name)
        if not isinstance(tv, TGeomPoint):
            raise EvalError("atGeometry expects a temporal geometry")
        out = at_geometry(tv, _want_geometry(args[1], name))
        return _temporal_literal(out) if out is not None else Literal("null", None)
    if name == "valueattimestamp":
        _arity(name, args, 2)
        tv = _want_temporal(args[0], name)
        v = value_at_timestamp(tv, _want_timestamp(args[1], name))
        if v is None:
            return Literal("null", None)
        if isinstance(v, Point):
            return Literal("geometry", v)
        kind = "bool" if isinstance(v, bool) else (
            "int" if isinstance(v, int) else ("float" if isinstance(v, float) else "string")
        )
        return Literal(kind, v)
    if name == "starttimestamp":
        _arity(name, args, 1)
        return Literal("timestamptz", start_timestamp(_want_temporal(args[0], name)))
    if name == "trajectory":
        _arity(name, args, 1)
        tv = _want_temporal(args[0], name)
        if not isinstance(tv, TGeomPoint):
            raise EvalError("trajectory expects a temporal geometry")
        return Literal("geometry", trajectory(tv))
    if name == "length":
        _arity(name, args, 1)
        tv = _want_temporal(args[0], name)
        if not isinstance(tv, TGeomPoint):
            raise EvalError("length expects a temporal geometry")
        return Literal("float", length(tv))
    if name == "whentrue":
        _arity(name, args, 1)
        out = when_true(_want_temporal(args[0], name))
        return Literal("tstzspanset", out) if out is not None else Literal("null", None)
    if name == "tdwithin":
        _arity(name, args, 3)
        a = _want_temporal(args[0], name)
        b = _want_temporal(args[1], name)
        if not isinstance(a, TGeomPoint) or not isinstance(b, TGeomPoint):
            raise EvalError("tDwithin expects temporal geometries")
        out = t_dwithin(a, b, _want_number(args[2], name))
        return _temporal_literal(out) if out is not None else Literal("null", None)
    if name == "edwithin":
        _arity(name, args, 3)
        a = _want_temporal(args[0], name)
        b = _want_temporal(args[1], name)
        if not isinstance(a, TGeomPoint) or not isinstance(b, TGeomPoint):
            raise EvalError("eDwithin expects temporal geometries")
        return Literal("bool", e_dwithin(a, b, _want_number(args[2], name)))
    if name == "stbox":
        _arity(name, args, 1)
        if isinstance(args[0].payload, TGeomPoint):
            return Literal("stbox", to_stbox(args[0].payload))
        if isinstance(args[0].payload, GEOMETRY_TYPES):
            return Literal("stbox", geometry_to_stbox(args[0].payload))
        if args[0].kind == "string":
            return Literal("stbox", parse(args[0].payload, "stbox").payload)
        raise EvalError("stbox expects a geometry, temporal geometry, or literal")
    raise EvalError(f"unknown function {name!r}", offset)


def render_literal_body(lit: Literal) -> str:
    if lit.kind == "string":
        return lit.payload
    return serialize(lit)


def _apply_operator(op: str, left: Literal, right: Literal) -> Literal:
    if op == "&&":
        a = _want_stbox(left, "&&")
        b = _want_stbox(right, "&&")
        return Literal("bool", overlaps(a, b))
    # @>
    lp = left.payload
    if isinstance(lp, TGeomPoint) or isinstance(lp, (TInstant, TSequence, TSequenceSet)):
        lp = to_tstzspan(lp)
    if isinstance(lp, STBox) and isinstance(right.payload, STBox):
        return Literal("bool", box_contains(lp, right.payload))
    if isinstance(lp, Span):
        return Literal("bool", span_contains(lp, _want_timestamp(right, "@>")))
    if left.kind == "string":
        span = parse(left.payload, "tstzspan").payload
        return Literal("bool", span_contains(span, _want_timestamp(right, "@>")))
    raise EvalError(f"@> not supported between {left.kind} and {right.kind}")

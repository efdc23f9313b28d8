"""Text format tests: golden corpus, round trips, and error reporting."""

import random

import pytest

from trajkit import Literal, ParseError, Span, parse, serialize, serialize_ewkt
from trajkit.workbench import eval_expression, render_literal

from generators import ROUND_TRIP_KINDS, gen_geometry, gen_set, gen_temporal, gen_value

# every literal the golden expression suite and the scan experiment exercise,
# with the kind it must parse under
GOLDEN_CORPUS = [
    ("{1@2025-01-01, 2@2025-01-02, 1@2025-01-03}", "tint"),
    ("{2025-01-01, 2025-01-02, 2025-01-03}", "tstzset"),
    ("1 day", "interval"),
    ("1 hour", "interval"),
    (
        "SRID=4326;{Point(2.340088 49.400250), Point(6.575317 51.553167)}",
        "geomset",
    ),
    ("STBOX XT(((1.0,2.0),(1.0,2.0)),[2025-01-01,2025-01-01])", "stbox"),
    (
        "STBOX XT(((-1,0),(3,4)),[2025-01-01 00:00:00+00, 2025-01-01 00:00:00+00])",
        "stbox",
    ),
    ("TBOXFLOAT XT([1.0,2.0],[2025-01-01,2025-01-02])", "tbox"),
    (
        "TBOXFLOAT XT([1, 2],[2024-12-31 00:00:00+00, 2025-01-03 00:00:00+00])",
        "tbox",
    ),
    ("Point(1 1)", "geometry"),
    ("[2025-01-01, 2025-01-02]", "tstzspan"),
    (
        "[POINT(1 1)@2025-01-01 00:00:00+00, POINT(1 1)@2025-01-02 00:00:00+00]",
        "tgeometry",
    ),
    (
        "{[Point(1 1)@2025-01-01, Point(2 2)@2025-01-02, Point(1 1)@2025-01-03],"
        "[Point(3 3)@2025-01-04, Point(3 3)@2025-01-05]}",
        "tgeompoint",
    ),
    ("STBOX X((10.0,20.0),(10.0,20.0))", "stbox"),
    ("[2025-01-01,2025-01-02]", "tstzspan"),
    (
        "{[POINT(1 1)@2025-01-01 00:00:00+00, POINT(2 2)@2025-01-02 00:00:00+00]}",
        "tgeompoint",
    ),
    ("STBOX X((1000.0,1000.0),(1100.0,1100.0))", "stbox"),
    ("STBOX X((1.00,1.00),(1.50,1.50))", "stbox"),
    ("2025-08-11 12:00:00", "timestamptz"),
    ("POINT(502773.429981 511805.120402)", "geometry"),
    ("10.0", "scalar"),
    ("3.0", "scalar"),
]


@pytest.mark.parametrize("text,kind", GOLDEN_CORPUS)
def test_golden_corpus_parses(text, kind):
    lit = parse(text, kind)
    assert lit.payload is not None


@pytest.mark.parametrize("text,kind", GOLDEN_CORPUS)
def test_golden_corpus_reserialize_stable(text, kind):
    lit = parse(text, kind)
    once = serialize(lit)
    again = serialize(parse(once, kind))
    assert once == again


def test_golden_outputs_reserialize_to_themselves():
    # canonical output strings are fixed points of parse -> serialize
    outputs = [
        ("STBOX XT(((-1,0),(3,4)),[2025-01-01 00:00:00+00, 2025-01-01 00:00:00+00])", "stbox"),
        ("TBOXFLOAT XT([1, 2],[2024-12-31 00:00:00+00, 2025-01-03 00:00:00+00])", "tbox"),
        (
            "[POINT(1 1)@2025-01-01 00:00:00+00, POINT(1 1)@2025-01-02 00:00:00+00]",
            "tgeometry",
        ),
        (
            "{[POINT(1 1)@2025-01-01 00:00:00+00, POINT(2 2)@2025-01-02 00:00:00+00]}",
            "tgeompoint",
        ),
    ]
    for text, kind in outputs:
        assert serialize(parse(text, kind)) == text


def test_srid_prefix_carried():
    lit = parse("SRID=3812;{Point(1 2), Point(3 4)}", "geomset")
    assert lit.payload.srid == 3812
    assert serialize_ewkt(lit.payload).startswith("SRID=3812;{")
    plain = parse("{Point(1 2), Point(3 4)}", "geomset")
    assert plain.payload.srid is None


def test_round_trip_random_values():
    rng = random.Random(20250809)
    for kind in ROUND_TRIP_KINDS:
        for i in range(150):
            v = gen_value(rng, kind)
            text = serialize(Literal(kind, v))
            back = parse(text, kind)
            assert back.payload == v, (kind, text)


def test_round_trip_ewkt_preserves_srid():
    rng = random.Random(7)
    for _ in range(200):
        g = gen_geometry(rng, srid=rng.choice([4326, 3857, 31370]))
        text = serialize_ewkt(g)
        back = parse(text, "geometry").payload
        assert back == g
    for _ in range(100):
        s = gen_set(rng, "geomset", srid=4326)
        assert parse(serialize_ewkt(s), "geomset").payload == s
    for _ in range(100):
        tp = gen_temporal(rng, "tgeompoint", srid=3857)
        assert parse(serialize_ewkt(tp), "tgeompoint").payload == tp


def test_serialization_deterministic():
    rng1 = random.Random(99)
    rng2 = random.Random(99)
    for kind in ("floatset", "tfloat", "stbox"):
        for _ in range(50):
            a = gen_value(rng1, kind)
            b = gen_value(rng2, kind)
            assert a == b
            assert serialize(a) == serialize(b)


def test_empty_set_rejected():
    with pytest.raises(ParseError):
        parse("{}", "intset")
    with pytest.raises(ParseError):
        parse("{}", "set")


def test_error_offsets_reported():
    with pytest.raises(ParseError) as exc:
        parse("{1, 2,,}", "intset")
    assert exc.value.offset == 6
    with pytest.raises(ParseError):
        parse("[5, 1]", "intspan")  # inverted bounds
    with pytest.raises(ParseError):
        parse("[1@2025-01-02, 2@2025-01-01]", "tint")  # unordered timestamps
    with pytest.raises(ParseError):
        parse("STBOX Q((1,1),(2,2))", "stbox")  # unknown variant
    with pytest.raises((ParseError, ValueError)):
        parse("{1, 2}", "tstzspan")  # kind mismatch


def test_interval_forms():
    assert serialize(parse("2 days", "interval")) == "2 days"
    assert serialize(parse("0", "interval")) == "00:00:00"
    assert serialize(parse("01:30:00", "interval")) == "01:30:00"
    assert serialize(parse("1 day 01:00:00", "interval")) == "1 day 01:00:00"


def test_singleton_intspan_renders_inclusive():
    assert serialize(Span("int", 3, 3)) == "[3, 3]"


def test_discrete_span_canonical_equality():
    assert Span("int", 1, 3, True, True) == Span("int", 1, 4, True, False)
    assert serialize(Span("int", 1, 4, True, False)) == "[1, 3]"


def test_open_bound_rendering_round_trips():
    lit = parse("(1.5, 2.5]", "floatspan")
    assert serialize(lit) == "(1.5, 2.5]"


def test_eval_golden_suite():
    cases = [
        (
            "duration('{1@2025-01-01, 2@2025-01-02, 1@2025-01-03}'::TINT, true)",
            "2 days",
        ),
        (
            "shiftScale(tstzset '{2025-01-01, 2025-01-02, 2025-01-03}', '1 day', '1 hour')",
            '{"2025-01-02 00:00:00+00", "2025-01-02 00:30:00+00", "2025-01-02 01:00:00+00"}',
        ),
        (
            "expandSpace(stbox 'STBOX XT(((1.0,2.0),(1.0,2.0)),[2025-01-01,2025-01-01])', 2.0)",
            "STBOX XT(((-1,0),(3,4)),[2025-01-01 00:00:00+00, 2025-01-01 00:00:00+00])",
        ),
        (
            "expandTime(tbox 'TBOXFLOAT XT([1.0,2.0],[2025-01-01,2025-01-02])', interval '1 day')",
            "TBOXFLOAT XT([1, 2],[2024-12-31 00:00:00+00, 2025-01-03 00:00:00+00])",
        ),
        (
            "asEWKT(tgeometry('Point(1 1)', tstzspan '[2025-01-01, 2025-01-02]', 'step'))",
            "[POINT(1 1)@2025-01-01 00:00:00+00, POINT(1 1)@2025-01-02 00:00:00+00]",
        ),
        (
            "tgeompoint '{[Point(1 1)@2025-01-01, Point(2 2)@2025-01-02, "
            "Point(1 1)@2025-01-03],[Point(3 3)@2025-01-04, Point(3 3)@2025-01-05]}' "
            "&& stbox 'STBOX X((10.0,20.0),(10.0,20.0))'",
            "false",
        ),
        (
            "asText(atTime(tgeompoint '{[Point(1 1)@2025-01-01, Point(2 2)@2025-01-02, "
            "Point(1 1)@2025-01-03],[Point(3 3)@2025-01-04, Point(3 3)@2025-01-05]}', "
            "tstzspan '[2025-01-01,2025-01-02]'))",
            "{[POINT(1 1)@2025-01-01 00:00:00+00, POINT(2 2)@2025-01-02 00:00:00+00]}",
        ),
    ]
    for expr, expected in cases:
        assert render_literal(eval_expression(expr)) == expected

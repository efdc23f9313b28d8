"""Span, set, and spanset algebra tests."""

import random
from datetime import date

import pytest

from trajkit import (
    Interval,
    Set,
    Span,
    SpanSet,
    cast_set,
    parse,
    parse_interval,
    serialize,
    set_mem_size,
    shift_scale,
    span_contains,
    spanset_union_normalize,
    value_to_set,
)
from trajkit.timetypes import US_PER_DAY, parse_timestamp


def test_value_to_set_singletons():
    assert value_to_set(5).elements == (5,)
    assert value_to_set("a").elements == ("a",)
    assert serialize(value_to_set(3.5)) == "{3.5}"


def test_shift_scale_golden_example():
    s = parse("{2025-01-01, 2025-01-02, 2025-01-03}", "tstzset").payload
    out = shift_scale(s, parse_interval("1 day"), parse_interval("1 hour"))
    assert serialize(out) == (
        '{"2025-01-02 00:00:00+00", "2025-01-02 00:30:00+00", '
        '"2025-01-02 01:00:00+00"}'
    )


def test_shift_scale_identity():
    s = parse("{2025-01-01, 2025-01-03}", "tstzset").payload
    extent = s.elements[-1] - s.elements[0]
    out = shift_scale(s, Interval(0), Interval(extent))
    assert out == s


def test_shift_scale_random_oracle():
    # min maps to min + shift, extent becomes width, order preserved
    rng = random.Random(5)
    for _ in range(300):
        n = rng.randrange(2, 9)
        base = rng.randrange(0, 10**15)
        elems = sorted(rng.sample(range(base, base + 10**12), n))
        s = Set("timestamptz", tuple(elems))
        shift = Interval(rng.randrange(-(10**12), 10**12))
        width = Interval(rng.randrange(1, 10**12))
        out = shift_scale(s, shift, width)
        assert out.elements[0] == s.elements[0] + shift.us
        assert out.elements[-1] - out.elements[0] == width.us
        assert list(out.elements) == sorted(out.elements)


def test_shift_scale_single_element_ignores_width():
    s = Set("timestamptz", (parse_timestamp("2025-01-01"),))
    out = shift_scale(s, parse_interval("1 day"), parse_interval("1 hour"))
    assert out.elements == (s.elements[0] + US_PER_DAY,)


def test_shift_scale_numeric():
    s = Set("float", (0.0, 1.0, 2.0))
    out = shift_scale(s, 10.0, 4.0)
    assert out.elements == (10.0, 12.0, 14.0)


def test_shift_scale_requires_argument():
    with pytest.raises(ValueError):
        shift_scale(Set("int", (1, 2)))
    with pytest.raises(ValueError):
        shift_scale(Set("int", (1, 2)), 1, -5)


def test_cast_set_int_float():
    assert cast_set(Set("int", (1, 2)), "float").elements == (1.0, 2.0)


def test_cast_set_rounding_half_away():
    assert cast_set(Set("float", (1.4, 1.6)), "int").elements == (1, 2)
    assert cast_set(Set("float", (0.5, -0.5)), "int").elements == (-1, 1)
    assert cast_set(Set("float", (2.5,)), "int").elements == (3,)


def test_cast_set_date_round_trip():
    s = Set("date", (date(2025, 1, 1),))
    assert cast_set(cast_set(s, "timestamptz"), "date") == s


def test_cast_set_float_out_of_range():
    with pytest.raises(ValueError):
        cast_set(Set("float", (1e12,)), "int")


def test_cast_set_dedup_after_rounding():
    assert cast_set(Set("float", (1.4, 1.45)), "int").elements == (1,)


def test_mem_size_monotonic_and_stable():
    small = set_mem_size(Set("int", (1, 2)))
    bigger = set_mem_size(Set("int", (1, 2, 3)))
    assert small < bigger
    assert set_mem_size(Set("int", (2, 1))) == small  # equal canonical value


def test_mem_size_matches_layout():
    # tag(1) + flags(1) + count(4) + n * elem
    assert set_mem_size(Set("int", (1, 2))) == 1 + 1 + 4 + 2 * 4
    assert set_mem_size(Set("bigint", (1, 2, 3))) == 1 + 1 + 4 + 3 * 8
    assert set_mem_size(Set("float", (1.5,))) == 1 + 1 + 4 + 8
    assert set_mem_size(Set("text", ("ab", "c"))) == 1 + 1 + 4 + (4 + 2) + (4 + 1)
    s = parse("SRID=4326;{Point(1 2)}", "geomset").payload
    assert set_mem_size(s) == 1 + 1 + 4 + 4 + 16  # srid adds 4


def test_span_contains_inclusivity():
    span = parse("[2025-01-01, 2025-01-03]", "tstzspan").payload
    assert span_contains(span, parse_timestamp("2025-01-02"))
    half = parse("[2025-01-01, 2025-01-03)", "tstzspan").payload
    assert not span_contains(half, parse_timestamp("2025-01-03"))


def test_span_contains_random_oracle():
    rng = random.Random(11)
    for _ in range(500):
        lo = rng.randrange(0, 10**6)
        hi = lo + rng.randrange(1, 10**6)
        lo_inc, hi_inc = rng.random() < 0.5, rng.random() < 0.5
        span = Span("timestamptz", lo, hi, lo_inc, hi_inc)
        t = rng.randrange(lo - 10, hi + 10)
        naive = (lo < t < hi) or (t == lo and lo_inc) or (t == hi and hi_inc)
        assert span_contains(span, t) == naive


def test_spanset_merges_overlap_and_adjacent():
    a = Span("int", 1, 3)
    b = Span("int", 2, 5)
    assert spanset_union_normalize([a, b]).spans == (Span("int", 1, 5),)
    c = Span("int", 1, 2, True, False)  # [1, 2)
    d = Span("int", 2, 3)
    assert spanset_union_normalize([c, d]).spans == (Span("int", 1, 3),)


def test_spanset_membership_oracle():
    rng = random.Random(23)
    for _ in range(200):
        raw = []
        for _ in range(rng.randrange(1, 6)):
            lo = rng.randrange(0, 500)
            hi = lo + rng.randrange(1, 80)
            raw.append(Span("float", float(lo), float(hi), rng.random() < 0.7, rng.random() < 0.7))
        ss = spanset_union_normalize(raw)
        # sampled membership must equal any-of-inputs membership
        for _ in range(50):
            x = rng.uniform(-10, 600)
            assert ss.contains(x) == any(s.contains(x) for s in raw)
        # normalized: sorted, disjoint, non-adjacent
        for s1, s2 in zip(ss.spans, ss.spans[1:]):
            assert s1.upper < s2.lower or (
                s1.upper == s2.lower and not (s1.upper_inc or s2.lower_inc)
            )


def test_normalization_idempotent():
    rng = random.Random(31)
    for _ in range(100):
        raw = [
            Span("int", rng.randrange(0, 100), rng.randrange(101, 200))
            for _ in range(rng.randrange(1, 5))
        ]
        once = spanset_union_normalize(raw)
        again = spanset_union_normalize(list(once.spans))
        assert once == again


def test_empty_rejected():
    with pytest.raises(ValueError):
        Set("int", ())
    with pytest.raises(ValueError):
        SpanSet("int", ())


def test_set_sorted_dedup():
    s = Set("int", (3, 1, 2, 3))
    assert s.elements == (1, 2, 3)

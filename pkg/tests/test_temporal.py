"""Temporal value semantics: durations, sampling, restriction, alignment."""

import random

import pytest

from trajkit import (
    Interval,
    Point,
    Span,
    TInstant,
    TSequence,
    TSequenceSet,
    at_time,
    at_values,
    duration,
    end_timestamp,
    parse,
    parse_timestamp,
    serialize,
    start_timestamp,
    synchronize,
    to_tstzspan,
    value_at_timestamp,
    when_true,
)
from trajkit.timetypes import US_PER_DAY, US_PER_HOUR

from generators import gen_temporal

T0 = parse_timestamp("2025-01-01")


def hours(n):
    return T0 + n * US_PER_HOUR


def test_duration_golden_example():
    tv = parse("{1@2025-01-01, 2@2025-01-02, 1@2025-01-03}", "tint").payload
    assert duration(tv, True) == Interval(2 * US_PER_DAY)
    assert duration(tv, False) == Interval(0)  # discrete has zero measure


def test_duration_sequence_set_arithmetic():
    t1, t2, t3, t4 = hours(0), hours(5), hours(8), hours(10)
    ss = TSequenceSet(
        (
            TSequence((TInstant(1.0, t1), TInstant(2.0, t2)), interp="linear"),
            TSequence((TInstant(3.0, t3), TInstant(1.0, t4)), interp="linear"),
        )
    )
    assert duration(ss, False) == Interval((t2 - t1) + (t4 - t3))
    assert duration(ss, True) == Interval(t4 - t1)
    assert duration(ss, False).us <= duration(ss, True).us


def test_duration_false_never_exceeds_true():
    rng = random.Random(3)
    for kind in ("tint", "tfloat", "tbool"):
        for _ in range(100):
            tv = gen_temporal(rng, kind)
            assert duration(tv, False).us <= duration(tv, True).us


def test_value_at_timestamp_linear_midpoint():
    seq = TSequence((TInstant(1.0, hours(0)), TInstant(3.0, hours(2))), interp="linear")
    assert value_at_timestamp(seq, hours(1)) == 2.0


def test_value_at_timestamp_step_hold():
    seq = TSequence((TInstant(1, hours(0)), TInstant(2, hours(2))), interp="step")
    assert value_at_timestamp(seq, hours(1)) == 1
    assert value_at_timestamp(seq, hours(2)) == 2


def test_value_at_timestamp_discrete_exact_only():
    seq = parse("{1@2025-01-01, 2@2025-01-02}", "tint").payload
    assert value_at_timestamp(seq, T0) == 1
    assert value_at_timestamp(seq, T0 + 1) is None


def test_value_at_timestamp_dense_sampling_oracle():
    # linear reconstruction: value at t must match manual interpolation
    rng = random.Random(17)
    for _ in range(100):
        n = rng.randrange(2, 7)
        times = sorted(rng.sample(range(0, 10**9), n))
        values = [rng.uniform(-100, 100) for _ in range(n)]
        seq = TSequence(
            tuple(TInstant(v, t) for v, t in zip(values, times)), interp="linear"
        )
        for _ in range(30):
            t = rng.randrange(times[0], times[-1] + 1)
            got = value_at_timestamp(seq, t)
            i = max(j for j in range(n) if times[j] <= t)
            if times[i] == t:
                expect = values[i]
            else:
                frac = (t - times[i]) / (times[i + 1] - times[i])
                expect = values[i] + (values[i + 1] - values[i]) * frac
            assert got == pytest.approx(expect, abs=1e-9)


def test_at_time_golden_example():
    tp = parse(
        "{[Point(1 1)@2025-01-01, Point(2 2)@2025-01-02, Point(1 1)@2025-01-03],"
        "[Point(3 3)@2025-01-04, Point(3 3)@2025-01-05]}",
        "tgeompoint",
    ).payload
    span = parse("[2025-01-01,2025-01-02]", "tstzspan").payload
    out = at_time(tp, span)
    assert serialize(out) == (
        "{[POINT(1 1)@2025-01-01 00:00:00+00, POINT(2 2)@2025-01-02 00:00:00+00]}"
    )


def test_at_time_full_span_is_identity():
    rng = random.Random(29)
    for kind in ("tint", "tfloat"):
        for _ in range(100):
            tv = gen_temporal(rng, kind)
            out = at_time(tv, to_tstzspan(tv))
            assert out == tv


def test_at_time_membership_oracle():
    rng = random.Random(37)
    for _ in range(150):
        tv = gen_temporal(rng, "tfloat")
        lo = start_timestamp(tv) - US_PER_DAY
        hi = end_timestamp(tv) + US_PER_DAY
        s_lo = rng.randrange(lo, hi)
        s_hi = s_lo + rng.randrange(1, hi - lo)
        span = Span("timestamptz", s_lo, s_hi, rng.random() < 0.8, rng.random() < 0.8)
        restricted = at_time(tv, span)
        for _ in range(40):
            t = rng.randrange(lo, hi)
            full = value_at_timestamp(tv, t)
            sub = value_at_timestamp(restricted, t) if restricted is not None else None
            if span.contains(t):
                if full is None:
                    assert sub is None
                else:
                    # clipped boundary instants interpolate, so values can
                    # differ in the last ulp
                    assert sub == pytest.approx(full, rel=1e-12, abs=1e-9)
            else:
                assert sub is None


def test_at_time_disjoint_returns_none():
    seq = TSequence((TInstant(1.0, hours(0)), TInstant(2.0, hours(1))), interp="linear")
    assert at_time(seq, Span("timestamptz", hours(5), hours(6))) is None


def test_restriction_idempotent():
    rng = random.Random(41)
    for _ in range(100):
        tv = gen_temporal(rng, "tfloat")
        lo = start_timestamp(tv)
        hi = end_timestamp(tv) + 1
        s_lo = rng.randrange(lo, hi)
        span = Span("timestamptz", s_lo, s_lo + rng.randrange(1, US_PER_DAY))
        once = at_time(tv, span)
        if once is None:
            continue
        assert at_time(once, span) == once


def test_at_values_step_semantics():
    t0, t1, t2 = hours(0), hours(1), hours(2)
    seq = TSequence(
        (TInstant(1, t0), TInstant(2, t1), TInstant(1, t2)), interp="step"
    )
    out = at_values(seq, 1)
    assert isinstance(out, TSequenceSet)
    assert serialize(out) == (
        f"{{[1@{_ts(t0)}, 1@{_ts(t1)}), [1@{_ts(t2)}]}}"
    )


def _ts(us):
    from trajkit import format_timestamp

    return format_timestamp(us)


def test_at_values_never_attained():
    seq = TSequence((TInstant(1, hours(0)), TInstant(2, hours(1))), interp="step")
    assert at_values(seq, 99) is None


def test_at_values_linear_crossing():
    seq = TSequence((TInstant(0.0, hours(0)), TInstant(2.0, hours(2))), interp="linear")
    out = at_values(seq, 1.0)
    assert isinstance(out, TSequenceSet)
    assert len(out.sequences) == 1
    only = out.sequences[0]
    assert len(only.instants) == 1
    assert only.instants[0].t == hours(1)
    assert only.instants[0].value == 1.0


def test_at_values_step_dense_oracle():
    rng = random.Random(43)
    for _ in range(150):
        n = rng.randrange(1, 7)
        t = rng.randrange(0, 10**12)
        insts = []
        for _ in range(n):
            insts.append(TInstant(rng.randrange(0, 4), t))
            t += rng.randrange(1, 10**7)
        seq = TSequence(tuple(insts), rng.random() < 0.8, rng.random() < 0.8, "step")
        target = rng.randrange(0, 4)
        out = at_values(seq, target)
        for _ in range(50):
            probe = rng.randrange(insts[0].t - 5, insts[-1].t + 5)
            full = value_at_timestamp(seq, probe)
            sub = value_at_timestamp(out, probe) if out is not None else None
            if full == target:
                assert sub == target
            else:
                assert sub is None


def test_start_end_span_of_instant():
    inst = TInstant(5, hours(3))
    assert start_timestamp(inst) == end_timestamp(inst) == hours(3)
    assert to_tstzspan(inst) == Span("timestamptz", hours(3), hours(3))


def test_sequence_set_literal_bounds():
    tp = parse(
        "{[Point(1 1)@2025-01-01, Point(2 2)@2025-01-02, Point(1 1)@2025-01-03],"
        "[Point(3 3)@2025-01-04, Point(3 3)@2025-01-05]}",
        "tgeompoint",
    ).payload
    span = to_tstzspan(tp)
    assert span.lower == parse_timestamp("2025-01-01")
    assert span.upper == parse_timestamp("2025-01-05")


def test_span_contains_all_instants():
    rng = random.Random(47)
    for kind in ("tint", "tfloat", "ttext"):
        for _ in range(60):
            tv = gen_temporal(rng, kind)
            span = to_tstzspan(tv)
            from trajkit.temporal import _as_sequences

            for seq in _as_sequences(tv):
                for inst in seq.instants:
                    assert span.lower <= inst.t <= span.upper


def test_when_true_constant_and_never():
    seq = TSequence((TInstant(True, hours(0)), TInstant(True, hours(2))), interp="step")
    out = when_true(seq)
    assert out.spans == (Span("timestamptz", hours(0), hours(2)),)
    never = TSequence((TInstant(False, hours(0)), TInstant(False, hours(2))), interp="step")
    assert when_true(never) is None


def test_when_true_dense_oracle():
    rng = random.Random(53)
    for _ in range(150):
        n = rng.randrange(1, 8)
        t = rng.randrange(0, 10**12)
        insts = []
        for _ in range(n):
            insts.append(TInstant(rng.random() < 0.5, t))
            t += rng.randrange(1, 10**7)
        seq = TSequence(tuple(insts), rng.random() < 0.8, rng.random() < 0.8, "step")
        out = when_true(seq)
        for _ in range(60):
            probe = rng.randrange(insts[0].t - 5, insts[-1].t + 5)
            val = value_at_timestamp(seq, probe)
            member = out.contains(probe) if out is not None else False
            assert member == bool(val)


def test_when_true_requires_bool():
    seq = TSequence((TInstant(1, hours(0)),), interp="step")
    with pytest.raises(ValueError):
        when_true(seq)


def test_synchronize_identical_instants_unchanged():
    a = TSequence((TInstant(1.0, hours(0)), TInstant(2.0, hours(2))), interp="linear")
    sa, sb = synchronize(a, a)
    assert sa == sb
    assert value_at_timestamp(sa, hours(1)) == value_at_timestamp(a, hours(1))


def test_synchronize_preserves_values_at_common_times():
    rng = random.Random(59)
    for _ in range(100):
        a = gen_temporal(rng, "tfloat")
        b = gen_temporal(rng, "tfloat")
        sync = synchronize(a, b)
        if sync is None:
            continue
        sa, sb = sync
        lo = max(start_timestamp(a), start_timestamp(b))
        hi = min(end_timestamp(a), end_timestamp(b))
        for _ in range(30):
            if hi <= lo:
                break
            t = rng.randrange(lo, hi + 1)
            va, vb = value_at_timestamp(a, t), value_at_timestamp(b, t)
            if va is not None and vb is not None:
                assert value_at_timestamp(sa, t) == pytest.approx(va, rel=1e-12, abs=1e-9)
                assert value_at_timestamp(sb, t) == pytest.approx(vb, rel=1e-12, abs=1e-9)


def test_synchronize_disjoint_domains():
    a = TSequence((TInstant(1.0, hours(0)), TInstant(2.0, hours(1))), interp="linear")
    b = TSequence((TInstant(1.0, hours(5)), TInstant(2.0, hours(6))), interp="linear")
    assert synchronize(a, b) is None


def test_sequence_set_merges_adjacent_equal_boundaries():
    a = TSequence((TInstant(1.0, hours(0)), TInstant(2.0, hours(1))), True, False, "linear")
    b = TSequence((TInstant(2.0, hours(1)), TInstant(3.0, hours(2))), True, True, "linear")
    merged = TSequenceSet((a, b))
    assert len(merged.sequences) == 1
    assert merged.sequences[0].instants[0].t == hours(0)
    assert merged.sequences[0].instants[-1].t == hours(2)


def test_sequences_strictly_increasing_enforced():
    with pytest.raises(ValueError):
        TSequence((TInstant(1, hours(1)), TInstant(2, hours(1))), interp="step")
    with pytest.raises(ValueError):
        TSequence((TInstant(1.0, hours(1)), TInstant(2.0, hours(0))), interp="linear")


def test_linear_rejected_for_discrete_bases():
    with pytest.raises(ValueError):
        TSequence((TInstant(1, hours(0)), TInstant(2, hours(1))), interp="linear")


def test_ops_preserve_increasing_invariant():
    rng = random.Random(61)
    from trajkit.temporal import _as_sequences

    for _ in range(100):
        tv = gen_temporal(rng, "tfloat")
        span = Span(
            "timestamptz",
            start_timestamp(tv) - 5,
            start_timestamp(tv) + rng.randrange(1, 2 * US_PER_DAY),
        )
        for out in (at_time(tv, span), at_values(tv, 1.0)):
            if out is None:
                continue
            for seq in _as_sequences(out):
                times = [i.t for i in seq.instants]
                assert times == sorted(set(times))

"""Temporal values: instants, sequences, and sequence sets.

A sequence interpolates between its instants according to its ``interp``
mode: ``discrete`` (undefined between instants), ``step`` (hold previous
value) or ``linear`` (blend; only for float and point values).  Sequence
sets model observation gaps: ordered, pairwise-disjoint sequences sharing
one continuous interpolation.  All values are immutable; every operation
returns new values.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Any, Optional, Tuple, Union

from .geom import Point
from .spans import Span, SpanSet
from .timetypes import Interval

INTERPS = ("discrete", "step", "linear")
_CONTINUOUS_BASES = {"float", "geompoint"}


def value_basetype(v) -> str:
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, float):
        return "float"
    if isinstance(v, str):
        return "text"
    if isinstance(v, Point):
        return "geompoint"
    raise ValueError(f"unsupported temporal base value: {type(v).__name__}")


def _values_equal(a, b) -> bool:
    if isinstance(a, Point) and isinstance(b, Point):
        return a.x == b.x and a.y == b.y
    return a == b


def _lerp(v0, v1, frac: float):
    if isinstance(v0, Point):
        return Point(v0.x + (v1.x - v0.x) * frac, v0.y + (v1.y - v0.y) * frac, v0.srid)
    return v0 + (v1 - v0) * frac


@dataclass(frozen=True)
class TInstant:
    value: Any
    t: int  # epoch microseconds


@dataclass(frozen=True)
class TSequence:
    instants: Tuple[TInstant, ...]
    lower_inc: bool = True
    upper_inc: bool = True
    interp: str = "linear"

    def __post_init__(self):
        if not self.instants:
            raise ValueError("empty sequence rejected")
        object.__setattr__(self, "instants", tuple(self.instants))
        times = tuple(i.t for i in self.instants)
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("sequence timestamps must be strictly increasing")
        if self.interp not in INTERPS:
            raise ValueError(f"unknown interpolation: {self.interp!r}")
        base = value_basetype(self.instants[0].value)
        if self.interp == "linear" and base not in _CONTINUOUS_BASES:
            raise ValueError(f"linear interpolation invalid for {base} values")
        if self.interp == "discrete" or len(self.instants) == 1:
            object.__setattr__(self, "lower_inc", True)
            object.__setattr__(self, "upper_inc", True)
        object.__setattr__(self, "_times", times)

    @property
    def lower(self) -> int:
        return self.instants[0].t

    @property
    def upper(self) -> int:
        return self.instants[-1].t

    @property
    def basetype(self) -> str:
        return value_basetype(self.instants[0].value)

    def value_at(self, t: int, strict: bool = True):
        """Value at t; with strict=False exclusive bounds still yield the
        boundary value (used when cutting new boundary instants)."""
        times = self._times
        if t < times[0] or t > times[-1]:
            return None
        if self.interp == "discrete":
            i = bisect_left(times, t)
            if i < len(times) and times[i] == t:
                return self.instants[i].value
            return None
        if t == times[0]:
            return self.instants[0].value if self.lower_inc or not strict else None
        if t == times[-1]:
            return self.instants[-1].value if self.upper_inc or not strict else None
        i = bisect_right(times, t) - 1
        if times[i] == t or self.interp == "step":
            return self.instants[i].value
        frac = (t - times[i]) / (times[i + 1] - times[i])
        return _lerp(self.instants[i].value, self.instants[i + 1].value, frac)


@dataclass(frozen=True)
class TSequenceSet:
    sequences: Tuple[TSequence, ...]

    def __post_init__(self):
        seqs = sorted(self.sequences, key=lambda s: s.lower)
        if not seqs:
            raise ValueError("empty sequence set rejected")
        interp = seqs[0].interp
        if interp == "discrete" or any(s.interp != interp for s in seqs):
            raise ValueError("sequence set requires a single continuous interpolation")
        merged = [seqs[0]]
        for s in seqs[1:]:
            prev = merged[-1]
            if s.lower < prev.upper or (
                s.lower == prev.upper and prev.upper_inc and s.lower_inc
            ):
                joined = _try_merge(prev, s)
                if joined is None:
                    raise ValueError("sequence set members must be disjoint")
                merged[-1] = joined
            elif s.lower == prev.upper and (prev.upper_inc or s.lower_inc):
                joined = _try_merge(prev, s)
                merged[-1] = joined if joined is not None else prev
                if joined is None:
                    merged.append(s)
            else:
                merged.append(s)
        object.__setattr__(self, "sequences", tuple(merged))

    @property
    def interp(self) -> str:
        return self.sequences[0].interp

    @property
    def basetype(self) -> str:
        return self.sequences[0].basetype


def _try_merge(a: TSequence, b: TSequence) -> Optional[TSequence]:
    """Merge temporally adjacent sequences with equal boundary values."""
    if a.upper != b.lower or not (a.upper_inc or b.lower_inc):
        return None
    if not _values_equal(a.instants[-1].value, b.instants[0].value):
        return None
    return TSequence(a.instants + b.instants[1:], a.lower_inc, b.upper_inc, a.interp)


TemporalValue = Union[TInstant, TSequence, TSequenceSet]


def _as_sequences(tv: TemporalValue):
    if isinstance(tv, TInstant):
        return (TSequence((tv,), interp="discrete"),)
    if isinstance(tv, TSequence):
        return (tv,)
    return tv.sequences


def start_timestamp(tv: TemporalValue) -> int:
    tv = getattr(tv, "temporal", tv)
    if isinstance(tv, TInstant):
        return tv.t
    if isinstance(tv, TSequence):
        return tv.lower
    return tv.sequences[0].lower


def end_timestamp(tv: TemporalValue) -> int:
    tv = getattr(tv, "temporal", tv)
    if isinstance(tv, TInstant):
        return tv.t
    if isinstance(tv, TSequence):
        return tv.upper
    return tv.sequences[-1].upper


def to_tstzspan(tv: TemporalValue) -> Span:
    """Bounding time span, keeping the outermost inclusivity flags."""
    tv = getattr(tv, "temporal", tv)
    if isinstance(tv, TInstant):
        return Span("timestamptz", tv.t, tv.t)
    if isinstance(tv, TSequence):
        lo_inc = tv.lower_inc if tv.interp != "discrete" else True
        hi_inc = tv.upper_inc if tv.interp != "discrete" else True
        return Span("timestamptz", tv.lower, tv.upper, lo_inc, hi_inc)
    first, last = tv.sequences[0], tv.sequences[-1]
    return Span("timestamptz", first.lower, last.upper, first.lower_inc, last.upper_inc)


def duration(tv: TemporalValue, bound_span: bool) -> Interval:
    """Elapsed time: bounding-span extent, or the summed extent of
    continuous sequences when ``bound_span`` is false."""
    tv = getattr(tv, "temporal", tv)
    if isinstance(tv, TInstant):
        return Interval(0)
    if bound_span:
        return Interval(end_timestamp(tv) - start_timestamp(tv))
    total = 0
    for seq in _as_sequences(tv):
        if seq.interp != "discrete":
            total += seq.upper - seq.lower
    return Interval(total)


def value_at_timestamp(tv: TemporalValue, t: int):
    if isinstance(tv, TInstant):
        return tv.value if tv.t == t else None
    if isinstance(tv, TSequence):
        return tv.value_at(t)
    for seq in tv.sequences:
        if seq.lower <= t <= seq.upper:
            v = seq.value_at(t)
            if v is not None:
                return v
    return None


def _clip_sequence(seq: TSequence, span: Span) -> Optional[TSequence]:
    if seq.interp == "discrete":
        hits = tuple(i for i in seq.instants if span.contains(i.t))
        return TSequence(hits, interp="discrete") if hits else None

    lo_key = max((seq.lower, not seq.lower_inc), (span.lower, not span.lower_inc))
    hi_key = min((seq.upper, seq.upper_inc), (span.upper, span.upper_inc))
    lo, lo_inc = lo_key[0], not lo_key[1]
    hi, hi_inc = hi_key
    if lo > hi or (lo == hi and not (lo_inc and hi_inc)):
        return None
    if lo == hi:
        v = seq.value_at(lo)
        if v is None:
            return None
        return TSequence((TInstant(v, lo),), interp=seq.interp)

    out = [TInstant(seq.value_at(lo, strict=False), lo)]
    out.extend(i for i in seq.instants if lo < i.t < hi)
    out.append(TInstant(seq.value_at(hi, strict=False), hi))
    return TSequence(tuple(out), lo_inc, hi_inc, seq.interp)


def at_time(tv: TemporalValue, span: Span):
    """Restrict a temporal value to a timestamp span; None when disjoint."""
    if span.basetype != "timestamptz":
        raise ValueError("at_time expects a timestamptz span")
    if isinstance(tv, TInstant):
        return tv if span.contains(tv.t) else None
    if isinstance(tv, TSequence):
        return _clip_sequence(tv, span)
    pieces = [c for c in (_clip_sequence(s, span) for s in tv.sequences) if c is not None]
    return TSequenceSet(tuple(pieces)) if pieces else None


def runs_where(seq: TSequence, pred):
    """(lower, upper, lower_inc, upper_inc) stretches of a step sequence
    where the held value satisfies pred."""
    out = []
    run_start = None
    run_start_inc = True
    for i, inst in enumerate(seq.instants):
        match = pred(inst.value)
        if match and run_start is None:
            run_start = inst.t
            run_start_inc = seq.lower_inc if i == 0 else True
        if not match and run_start is not None:
            out.append((run_start, inst.t, run_start_inc, False))
            run_start = None
    if run_start is not None:
        last = seq.instants[-1]
        if run_start == last.t:
            if seq.upper_inc:
                out.append((run_start, run_start, True, True))
        else:
            out.append((run_start, last.t, run_start_inc, seq.upper_inc))
    return out


def _value_runs(seq: TSequence, v):
    return runs_where(seq, lambda x: _values_equal(x, v))


def _at_values_sequence(seq: TSequence, v):
    if seq.interp == "discrete":
        hits = tuple(i for i in seq.instants if _values_equal(i.value, v))
        return [TSequence(hits, interp="discrete")] if hits else []
    if seq.interp == "step":
        pieces = []
        for lo, hi, lo_inc, hi_inc in _value_runs(seq, v):
            if lo == hi:
                pieces.append(TSequence((TInstant(v, lo),), interp="step"))
            else:
                pieces.append(
                    TSequence((TInstant(v, lo), TInstant(v, hi)), lo_inc, hi_inc, "step")
                )
        return pieces

    pieces = []
    hit_times = set()
    insts = seq.instants
    for i in range(len(insts) - 1):
        a, b = insts[i], insts[i + 1]
        if _values_equal(a.value, b.value):
            if _values_equal(a.value, v):
                lo_inc = seq.lower_inc if i == 0 else True
                hi_inc = seq.upper_inc if i + 2 == len(insts) else True
                pieces.append(
                    TSequence((TInstant(v, a.t), TInstant(v, b.t)), lo_inc, hi_inc, "linear")
                )
            continue
        for t in _linear_crossings(a, b, v):
            if t == seq.lower and not seq.lower_inc:
                continue
            if t == seq.upper and not seq.upper_inc:
                continue
            hit_times.add(t)
    if len(insts) == 1 and _values_equal(insts[0].value, v):
        hit_times.add(insts[0].t)
    covered = [(p.lower, p.upper) for p in pieces]
    for t in sorted(hit_times):
        if any(lo <= t <= hi for lo, hi in covered):
            continue
        pieces.append(TSequence((TInstant(v, t),), interp="linear"))
    return pieces


_POINT_MATCH_TOL = 1e-9


def _linear_crossings(a: TInstant, b: TInstant, v):
    dt = b.t - a.t
    if isinstance(v, Point):
        dx, dy = b.value.x - a.value.x, b.value.y - a.value.y
        if abs(dx) >= abs(dy):
            if dx == 0:
                return []
            frac = (v.x - a.value.x) / dx
        else:
            frac = (v.y - a.value.y) / dy
        if not 0.0 <= frac <= 1.0:
            return []
        px = a.value.x + dx * frac
        py = a.value.y + dy * frac
        if abs(px - v.x) > _POINT_MATCH_TOL or abs(py - v.y) > _POINT_MATCH_TOL:
            return []
        return [a.t + round(frac * dt)]
    dv = b.value - a.value
    frac = (v - a.value) / dv
    if not 0.0 <= frac <= 1.0:
        return []
    return [a.t + round(frac * dt)]


def at_values(tv: TemporalValue, v):
    """Restrict a temporal value to the times its value equals v."""
    if isinstance(tv, TInstant):
        return tv if _values_equal(tv.value, v) else None
    if isinstance(tv, TSequence):
        pieces = _at_values_sequence(tv, v)
        if not pieces:
            return None
        if tv.interp == "discrete":
            return pieces[0]
        return TSequenceSet(tuple(pieces))
    pieces = []
    for seq in tv.sequences:
        pieces.extend(_at_values_sequence(seq, v))
    return TSequenceSet(tuple(pieces)) if pieces else None


def when_true(tv: TemporalValue) -> Optional[SpanSet]:
    """Normalized spanset of the times a temporal boolean is true."""
    tv = getattr(tv, "temporal", tv)
    base = value_basetype(tv.value) if isinstance(tv, TInstant) else tv.basetype
    if base != "bool":
        raise ValueError("when_true expects a temporal boolean")
    spans = []
    if isinstance(tv, TInstant):
        if tv.value:
            spans.append(Span("timestamptz", tv.t, tv.t))
    else:
        for seq in _as_sequences(tv):
            if seq.interp == "discrete":
                spans.extend(
                    Span("timestamptz", i.t, i.t) for i in seq.instants if i.value
                )
            else:
                for lo, hi, lo_inc, hi_inc in _value_runs(seq, True):
                    spans.append(Span("timestamptz", lo, hi, lo_inc, hi_inc))
    if not spans:
        return None
    return SpanSet("timestamptz", tuple(spans))


def _domain_spans(tv: TemporalValue):
    out = []
    for seq in _as_sequences(tv):
        if seq.interp == "discrete":
            out.extend(Span("timestamptz", i.t, i.t) for i in seq.instants)
        else:
            out.append(Span("timestamptz", seq.lower, seq.upper, seq.lower_inc, seq.upper_inc))
    return out


def _span_intersection(a: Span, b: Span) -> Optional[Span]:
    if not a.overlaps(b):
        return None
    lo, lo_excl = max((a.lower, not a.lower_inc), (b.lower, not b.lower_inc))
    hi, hi_inc = min((a.upper, a.upper_inc), (b.upper, b.upper_inc))
    return Span("timestamptz", lo, hi, not lo_excl, hi_inc)


def synchronize(a: TemporalValue, b: TemporalValue):
    """Resample both values onto their shared instants over the common domain.

    Returns a pair of aligned TSequenceSet values (or discrete sequences),
    or None when the time domains are disjoint.
    """
    if _is_discrete(a) or _is_discrete(b):
        times = sorted(set(_instant_times(a)) | set(_instant_times(b)))
        pairs = [
            (value_at_timestamp(a, t), value_at_timestamp(b, t), t) for t in times
        ]
        pairs = [(va, vb, t) for va, vb, t in pairs if va is not None and vb is not None]
        if not pairs:
            return None
        sa = TSequence(tuple(TInstant(va, t) for va, _, t in pairs), interp="discrete")
        sb = TSequence(tuple(TInstant(vb, t) for _, vb, t in pairs), interp="discrete")
        return sa, sb

    out_a, out_b = [], []
    for pa, pb, span in aligned_piece_pairs(a, b):
        out_a.append(pa)
        out_b.append(pb)
    if not out_a:
        return None
    return TSequenceSet(tuple(out_a)), TSequenceSet(tuple(out_b))


def _is_discrete(tv) -> bool:
    if isinstance(tv, TInstant):
        return True
    if isinstance(tv, TSequence):
        return tv.interp == "discrete"
    return False


def _instant_times(tv):
    for seq in _as_sequences(tv):
        for i in seq.instants:
            yield i.t


def aligned_piece_pairs(a: TemporalValue, b: TemporalValue):
    """Pairs of continuous sequences resampled onto merged instants over
    each shared sub-span of the two domains."""
    pairs = []
    for sa in _as_sequences(a):
        for sb in _as_sequences(b):
            span = _span_intersection(
                Span("timestamptz", sa.lower, sa.upper, sa.lower_inc, sa.upper_inc),
                Span("timestamptz", sb.lower, sb.upper, sb.lower_inc, sb.upper_inc),
            )
            if span is None:
                continue
            times = sorted(
                {t for t in sa._times if span.contains(t)}
                | {t for t in sb._times if span.contains(t)}
                | {span.lower, span.upper}
            )
            ia = tuple(TInstant(sa.value_at(t, strict=False), t) for t in times)
            ib = tuple(TInstant(sb.value_at(t, strict=False), t) for t in times)
            pa = TSequence(ia, span.lower_inc, span.upper_inc, sa.interp)
            pb = TSequence(ib, span.lower_inc, span.upper_inc, sb.interp)
            pairs.append((pa, pb, span))
    return pairs

"""Microsecond timestamps and fixed-length intervals.

Timestamps are plain ints: UTC microseconds since the Unix epoch.  Inputs
with a zone offset are normalized to UTC at parse time; all output is
rendered with a ``+00`` suffix.  Intervals are fixed microsecond durations
(a day is exactly 86 400 seconds); calendar months are not supported.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone

US_PER_SECOND = 1_000_000
US_PER_MINUTE = 60 * US_PER_SECOND
US_PER_HOUR = 60 * US_PER_MINUTE
US_PER_DAY = 24 * US_PER_HOUR

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_EPOCH_DATE = date(1970, 1, 1)
_ONE_US = timedelta(microseconds=1)

_TS_RE = re.compile(
    r"(\d{4})-(\d{2})-(\d{2})"
    r"(?:[ T](\d{2}):(\d{2})(?::(\d{2})(?:\.(\d{1,6}))?)?)?"
    r"\s*(Z|[+-]\d{2}(?::?\d{2})?)?"
)


def parse_timestamp(text: str) -> int:
    """Parse ``YYYY-MM-DD[ HH:MM:SS[.ffffff]][+TZ]`` into epoch microseconds."""
    m = _TS_RE.fullmatch(text.strip())
    if m is None:
        raise ValueError(f"invalid timestamp: {text!r}")
    year, month, day = int(m[1]), int(m[2]), int(m[3])
    hour = int(m[4]) if m[4] else 0
    minute = int(m[5]) if m[5] else 0
    second = int(m[6]) if m[6] else 0
    frac = int(m[7].ljust(6, "0")) if m[7] else 0
    try:
        dt = datetime(year, month, day, hour, minute, second, frac, tzinfo=timezone.utc)
    except ValueError as exc:
        raise ValueError(f"invalid timestamp: {text!r} ({exc})") from None
    us = (dt - _EPOCH) // _ONE_US
    tz = m[8]
    if tz and tz != "Z":
        sign = 1 if tz[0] == "+" else -1
        hh = int(tz[1:3])
        mm = int(tz[3:].lstrip(":") or 0)
        us -= sign * (hh * US_PER_HOUR + mm * US_PER_MINUTE)
    return us


def format_timestamp(us: int) -> str:
    dt = _EPOCH + timedelta(microseconds=us)
    out = dt.strftime("%Y-%m-%d %H:%M:%S")
    if dt.microsecond:
        out += (".%06d" % dt.microsecond).rstrip("0")
    return out + "+00"


def date_to_timestamp(d: date) -> int:
    """Midnight UTC of the given date."""
    return (d - _EPOCH_DATE).days * US_PER_DAY


def timestamp_to_date(us: int) -> date:
    return (_EPOCH + timedelta(microseconds=us)).date()


def parse_date(text: str) -> date:
    m = re.fullmatch(r"(\d{4})-(\d{2})-(\d{2})", text.strip())
    if m is None:
        raise ValueError(f"invalid date: {text!r}")
    return date(int(m[1]), int(m[2]), int(m[3]))


def format_date(d: date) -> str:
    return d.strftime("%Y-%m-%d")


@dataclass(frozen=True)
class Interval:
    """Fixed-length duration in microseconds."""

    us: int

    def __bool__(self) -> bool:
        return self.us != 0

    def __str__(self) -> str:
        return format_interval(self)


_UNIT_US = {
    "day": US_PER_DAY,
    "hour": US_PER_HOUR,
    "minute": US_PER_MINUTE,
    "min": US_PER_MINUTE,
    "second": US_PER_SECOND,
    "sec": US_PER_SECOND,
    "microsecond": 1,
    "us": 1,
}

_INTERVAL_TERM = re.compile(
    r"(\d+)\s*(days?|hours?|minutes?|mins?|seconds?|secs?|microseconds?|us)|"
    r"(\d{1,2}):(\d{2}):(\d{2})(?:\.(\d{1,6}))?",
    re.IGNORECASE,
)


def parse_interval(text: str) -> Interval:
    """Parse interval text: unit terms (``2 days 3 hours``), ``HH:MM:SS`` or ``0``."""
    s = text.strip()
    sign = 1
    if s.startswith("-"):
        sign = -1
        s = s[1:].lstrip()
    if s == "0":
        return Interval(0)
    total = 0
    pos = 0
    matched = False
    while pos < len(s):
        m = _INTERVAL_TERM.match(s, pos)
        if m is None:
            break
        matched = True
        if m[1] is not None:
            unit = m[2].lower().rstrip("s")
            if unit not in _UNIT_US:
                break
            total += int(m[1]) * _UNIT_US[unit]
        else:
            total += int(m[3]) * US_PER_HOUR + int(m[4]) * US_PER_MINUTE
            total += int(m[5]) * US_PER_SECOND
            if m[6]:
                total += int(m[6].ljust(6, "0"))
        pos = m.end()
        while pos < len(s) and s[pos] in " \t":
            pos += 1
    if not matched or pos != len(s):
        raise ValueError(f"invalid interval: {text!r}")
    return Interval(sign * total)


def format_interval(iv: Interval) -> str:
    us = iv.us
    sign = "-" if us < 0 else ""
    us = abs(us)
    days, rem = divmod(us, US_PER_DAY)
    hours, rem = divmod(rem, US_PER_HOUR)
    minutes, rem = divmod(rem, US_PER_MINUTE)
    seconds, frac = divmod(rem, US_PER_SECOND)
    parts = []
    if days:
        parts.append(f"{days} day" + ("s" if days != 1 else ""))
    if hours or minutes or seconds or frac or not days:
        clock = f"{hours:02d}:{minutes:02d}:{seconds:02d}"
        if frac:
            clock += (".%06d" % frac).rstrip("0")
        parts.append(clock)
    return sign + " ".join(parts)

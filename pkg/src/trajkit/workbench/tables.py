"""In-memory tables: trips, vehicles, sample tables, and generators.

The trip observation file format is CSV with header
``vehicle_id,trip_id,x,y,t`` (ISO-8601 timestamps).  Observations are
grouped per (vehicle, trip) into linear temporal points; trajectories are
cached alongside.  The synthetic generators are deterministic under a
seed so benchmark runs are reproducible without external downloads.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from ..boxes import STBox
from ..geom import Point, Polygon
from ..literals import parse, serialize
from ..temporal import TInstant, TSequence
from ..timetypes import US_PER_MINUTE, US_PER_SECOND, format_timestamp, parse_timestamp
from ..tpoint import TGeomPoint, trajectory


def trip_instants(trip: TGeomPoint):
    """All instants of a trip regardless of its temporal shape."""
    tv = trip.temporal
    if isinstance(tv, TInstant):
        return (tv,)
    if isinstance(tv, TSequence):
        return tv.instants
    return tuple(i for s in tv.sequences for i in s.instants)


class DataError(ValueError):
    """Malformed input data; carries a line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass
class TripRow:
    vehicle_id: int
    trip_id: int
    trip: TGeomPoint
    traj: object


@dataclass
class Vehicle:
    vehicle_id: int
    license: str
    vehicle_type: str


@dataclass
class LicenseRow:
    license_id: int
    license: str
    vehicle_id: int


@dataclass
class InstantRow:
    instant_id: int
    instant: int


@dataclass
class PointRow:
    point_id: int
    geom: Point


@dataclass
class Region:
    name: str
    polygon: Polygon


@dataclass
class Dataset:
    trips: List[TripRow]
    vehicles: List[Vehicle]
    licenses1: List[LicenseRow]
    licenses2: List[LicenseRow]
    instants1: List[InstantRow]
    points1: List[PointRow]
    regions: List[Region]
    scale: str = "custom"


def ingest_trips(source) -> List[TripRow]:
    """Read trip observations and build one linear temporal point per
    (vehicle, trip); duplicate timestamps within a trip are rejected."""
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return ingest_trips(list(fh))
    lines = list(source)
    if not lines:
        raise DataError("empty trips file")
    reader = csv.reader(lines)
    header = [h.strip().lower() for h in next(reader)]
    expected = ["vehicle_id", "trip_id", "x", "y", "t"]
    if header != expected:
        raise DataError(f"expected header {','.join(expected)}", line=1)
    obs = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 5:
            raise DataError(f"expected 5 fields, got {len(row)}", line=lineno)
        try:
            vid = int(row[0])
            tid = int(row[1])
            x = float(row[2])
            y = float(row[3])
            t = parse_timestamp(row[4])
        except ValueError as exc:
            raise DataError(str(exc), line=lineno) from None
        obs.setdefault((vid, tid), []).append((t, x, y, lineno))

    rows = []
    for (vid, tid), samples in sorted(obs.items()):
        samples.sort(key=lambda s: s[0])
        for a, b in zip(samples, samples[1:]):
            if a[0] == b[0]:
                raise DataError(
                    f"duplicate timestamp {format_timestamp(a[0])} in trip ({vid}, {tid})",
                    line=b[3],
                )
        instants = tuple(TInstant(Point(x, y), t) for t, x, y, _ in samples)
        if len(instants) == 1:
            trip = TGeomPoint(instants[0])
        else:
            trip = TGeomPoint(TSequence(instants, interp="linear"))
        rows.append(TripRow(vid, tid, trip, trajectory(trip)))
    return rows


def _license_plate(vehicle_id: int) -> str:
    return f"B-{vehicle_id:04d}"


def _vehicle_type(vehicle_id: int) -> str:
    return "passenger" if vehicle_id % 5 != 0 else "truck"


def default_vehicles(trips: Sequence[TripRow]) -> List[Vehicle]:
    vids = sorted({r.vehicle_id for r in trips})
    return [Vehicle(v, _license_plate(v), _vehicle_type(v)) for v in vids]


def build_dataset(
    trips: Sequence[TripRow],
    vehicles: Optional[Sequence[Vehicle]] = None,
    regions: Optional[Sequence[Region]] = None,
    seed: int = 42,
    scale: str = "custom",
) -> Dataset:
    """Derive the auxiliary sample tables (first 10 rows each by id)."""
    trips = list(trips)
    if vehicles is None:
        vehicles = default_vehicles(trips)
    vehicles = sorted(vehicles, key=lambda v: v.vehicle_id)
    licenses = [
        LicenseRow(i + 1, v.license, v.vehicle_id) for i, v in enumerate(vehicles)
    ]
    licenses1 = licenses[:10]
    licenses2 = licenses[10:20] if len(licenses) > 10 else licenses[:10]

    rng = random.Random(seed)
    instants1 = []
    for i in range(10):
        if not trips:
            instants1.append(InstantRow(i + 1, 0))
            continue
        # sample inside an actual trip so the instants table hits data
        r = rng.choice(trips)
        insts = trip_instants(r.trip)
        lo, hi = insts[0].t, insts[-1].t
        instants1.append(InstantRow(i + 1, rng.randrange(lo, max(lo + 1, hi))))

    vertices = []
    passenger_vids = {v.vehicle_id for v in vehicles if v.vehicle_type == "passenger"}
    for r in trips:
        if r.vehicle_id in passenger_vids:
            for inst in trip_instants(r.trip):
                vertices.append(inst.value)
    points1 = []
    if vertices:
        chosen = rng.sample(vertices, min(10, len(vertices)))
        points1 = [PointRow(i + 1, Point(p.x, p.y)) for i, p in enumerate(chosen)]

    if regions is None:
        regions = _default_regions(trips, rng)
    return Dataset(
        trips=trips,
        vehicles=list(vehicles),
        licenses1=licenses1,
        licenses2=licenses2,
        instants1=instants1,
        points1=list(points1),
        regions=list(regions),
        scale=scale,
    )


def _default_regions(trips: Sequence[TripRow], rng: random.Random) -> List[Region]:
    """A 3x2 grid of rectangular districts over the data extent."""
    if not trips:
        return []
    xs, ys = [], []
    for r in trips:
        for inst in trip_instants(r.trip):
            xs.append(inst.value.x)
            ys.append(inst.value.y)
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    pad_x = (x1 - x0) * 0.01 + 1.0
    pad_y = (y1 - y0) * 0.01 + 1.0
    x0, x1, y0, y1 = x0 - pad_x, x1 + pad_x, y0 - pad_y, y1 + pad_y
    regions = []
    cols, rows_n = 3, 2
    dx = (x1 - x0) / cols
    dy = (y1 - y0) / rows_n
    for j in range(rows_n):
        for i in range(cols):
            rx0, ry0 = x0 + i * dx, y0 + j * dy
            rx1, ry1 = rx0 + dx, ry0 + dy
            ring = ((rx0, ry0), (rx1, ry0), (rx1, ry1), (rx0, ry1), (rx0, ry0))
            regions.append(Region(f"district-{j * cols + i + 1}", Polygon(ring)))
    return regions


def generate_trips_dataset(
    vehicles: int = 20, trips: int = 50, seed: int = 42, points_per_trip: int = 20
) -> Dataset:
    """Seeded synthetic trips: piecewise-linear walks between per-vehicle
    home and work anchors inside a bounded rectangle.

    Trips are grouped in time waves so different vehicles travel
    concurrently, and each even vehicle convoys a few units behind the
    previous one, which guarantees close encounters for the proximity
    queries.
    """
    rng = random.Random(seed)
    extent = 10_000.0
    base_t = parse_timestamp("2025-06-01 06:00:00")
    homes = {}
    works = {}
    for v in range(1, vehicles + 1):
        if v % 2 == 0 and v - 1 in homes:
            # convoy partner: nearly the same anchors as the previous vehicle
            homes[v] = (homes[v - 1][0] + rng.uniform(-2, 2), homes[v - 1][1] + rng.uniform(-2, 2))
            works[v] = (works[v - 1][0] + rng.uniform(-2, 2), works[v - 1][1] + rng.uniform(-2, 2))
        else:
            cx = rng.uniform(0.15, 0.45) * extent
            cy = rng.uniform(0.15, 0.45) * extent
            homes[v] = (cx + rng.uniform(-300, 300), cy + rng.uniform(-300, 300))
            works[v] = (
                rng.uniform(0.55, 0.85) * extent + rng.uniform(-300, 300),
                rng.uniform(0.55, 0.85) * extent + rng.uniform(-300, 300),
            )

    def walk(v, tid):
        hx, hy = homes[v]
        wx, wy = works[v]
        if tid % 2 == 0:
            hx, hy, wx, wy = wx, wy, hx, hy
        n = max(2, points_per_trip + rng.randrange(-4, 5))
        # one wave per trip ordinal; vehicles inside a wave overlap in time
        t = base_t + (tid - 1) * 6 * 3_600 * US_PER_SECOND
        t += (v - 1) * 30 * US_PER_SECOND + rng.randrange(0, 20) * US_PER_SECOND
        instants = []
        for i in range(n):
            frac = i / (n - 1)
            tx = hx + (wx - hx) * frac
            ty = hy + (wy - hy) * frac
            jitter = 150.0 * (1.0 - abs(2 * frac - 1.0))
            x = tx + rng.uniform(-jitter, jitter)
            y = ty + rng.uniform(-jitter, jitter)
            instants.append(TInstant(Point(x, y), t))
            t += rng.randrange(30, 120) * US_PER_SECOND
        return instants

    def convoy_walk(partner):
        # shadow the partner's timeline a moment behind, a couple units off
        lag = rng.choice([0, 0, 1]) * US_PER_SECOND
        out = []
        for inst in partner:
            out.append(
                TInstant(
                    Point(
                        inst.value.x + rng.uniform(-1.5, 1.5),
                        inst.value.y + rng.uniform(-1.5, 1.5),
                    ),
                    inst.t + lag,
                )
            )
        return out

    generated = {}
    order = []
    trip_counter = {}
    for k in range(trips):
        v = (k % vehicles) + 1
        trip_counter[v] = trip_counter.get(v, 0) + 1
        order.append((v, trip_counter[v]))
    for v, tid in order:
        if v % 2 == 1 or (v - 1, tid) not in generated:
            generated[(v, tid)] = walk(v, tid)
    for v, tid in order:
        if (v, tid) not in generated:
            generated[(v, tid)] = convoy_walk(generated[(v - 1, tid)])

    rows = []
    for v, tid in sorted(order):
        instants = generated[(v, tid)]
        trip = TGeomPoint(TSequence(tuple(instants), interp="linear"))
        rows.append(TripRow(v, tid, trip, trajectory(trip)))
    return build_dataset(rows, seed=seed, scale=f"v{vehicles}-t{trips}")


def generate_synthetic_boxes(rows: int) -> List[Tuple[int, int, STBox]]:
    """The diagonal box table: row i gets the square [i, i+0.5]^2 and a
    timestamp i minutes past the base instant.  Ids run 0..rows-1."""
    if rows < 1:
        raise ValueError("rows must be >= 1")
    base = parse_timestamp("2025-08-11 12:00:00")
    out = []
    for i in range(rows):
        box = STBox(x=(float(i), i + 0.5), y=(float(i), i + 0.5))
        out.append((i, base + i * US_PER_MINUTE, box))
    return out


# ---------------------------------------------------------------------------
# workspace persistence for the CLI

def save_dataset(ds: Dataset, data_dir) -> None:
    root = Path(data_dir)
    root.mkdir(parents=True, exist_ok=True)
    with open(root / "observations.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["vehicle_id", "trip_id", "x", "y", "t"])
        for r in ds.trips:
            for inst in trip_instants(r.trip):
                w.writerow(
                    [
                        r.vehicle_id,
                        r.trip_id,
                        repr(inst.value.x),
                        repr(inst.value.y),
                        format_timestamp(inst.t),
                    ]
                )
    with open(root / "vehicles.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["vehicle_id", "license", "vehicle_type"])
        for v in ds.vehicles:
            w.writerow([v.vehicle_id, v.license, v.vehicle_type])
    with open(root / "instants1.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["instant_id", "instant"])
        for row in ds.instants1:
            w.writerow([row.instant_id, format_timestamp(row.instant)])
    with open(root / "points1.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["point_id", "geom"])
        for row in ds.points1:
            w.writerow([row.point_id, serialize(row.geom)])
    with open(root / "regions.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "polygon"])
        for reg in ds.regions:
            w.writerow([reg.name, serialize(reg.polygon)])
    meta = {"scale": ds.scale}
    (root / "meta.json").write_text(json.dumps(meta), encoding="utf-8")


def load_dataset(data_dir) -> Dataset:
    root = Path(data_dir)
    obs = root / "observations.csv"
    if not obs.exists():
        raise DataError(f"no dataset in {root} (run ingest or synth first)")
    trips = ingest_trips(obs)
    vehicles = []
    with open(root / "vehicles.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            vehicles.append(
                Vehicle(int(row["vehicle_id"]), row["license"], row["vehicle_type"])
            )
    instants1 = []
    with open(root / "instants1.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            instants1.append(
                InstantRow(int(row["instant_id"]), parse_timestamp(row["instant"]))
            )
    points1 = []
    with open(root / "points1.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            points1.append(
                PointRow(int(row["point_id"]), parse(row["geom"], "geometry").payload)
            )
    regions = []
    with open(root / "regions.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            regions.append(Region(row["name"], parse(row["polygon"], "geometry").payload))
    meta = json.loads((root / "meta.json").read_text(encoding="utf-8"))
    licenses = [
        LicenseRow(i + 1, v.license, v.vehicle_id)
        for i, v in enumerate(sorted(vehicles, key=lambda v: v.vehicle_id))
    ]
    return Dataset(
        trips=trips,
        vehicles=vehicles,
        licenses1=licenses[:10],
        licenses2=licenses[10:20] if len(licenses) > 10 else licenses[:10],
        instants1=instants1,
        points1=points1,
        regions=regions,
        scale=meta.get("scale", "custom"),
    )


def save_boxes(rows, data_dir) -> None:
    root = Path(data_dir)
    root.mkdir(parents=True, exist_ok=True)
    with open(root / "boxes.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["row_id", "times", "box"])
        for row_id, t, box in rows:
            w.writerow([row_id, format_timestamp(t), serialize(box)])


def load_boxes(data_dir) -> List[Tuple[int, int, STBox]]:
    path = Path(data_dir) / "boxes.csv"
    if not path.exists():
        raise DataError(f"no box table in {data_dir} (run synth --rows first)")
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(
                (
                    int(row["row_id"]),
                    parse_timestamp(row["times"]),
                    parse(row["box"], "stbox").payload,
                )
            )
    return out

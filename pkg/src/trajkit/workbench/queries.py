"""Benchmark queries over the trips tables, with sequential and indexed
variants, plus the region report and the box-table scan experiment.

Indexed variants route overlap pre-filters through the R-tree whenever the
predicate matches the indexable pattern; every variant returns the same
rows.  Q5 exists twice: the plain form round-trips each trajectory through
its text format (the cost an external geometry interchange layer would
pay), the optimized form passes native values straight through.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..boxes import STBox, expand_space, overlaps
from ..geom import collect, distance, intersects
from ..literals import parse, serialize
from ..rtree import ColumnRef, RTree, scan_plan
from ..spans import span_contains
from ..temporal import start_timestamp, to_tstzspan, when_true
from ..tpoint import (
    at_values,
    geometry_to_stbox,
    t_dwithin,
    to_stbox,
    value_at_timestamp,
    at_geometry,
    length,
)
from .tables import DataError, Dataset, TripRow

QUERY_IDS = ("Q3", "Q5", "Q5opt", "Q7", "Q10")


@dataclass
class BenchReport:
    query_id: str
    variant: str
    scale: str
    wall_time_ns: int
    row_count: int
    workers: int = 1


def build_trip_index(trips: List[TripRow]) -> RTree:
    idx = RTree()
    for i, row in enumerate(trips):
        idx.insert(to_stbox(row.trip), i)
    return idx


def _overlap_prefilter(
    trips: List[TripRow],
    box: STBox,
    index: Optional[RTree],
    use_index: bool,
) -> List[int]:
    """Candidate trip row ids whose box overlaps the constant box."""
    if use_index and index is not None:
        binding = scan_plan("&&", ColumnRef("trip"), box)
        if binding is not None:
            return sorted(index.search(binding.query))
    return [i for i, r in enumerate(trips) if overlaps(to_stbox(r.trip), box)]


def run_query(
    query_id: str,
    ds: Dataset,
    use_index: bool = False,
    index: Optional[RTree] = None,
) -> Tuple[List[dict], BenchReport]:
    if query_id not in QUERY_IDS:
        raise DataError(f"unknown query id {query_id!r}")
    if use_index and index is None:
        index = build_trip_index(ds.trips)
    t0 = time.perf_counter_ns()
    if query_id == "Q3":
        rows = _q3(ds)
    elif query_id == "Q5":
        rows = _q5(ds, wkt_roundtrip=True)
    elif query_id == "Q5opt":
        rows = _q5(ds, wkt_roundtrip=False)
    elif query_id == "Q7":
        rows = _q7(ds, use_index, index)
    else:
        rows = _q10(ds, use_index, index)
    elapsed = time.perf_counter_ns() - t0
    variant = "indexed" if use_index else "seq"
    if query_id == "Q5":
        variant = "naive"
    elif query_id == "Q5opt":
        variant = "optimized"
    report = BenchReport(query_id, variant, ds.scale, elapsed, len(rows))
    return rows, report


def _q3(ds: Dataset) -> List[dict]:
    """Positions of the sample-license vehicles at each sample instant."""
    out = []
    seen = set()
    for lic in ds.licenses1:
        for inst in ds.instants1:
            for trip_row in ds.trips:
                if trip_row.vehicle_id != lic.vehicle_id:
                    continue
                if not span_contains(to_tstzspan(trip_row.trip), inst.instant):
                    continue
                pos = value_at_timestamp(trip_row.trip, inst.instant)
                if pos is None:
                    continue
                key = (lic.license, inst.instant_id, inst.instant, pos.x, pos.y)
                if key in seen:
                    continue
                seen.add(key)
                out.append(
                    {
                        "license": lic.license,
                        "instant_id": inst.instant_id,
                        "instant": inst.instant,
                        "pos": pos,
                    }
                )
    out.sort(key=lambda r: (r["license"], r["instant_id"]))
    return out


def _wkt_proxy(g):
    """Emulates handing a geometry across an external text/binary boundary."""
    return parse(serialize(g), "geometry").payload


def _trajectories_by_license(ds: Dataset, licenses, wkt_roundtrip: bool):
    groups: Dict[str, list] = {}
    for lic in licenses:
        for trip_row in ds.trips:
            if trip_row.vehicle_id != lic.vehicle_id:
                continue
            traj = trip_row.traj
            if wkt_roundtrip:
                traj = _wkt_proxy(traj)
            groups.setdefault(lic.license, []).append(traj)
    return {lic: collect(gs) for lic, gs in groups.items() if gs}


def _q5(ds: Dataset, wkt_roundtrip: bool) -> List[dict]:
    """Minimum distance between the collected trajectories of every
    license pair drawn from the two sample tables.

    The plain variant pushes every trajectory value through the text
    proxy: once when grouping and once per distance argument.  The
    optimized variant keeps native values end to end.
    """
    temp1 = _trajectories_by_license(ds, ds.licenses1, wkt_roundtrip)
    temp2 = _trajectories_by_license(ds, ds.licenses2, wkt_roundtrip)
    out = []
    for lic1 in sorted(temp1):
        for lic2 in sorted(temp2):
            a, b = temp1[lic1], temp2[lic2]
            if wkt_roundtrip:
                a, b = _wkt_proxy(a), _wkt_proxy(b)
            out.append(
                {
                    "license1": lic1,
                    "license2": lic2,
                    "min_dist": distance(a, b),
                }
            )
    return out


def _q7(ds: Dataset, use_index: bool, index: Optional[RTree]) -> List[dict]:
    """First passenger car to reach each sample point."""
    passenger = {
        v.vehicle_id: v.license
        for v in ds.vehicles
        if v.vehicle_type == "passenger"
    }
    earliest: Dict[Tuple[str, int], int] = {}
    for pt in ds.points1:
        box = geometry_to_stbox(pt.geom)
        for i in _overlap_prefilter(ds.trips, box, index, use_index):
            trip_row = ds.trips[i]
            lic = passenger.get(trip_row.vehicle_id)
            if lic is None:
                continue
            if not intersects(trip_row.traj, pt.geom):
                continue
            hit = at_values(trip_row.trip, pt.geom)
            if hit is None:
                continue
            t = start_timestamp(hit)
            key = (lic, pt.point_id)
            if key not in earliest or t < earliest[key]:
                earliest[key] = t
    out = []
    for pt in ds.points1:
        times = [t for (lic, pid), t in earliest.items() if pid == pt.point_id]
        if not times:
            continue
        best = min(times)
        for (lic, pid), t in sorted(earliest.items()):
            if pid == pt.point_id and t <= best:
                out.append(
                    {
                        "license": lic,
                        "point_id": pt.point_id,
                        "geom": pt.geom,
                        "instant": t,
                    }
                )
    out.sort(key=lambda r: (r["point_id"], r["license"]))
    return out


def _q10(ds: Dataset, use_index: bool, index: Optional[RTree]) -> List[dict]:
    """Meeting periods (within 3 units) between sample-license vehicles
    and any other vehicle."""
    out = []
    vehicle_ids = {v.vehicle_id for v in ds.vehicles}
    for lic in ds.licenses1:
        for t1 in ds.trips:
            if t1.vehicle_id != lic.vehicle_id:
                continue
            probe = expand_space(to_stbox(t1.trip), 3.0)
            for i in _overlap_prefilter(ds.trips, probe, index, use_index):
                t2 = ds.trips[i]
                if t2.vehicle_id == t1.vehicle_id or t2.vehicle_id not in vehicle_ids:
                    continue
                tb = t_dwithin(t1.trip, t2.trip, 3.0)
                if tb is None:
                    continue
                periods = when_true(tb)
                if periods is None:
                    continue
                out.append(
                    {
                        "license1": lic.license,
                        "car2_id": t2.vehicle_id,
                        "periods": periods,
                    }
                )
    out.sort(key=lambda r: (r["license1"], r["car2_id"], serialize(r["periods"])))
    return out


def region_report(trips: List[TripRow], regions) -> List[dict]:
    """Kilometers traveled inside each region, 3-decimal rounding; regions
    nothing crosses are omitted."""
    out = []
    for region in regions:
        total = 0.0
        touched = False
        for trip_row in trips:
            if not intersects(trip_row.traj, region.polygon):
                continue
            clipped = at_geometry(trip_row.trip, region.polygon)
            if clipped is None:
                continue
            touched = True
            total += length(clipped)
        if touched and total > 0.0:
            out.append({"region": region.name, "total_km": round(total / 1000.0, 3)})
    out.sort(key=lambda r: r["region"])
    return out


def run_scan(
    box_rows, query: STBox, use_index: bool = False, index: Optional[RTree] = None
) -> Tuple[List[int], BenchReport, Optional[RTree]]:
    """Overlap scan over the synthetic box table, sequential or indexed."""
    if use_index and index is None:
        index = RTree()
        for row_id, _, box in box_rows:
            index.insert(box, row_id)
    t0 = time.perf_counter_ns()
    if use_index:
        ids = sorted(index.search(query))
    else:
        ids = [row_id for row_id, _, box in box_rows if overlaps(box, query)]
    elapsed = time.perf_counter_ns() - t0
    report = BenchReport(
        "scan",
        "indexed" if use_index else "seq",
        f"rows{len(box_rows)}",
        elapsed,
        len(ids),
    )
    return ids, report, index


def run_benchmarks(
    ds: Dataset, ids=QUERY_IDS, repeat: int = 1, with_index: bool = True
) -> List[BenchReport]:
    reports = []
    index = build_trip_index(ds.trips) if with_index else None
    for qid in ids:
        for use_index in ((False, True) if with_index else (False,)):
            for _ in range(repeat):
                rows, rep = run_query(qid, ds, use_index=use_index, index=index)
                if use_index:
                    rep.variant = (
                        "indexed" if qid not in ("Q5", "Q5opt") else rep.variant
                    )
                reports.append(rep)
    return reports


def write_reports_csv(reports: List[BenchReport], path) -> None:
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["query_id", "variant", "scale", "wall_time_ns", "row_count", "workers"])
        for r in reports:
            w.writerow([r.query_id, r.variant, r.scale, r.wall_time_ns, r.row_count, r.workers])

"""Command-line workbench.

Subcommands: eval, ingest, synth, index, query, bench, scan, export.
Datasets persist as CSV files inside the workspace directory (default
``./trajkit-data``); indexes are rebuilt in memory on demand.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from ..literals import ParseError, parse, serialize
from ..rtree import RTree
from ..timetypes import format_timestamp
from . import geojson as geojson_mod
from .exprs import EvalError, eval_expression, render_literal
from .queries import (
    QUERY_IDS,
    build_trip_index,
    run_benchmarks,
    run_query,
    run_scan,
    region_report,
    write_reports_csv,
)
from .tables import (
    DataError,
    build_dataset,
    generate_synthetic_boxes,
    generate_trips_dataset,
    ingest_trips,
    load_boxes,
    load_dataset,
    save_boxes,
    save_dataset,
)

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _build_parser() -> _Parser:
    p = _Parser(prog="trajkit", description="moving-object data workbench")
    p.add_argument(
        "--data-dir",
        default="trajkit-data",
        help="workspace directory holding the loaded dataset",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", parents=[], help="evaluate an expression")
    sp.add_argument("expression")

    sp = sub.add_parser("ingest", help="load a trip observation file")
    sp.add_argument("--trips", required=True)
    sp.add_argument("--vehicles", default=None)

    sp = sub.add_parser("synth", help="generate synthetic data")
    sp.add_argument("--rows", type=int, default=None, help="diagonal box table size")
    sp.add_argument("--vehicles", type=int, default=20)
    sp.add_argument("--trips", type=int, default=50)
    sp.add_argument("--seed", type=int, default=42)

    sp = sub.add_parser("index", help="index maintenance")
    sp.add_argument("action", choices=["build"])

    sp = sub.add_parser("query", help="run a benchmark query")
    sp.add_argument("--id", required=True, choices=list(QUERY_IDS) + ["regions"])
    sp.add_argument("--use-index", action="store_true")
    sp.add_argument("--out", default=None, help="write result rows as CSV")

    sp = sub.add_parser("bench", help="run the benchmark suite")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--id", default=None, choices=list(QUERY_IDS))
    sp.add_argument("--repeat", type=int, default=1)
    sp.add_argument("--out", default="bench.csv")

    sp = sub.add_parser("scan", help="overlap scan over the box table")
    sp.add_argument("--stbox", required=True, help="query box literal")
    sp.add_argument("--use-index", action="store_true")

    sp = sub.add_parser("export", help="export query results")
    sp.add_argument("format", choices=["geojson"])
    sp.add_argument("--query", required=True, choices=list(QUERY_IDS) + ["regions"])
    sp.add_argument("--out", required=True)
    return p


def _rows_to_csv(rows, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if not rows:
            fh.write("")
            return
        w = csv.writer(fh)
        keys = list(rows[0].keys())
        w.writerow(keys)
        for row in rows:
            out = []
            for k in keys:
                v = row[k]
                if isinstance(v, (str, int, float, bool)):
                    out.append(v if not (k == "instant" and isinstance(v, int)) else format_timestamp(v))
                else:
                    out.append(serialize(v))
            w.writerow(out)


def _run_query_rows(args):
    ds = load_dataset(args.data_dir)
    if args.query_id == "regions":
        return region_report(ds.trips, ds.regions), None
    rows, report = run_query(args.query_id, ds, use_index=args.use_index)
    return rows, report


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (DataError, ParseError, EvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


def _dispatch(args) -> int:
    if args.command == "eval":
        result = eval_expression(args.expression)
        print(render_literal(result))
        return 0

    if args.command == "ingest":
        trips = ingest_trips(args.trips)
        vehicles = None
        if args.vehicles:
            vehicles = _read_vehicles(args.vehicles)
        ds = build_dataset(trips, vehicles=vehicles, scale=Path(args.trips).stem)
        save_dataset(ds, args.data_dir)
        print(f"loaded {len(ds.trips)} trips from {len(ds.vehicles)} vehicles")
        return 0

    if args.command == "synth":
        if args.rows is not None:
            rows = generate_synthetic_boxes(args.rows)
            save_boxes(rows, args.data_dir)
            print(f"wrote {len(rows)} boxes")
        else:
            ds = generate_trips_dataset(args.vehicles, args.trips, args.seed)
            save_dataset(ds, args.data_dir)
            print(f"wrote {len(ds.trips)} trips for {args.vehicles} vehicles")
        return 0

    if args.command == "index":
        data_dir = Path(args.data_dir)
        t0 = time.perf_counter()
        if (data_dir / "boxes.csv").exists():
            rows = load_boxes(data_dir)
            idx = RTree()
            for row_id, _, box in rows:
                idx.insert(box, row_id)
        else:
            ds = load_dataset(data_dir)
            idx = build_trip_index(ds.trips)
        dt = time.perf_counter() - t0
        print(
            f"built index: {len(idx)} entries, height {idx.height}, {dt * 1000:.1f} ms"
        )
        print("(indexes are in-memory; queries rebuild on demand)")
        return 0

    if args.command == "query":
        args.query_id = args.id
        rows, report = _run_query_rows(args)
        if args.out:
            _rows_to_csv(rows, args.out)
            print(f"wrote {len(rows)} rows to {args.out}")
        else:
            for row in rows[:20]:
                print({k: serialize(v) if not isinstance(v, (str, int, float, bool)) else v for k, v in row.items()})
            if len(rows) > 20:
                print(f"... {len(rows) - 20} more rows")
        if report is not None:
            print(
                f"{report.query_id} [{report.variant}] rows={report.row_count} "
                f"time={report.wall_time_ns / 1e6:.2f} ms"
            )
        return 0

    if args.command == "bench":
        ds = load_dataset(args.data_dir)
        ids = QUERY_IDS if args.all or not args.id else (args.id,)
        reports = run_benchmarks(ds, ids=ids, repeat=args.repeat)
        write_reports_csv(reports, args.out)
        print(f"{'query':8s} {'variant':10s} {'rows':>6s} {'ms':>10s}")
        for r in reports:
            print(
                f"{r.query_id:8s} {r.variant:10s} {r.row_count:>6d} {r.wall_time_ns / 1e6:>10.2f}"
            )
        print(f"wrote {args.out}")
        return 0

    if args.command == "scan":
        box_rows = load_boxes(args.data_dir)
        query = parse(args.stbox, "stbox").payload
        ids, report, _ = run_scan(box_rows, query, use_index=args.use_index)
        print(f"matched {len(ids)} rows in {report.wall_time_ns / 1e6:.3f} ms "
              f"[{report.variant}]")
        return 0

    if args.command == "export":
        args.query_id = args.query
        args.use_index = False
        rows, _ = _run_query_rows(args)
        geojson_mod.export_geojson(rows, args.out)
        print(f"wrote {len(rows)} features to {args.out}")
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def _read_vehicles(path):
    from .tables import Vehicle

    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(
                Vehicle(int(row["vehicle_id"]), row["license"], row["vehicle_type"])
            )
    return out


if __name__ == "__main__":
    sys.exit(main())

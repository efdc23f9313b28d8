"""Trip-analytics workbench: ingestion, benchmark queries, exports, CLI."""

from .tables import (
    DataError,
    Dataset,
    TripRow,
    build_dataset,
    generate_synthetic_boxes,
    generate_trips_dataset,
    ingest_trips,
    load_dataset,
    save_dataset,
)
from .queries import BenchReport, run_benchmarks, run_query, run_scan, region_report
from .geojson import export_geojson
from .exprs import EvalError, eval_expression, render_literal

__all__ = [
    "DataError",
    "Dataset",
    "TripRow",
    "build_dataset",
    "generate_synthetic_boxes",
    "generate_trips_dataset",
    "ingest_trips",
    "load_dataset",
    "save_dataset",
    "BenchReport",
    "run_benchmarks",
    "run_query",
    "run_scan",
    "region_report",
    "export_geojson",
    "EvalError",
    "eval_expression",
    "render_literal",
]

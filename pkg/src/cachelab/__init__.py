"""cachelab: an instrumented TTL cache, a slow-workload HTTP server, and a
benchmark client that measures what caching does to response times."""

from .bench import (
    ExperimentAborted,
    ExperimentConfig,
    ExperimentReport,
    ReductionSummary,
    RequestSample,
    compute_reduction,
    measure_latency,
    run_experiment,
)
from .cache import CacheEntry, CacheStats, LookupResult, Outcome, TtlCache
from .clock import Clock, MonotonicClock, SimulatedClock
from .reporting import (
    ComparisonTable,
    HitMissTable,
    emit_plot_data,
    render_comparison,
    render_hit_miss,
    render_report,
    report_from_json,
    report_to_json,
)
from .server import ServerConfig, TimedResponse, WorkloadServer, simulate_computation

__version__ = "0.1.0"

__all__ = [
    "CacheEntry",
    "CacheStats",
    "Clock",
    "ComparisonTable",
    "ExperimentAborted",
    "ExperimentConfig",
    "ExperimentReport",
    "HitMissTable",
    "LookupResult",
    "MonotonicClock",
    "Outcome",
    "ReductionSummary",
    "RequestSample",
    "ServerConfig",
    "SimulatedClock",
    "TimedResponse",
    "TtlCache",
    "WorkloadServer",
    "compute_reduction",
    "emit_plot_data",
    "measure_latency",
    "render_comparison",
    "render_hit_miss",
    "render_report",
    "report_from_json",
    "report_to_json",
    "run_experiment",
    "simulate_computation",
]

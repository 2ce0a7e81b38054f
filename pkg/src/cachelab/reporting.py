"""Render experiment results as tables (CSV, Markdown, JSON) and plot data.

Output is deterministic: fixed column order, LF line endings, no quoting
(every field is numeric or a simple label), so documents can be golden-tested
byte for byte. CSV numbers are written with Python's shortest round-trip
representation and parse back to the original values exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .bench import ExperimentConfig, ExperimentReport, RequestSample

FORMATS = ("csv", "md", "json")

REPORT_CSV_HEADER = "seq,sent_at_ms,client_latency_ms,server_duration_ms,cache_outcome"
COMPARISON_CSV_HEADER = "seq,no_cache_ms,cache_ms"
HIT_MISS_CSV_HEADER = "metric,count"

_VALID_OUTCOMES = ("hit", "miss_absent", "miss_expired")


@dataclass
class ComparisonTable:
    """Per-request durations of an uncached baseline next to a cached run."""

    rows: list[tuple[int, int, int]]  # (seq, baseline_ms, treated_ms)
    caption: str


@dataclass
class HitMissTable:
    total_requests: int
    cache_hits: int
    cache_misses: int


def comparison_table(baseline: ExperimentReport, treated: ExperimentReport) -> ComparisonTable:
    if len(baseline.samples) != len(treated.samples):
        raise ValueError(
            f"reports must be the same length: baseline has {len(baseline.samples)}"
            f" samples, treated has {len(treated.samples)}"
        )
    if not baseline.samples:
        raise ValueError("cannot tabulate empty reports")
    rows = []
    for b, t in zip(baseline.samples, treated.samples):
        if b.server_duration_ms is None or t.server_duration_ms is None:
            raise ValueError(f"request {b.seq} lacks a server duration")
        rows.append((b.seq, b.server_duration_ms, t.server_duration_ms))
    caption = "Response time per request: {} vs {}".format(
        baseline.config.label or "baseline", treated.config.label or "treated"
    )
    return ComparisonTable(rows=rows, caption=caption)


def hit_miss_table(report: ExperimentReport) -> HitMissTable:
    if not report.samples:
        raise ValueError("cannot tabulate an empty report")
    for sample in report.samples:
        if sample.cache_outcome not in _VALID_OUTCOMES:
            raise ValueError(
                f"request {sample.seq} has no cache outcome (uncached run?);"
                " render the comparison table instead"
            )
    return HitMissTable(
        total_requests=len(report.samples),
        cache_hits=report.hit_count,
        cache_misses=report.miss_count,
    )


def render_comparison(baseline: ExperimentReport, treated: ExperimentReport, format: str = "csv") -> str:
    table = comparison_table(baseline, treated)
    if format == "csv":
        lines = [COMPARISON_CSV_HEADER]
        lines += [f"{seq},{no_cache},{cache}" for seq, no_cache, cache in table.rows]
        return "\n".join(lines) + "\n"
    if format == "md":
        lines = [
            table.caption,
            "",
            "| Request No | No Cache (ms) | Cache (ms) |",
            "| ---: | ---: | ---: |",
        ]
        lines += [f"| {seq} | {no_cache} | {cache} |" for seq, no_cache, cache in table.rows]
        return "\n".join(lines) + "\n"
    if format == "json":
        doc = {
            "caption": table.caption,
            "rows": [
                {"seq": seq, "no_cache_ms": no_cache, "cache_ms": cache}
                for seq, no_cache, cache in table.rows
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")


def render_hit_miss(report: ExperimentReport, format: str = "csv") -> str:
    table = hit_miss_table(report)
    if format == "csv":
        return (
            f"{HIT_MISS_CSV_HEADER}\n"
            f"total_requests,{table.total_requests}\n"
            f"cache_hits,{table.cache_hits}\n"
            f"cache_misses,{table.cache_misses}\n"
        )
    if format == "md":
        return (
            "| Metric | Count |\n"
            "| :--- | ---: |\n"
            f"| Total Requests | {table.total_requests} |\n"
            f"| Cache Hits | {table.cache_hits} |\n"
            f"| Cache Misses | {table.cache_misses} |\n"
        )
    if format == "json":
        doc = {
            "total_requests": table.total_requests,
            "cache_hits": table.cache_hits,
            "cache_misses": table.cache_misses,
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")


def render_report(report: ExperimentReport, format: str = "csv") -> str:
    """One run as a document; CSV columns match the documented sample schema."""
    if format == "csv":
        lines = [REPORT_CSV_HEADER]
        for s in report.samples:
            duration = "" if s.server_duration_ms is None else s.server_duration_ms
            lines.append(
                f"{s.seq},{s.sent_at_ms},{s.client_latency_ms},{duration},{s.cache_outcome}"
            )
        return "\n".join(lines) + "\n"
    if format == "md":
        lines = [
            "| Seq | Sent At (ms) | Client Latency (ms) | Server Duration (ms) | Outcome |",
            "| ---: | ---: | ---: | ---: | :--- |",
        ]
        for s in report.samples:
            duration = "-" if s.server_duration_ms is None else s.server_duration_ms
            lines.append(
                f"| {s.seq} | {s.sent_at_ms} | {s.client_latency_ms} | {duration} | {s.cache_outcome} |"
            )
        lines.append("")
        lines.append(_summary_line(report))
        return "\n".join(lines) + "\n"
    if format == "json":
        return report_to_json(report)
    raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")


def _summary_line(report: ExperimentReport) -> str:
    def fmt(value: Optional[float]) -> str:
        return "-" if value is None else f"{value:.1f}"

    label = report.config.label or "run"
    return (
        f"{label}: {report.hit_count} hits, {report.miss_count} misses;"
        f" mean duration {fmt(report.mean_duration_ms)} ms"
        f" (hits {fmt(report.mean_hit_duration_ms)} ms, misses {fmt(report.mean_miss_duration_ms)} ms)"
    )


def report_to_json(report: ExperimentReport) -> str:
    doc = {
        "config": {
            "target_url": report.config.target_url,
            "num_requests": report.config.num_requests,
            "interval_ms": report.config.interval_ms,
            "label": report.config.label,
        },
        "samples": [
            {
                "seq": s.seq,
                "sent_at_ms": s.sent_at_ms,
                "client_latency_ms": s.client_latency_ms,
                "server_duration_ms": s.server_duration_ms,
                "cache_outcome": s.cache_outcome,
            }
            for s in report.samples
        ],
        "hit_count": report.hit_count,
        "miss_count": report.miss_count,
        "mean_duration_ms": report.mean_duration_ms,
        "mean_hit_duration_ms": report.mean_hit_duration_ms,
        "mean_miss_duration_ms": report.mean_miss_duration_ms,
    }
    return json.dumps(doc, indent=2) + "\n"


def report_from_json(text: str) -> ExperimentReport:
    doc = json.loads(text)
    config = ExperimentConfig(
        target_url=doc["config"]["target_url"],
        num_requests=doc["config"]["num_requests"],
        interval_ms=doc["config"]["interval_ms"],
        label=doc["config"].get("label", ""),
    )
    samples = [
        RequestSample(
            seq=s["seq"],
            sent_at_ms=s["sent_at_ms"],
            client_latency_ms=s["client_latency_ms"],
            server_duration_ms=s["server_duration_ms"],
            cache_outcome=s["cache_outcome"],
        )
        for s in doc["samples"]
    ]
    return ExperimentReport.from_samples(config, samples)


def parse_report_csv(text: str) -> list[RequestSample]:
    lines = text.splitlines()
    if not lines or lines[0] != REPORT_CSV_HEADER:
        raise ValueError(f"expected header {REPORT_CSV_HEADER!r}")
    samples = []
    for line in lines[1:]:
        seq, sent_at, latency, duration, outcome = line.split(",")
        samples.append(
            RequestSample(
                seq=int(seq),
                sent_at_ms=float(sent_at),
                client_latency_ms=float(latency),
                server_duration_ms=int(duration) if duration else None,
                cache_outcome=outcome,
            )
        )
    return samples


def parse_comparison_csv(text: str) -> list[tuple[int, int, int]]:
    lines = text.splitlines()
    if not lines or lines[0] != COMPARISON_CSV_HEADER:
        raise ValueError(f"expected header {COMPARISON_CSV_HEADER!r}")
    return [tuple(int(field) for field in line.split(",")) for line in lines[1:]]


def emit_plot_data(baseline: ExperimentReport, treated: ExperimentReport, out_dir) -> list[Path]:
    """Write plain columnar series any plotting tool can read.

    response_times.dat: '# seq no_cache_ms cache_ms', one row per request.
    hit_miss.dat: '# outcome count' with hit and miss totals of the treated
    run; only written when the treated run carries cache outcomes.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = comparison_table(baseline, treated)
    written = []

    series_path = out_dir / "response_times.dat"
    lines = ["# seq no_cache_ms cache_ms"]
    lines += [f"{seq} {no_cache} {cache}" for seq, no_cache, cache in table.rows]
    series_path.write_text("\n".join(lines) + "\n")
    written.append(series_path)

    if all(s.cache_outcome in _VALID_OUTCOMES for s in treated.samples):
        counts = hit_miss_table(treated)
        counts_path = out_dir / "hit_miss.dat"
        counts_path.write_text(
            f"# outcome count\nhit {counts.cache_hits}\nmiss {counts.cache_misses}\n"
        )
        written.append(counts_path)
    return written

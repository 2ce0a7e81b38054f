"""Benchmark client: fixed-interval sequential GET requests against a target.

The driver sends request k at run_start + (k-1)*interval, but never before
response k-1 has fully arrived; if a response overruns its slot the schedule
slips and the slip is visible in sent_at_ms, never hidden. Per request it
records the client-observed latency and whatever the server reports about
itself (duration header, cache outcome).
"""

from __future__ import annotations

import time
import urllib.request
from dataclasses import dataclass, field
from statistics import fmean
from typing import Optional

from .server import DURATION_HEADER, OUTCOME_HEADER

MISS_OUTCOMES = ("miss_absent", "miss_expired")


@dataclass
class ExperimentConfig:
    target_url: str
    num_requests: int = 10
    interval_ms: int = 250
    label: str = ""

    def validate(self) -> None:
        if not self.target_url:
            raise ValueError("target_url must not be empty")
        if self.num_requests < 1:
            raise ValueError(f"num_requests must be >= 1, got {self.num_requests}")
        if self.interval_ms < 0:
            raise ValueError(f"interval_ms must be >= 0, got {self.interval_ms}")


@dataclass
class RequestSample:
    seq: int  # 1-based
    sent_at_ms: float  # offset from run start
    client_latency_ms: float  # send to fully received response
    server_duration_ms: Optional[int]  # None when the server sends no header
    cache_outcome: str = "none"  # hit | miss_absent | miss_expired | none

    @property
    def is_hit(self) -> bool:
        return self.cache_outcome == "hit"

    @property
    def is_miss(self) -> bool:
        return self.cache_outcome in MISS_OUTCOMES


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    samples: list[RequestSample] = field(default_factory=list)
    hit_count: int = 0
    miss_count: int = 0
    mean_duration_ms: Optional[float] = None
    mean_hit_duration_ms: Optional[float] = None
    mean_miss_duration_ms: Optional[float] = None

    @classmethod
    def from_samples(cls, config: ExperimentConfig, samples: list[RequestSample]) -> "ExperimentReport":
        for position, sample in enumerate(samples, start=1):
            if sample.seq != position:
                raise ValueError(
                    f"sample seq must run 1..N without gaps; position {position} has seq {sample.seq}"
                )
        return cls(
            config=config,
            samples=samples,
            hit_count=sum(1 for s in samples if s.is_hit),
            miss_count=sum(1 for s in samples if s.is_miss),
            mean_duration_ms=_mean_duration(samples),
            mean_hit_duration_ms=_mean_duration([s for s in samples if s.is_hit]),
            mean_miss_duration_ms=_mean_duration([s for s in samples if s.is_miss]),
        )


def _mean_duration(samples: list[RequestSample]) -> Optional[float]:
    values = [s.server_duration_ms for s in samples if s.server_duration_ms is not None]
    return fmean(values) if values else None


class ExperimentAborted(RuntimeError):
    """A request failed mid-run; carries the samples collected before it."""

    def __init__(self, config: ExperimentConfig, samples: list[RequestSample], failed_seq: int, cause: Exception):
        super().__init__(
            f"request {failed_seq}/{config.num_requests} failed: {cause};"
            f" {len(samples)} samples collected"
        )
        self.config = config
        self.samples = samples
        self.failed_seq = failed_seq

    def partial_report(self) -> ExperimentReport:
        return ExperimentReport.from_samples(self.config, self.samples)


def measure_latency(
    url: str,
    seq: int = 1,
    sent_at_ms: float = 0.0,
    timeout_s: float = 30.0,
) -> RequestSample:
    """Issue one GET and time the full exchange on the monotonic clock.

    Servers that omit the duration/outcome headers still yield a usable
    sample; those fields just come back absent.
    """
    request = urllib.request.Request(url, method="GET")
    t0 = time.monotonic()
    with urllib.request.urlopen(request, timeout=timeout_s) as response:
        response.read()
        t1 = time.monotonic()
        headers = response.headers
    return RequestSample(
        seq=seq,
        sent_at_ms=sent_at_ms,
        client_latency_ms=round((t1 - t0) * 1000.0, 3),
        server_duration_ms=_parse_duration(headers.get(DURATION_HEADER)),
        cache_outcome=headers.get(OUTCOME_HEADER, "none"),
    )


def _parse_duration(raw: Optional[str]) -> Optional[int]:
    try:
        return int(raw) if raw is not None else None
    except ValueError:
        return None


def run_experiment(config: ExperimentConfig, timeout_s: float = 30.0) -> ExperimentReport:
    """Replay the fixed-interval protocol: num_requests sequential GETs.

    Raises ExperimentAborted on connection failure or a non-200 response;
    a sequential timing experiment is invalid once a slot is lost.
    """
    config.validate()
    samples: list[RequestSample] = []
    start = time.monotonic()

    def elapsed_ms() -> float:
        return (time.monotonic() - start) * 1000.0

    for seq in range(1, config.num_requests + 1):
        wait_ms = (seq - 1) * config.interval_ms - elapsed_ms()
        if wait_ms > 0:
            time.sleep(wait_ms / 1000.0)
        sent_at = round(elapsed_ms(), 3)
        try:
            samples.append(
                measure_latency(config.target_url, seq=seq, sent_at_ms=sent_at, timeout_s=timeout_s)
            )
        except OSError as exc:  # URLError/HTTPError/timeouts
            raise ExperimentAborted(config, samples, seq, exc) from exc
    return ExperimentReport.from_samples(config, samples)


@dataclass
class ReductionSummary:
    """Response-time reduction of a treated run relative to a baseline.

    hit_only_pct is the headline figure: mean duration of the treated run's
    cache hits against the baseline mean. It is None when the treated run
    produced no hits.
    """

    overall_pct: float
    hit_only_pct: Optional[float]
    baseline_mean_ms: float
    treated_mean_ms: float
    treated_hit_mean_ms: Optional[float]


def compute_reduction(baseline: ExperimentReport, treated: ExperimentReport) -> ReductionSummary:
    if not baseline.samples or not treated.samples:
        raise ValueError("both reports must contain samples")
    if baseline.mean_duration_ms is None or treated.mean_duration_ms is None:
        raise ValueError("both reports need server-reported durations")
    if baseline.mean_duration_ms <= 0:
        raise ValueError("baseline mean duration must be positive")
    overall = 100.0 * (1.0 - treated.mean_duration_ms / baseline.mean_duration_ms)
    hit_only = None
    if treated.hit_count > 0 and treated.mean_hit_duration_ms is not None:
        hit_only = 100.0 * (1.0 - treated.mean_hit_duration_ms / baseline.mean_duration_ms)
    return ReductionSummary(
        overall_pct=overall,
        hit_only_pct=hit_only,
        baseline_mean_ms=baseline.mean_duration_ms,
        treated_mean_ms=treated.mean_duration_ms,
        treated_hit_mean_ms=treated.mean_hit_duration_ms,
    )

"""HTTP workload server: a deliberately slow GET endpoint, optionally cached.

One binary, two modes. In uncached mode every request runs the simulated
computation; in cached mode the handler goes through the TTL cache and the
response says which path it took. Durations are measured inside the handler
with the monotonic clock and truncated to whole milliseconds, so cache hits
legitimately report 0 ms.

Endpoints:
    GET  /compute -> 200, body {payload, server_duration_ms, cache_outcome}
    GET  /stats   -> 200 (cached mode only; 404 otherwise)
    POST /reset   -> 204
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable, Optional
from urllib.parse import parse_qsl, urlencode, urlsplit

from .cache import TtlCache
from .clock import Clock, MonotonicClock

DURATION_HEADER = "X-Server-Duration-Ms"
OUTCOME_HEADER = "X-Cache-Outcome"

# Fixed payload so cached and freshly computed responses are byte-comparable.
RESULT_PAYLOAD = "simulated workload result"


def simulate_computation(delay_ms: int) -> str:
    """Stand-in for a slow backend: suspend for at least delay_ms, then
    return the same payload every time.

    Timer-based suspension, not CPU spinning, so the delay is precise and
    the machine stays quiet for latency measurements.
    """
    if delay_ms <= 0:
        raise ValueError(f"delay_ms must be positive, got {delay_ms}")
    time.sleep(delay_ms / 1000.0)
    return RESULT_PAYLOAD


def cache_key(path: str, query: str = "") -> str:
    """Request path with query parameters in a canonical order."""
    if not query:
        return path
    pairs = sorted(parse_qsl(query, keep_blank_values=True))
    return path + "?" + urlencode(pairs)


@dataclass
class ServerConfig:
    mode: str  # "uncached" | "cached"
    delay_ms: int = 1000
    ttl_ms: Optional[int] = None  # required iff mode == "cached"
    port: int = 8080

    def validate(self) -> None:
        if self.mode not in ("uncached", "cached"):
            raise ValueError(f"mode must be 'uncached' or 'cached', got {self.mode!r}")
        if self.delay_ms <= 0:
            raise ValueError(f"delay_ms must be positive, got {self.delay_ms}")
        if self.mode == "cached":
            if self.ttl_ms is None:
                raise ValueError("cached mode requires ttl_ms")
            if self.ttl_ms <= 0:
                raise ValueError(f"ttl_ms must be positive, got {self.ttl_ms}")
        elif self.ttl_ms is not None:
            raise ValueError("ttl_ms is only valid in cached mode")


@dataclass
class TimedResponse:
    payload: str
    server_duration_ms: int  # handler entry to exit, truncated
    cache_outcome: str  # hit | miss_absent | miss_expired | none

    def to_json(self) -> str:
        return json.dumps(
            {
                "payload": self.payload,
                "server_duration_ms": self.server_duration_ms,
                "cache_outcome": self.cache_outcome,
            }
        )


class WorkloadServer(ThreadingHTTPServer):
    """Threaded HTTP server bound to loopback; correctness under concurrent
    requests relies only on the cache's per-operation atomicity."""

    daemon_threads = True

    def __init__(
        self,
        config: ServerConfig,
        clock: Optional[Clock] = None,
        compute_fn: Callable[[int], str] = simulate_computation,
    ):
        config.validate()
        self.config = config
        self.clock = clock if clock is not None else MonotonicClock()
        self.compute_fn = compute_fn
        self.cache: Optional[TtlCache] = None
        if config.mode == "cached":
            self.cache = TtlCache(config.ttl_ms, clock=self.clock)
        super().__init__(("127.0.0.1", config.port), _WorkloadHandler)

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


class _WorkloadHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server: WorkloadServer

    def do_GET(self):
        parts = urlsplit(self.path)
        if parts.path == "/compute":
            self._handle_compute(parts.path, parts.query)
        elif parts.path == "/stats" and self.server.cache is not None:
            self._handle_stats()
        else:
            self.send_error(404)

    def do_POST(self):
        if urlsplit(self.path).path == "/reset":
            if self.server.cache is not None:
                self.server.cache.reset()
            self.send_response(204)
            self.end_headers()
        else:
            self.send_error(404)

    def _handle_compute(self, path: str, query: str):
        srv = self.server
        start = srv.clock.now()
        try:
            if srv.cache is None:
                payload = srv.compute_fn(srv.config.delay_ms)
                outcome = "none"
            else:
                payload, result = srv.cache.get_or_compute(
                    cache_key(path, query),
                    lambda: srv.compute_fn(srv.config.delay_ms),
                )
                outcome = result.value
        except Exception:
            self.send_error(500, "computation failed")
            return
        duration = int(srv.clock.now() - start)
        self._send_json(
            200,
            TimedResponse(payload, duration, outcome).to_json(),
            extra={DURATION_HEADER: str(duration), OUTCOME_HEADER: outcome},
        )

    def _handle_stats(self):
        stats = self.server.cache.stats_snapshot()
        self._send_json(200, json.dumps(stats.as_dict()))

    def _send_json(self, status: int, body: str, extra: Optional[dict] = None):
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        for name, value in (extra or {}).items():
            self.send_header(name, value)
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, format, *args):
        pass  # keep benchmark runs quiet


def run_server(config: ServerConfig) -> None:
    """Serve until interrupted; prints one line saying where it listens."""
    server = WorkloadServer(config)
    ttl = f" ttl={config.ttl_ms}ms" if config.mode == "cached" else ""
    print(f"serving on {server.url} mode={config.mode} delay={config.delay_ms}ms{ttl}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()

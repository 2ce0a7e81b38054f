"""Shared test plumbing: in-thread servers, subprocess servers, HTTP helpers."""

from __future__ import annotations

import json
import socket
import subprocess
import sys
import threading
import time
import urllib.error
import urllib.request
from contextlib import contextmanager
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from cachelab import ExperimentConfig, ExperimentReport, RequestSample, ServerConfig, WorkloadServer


@contextmanager
def running_server(config: ServerConfig, **kwargs):
    """WorkloadServer on an ephemeral port, served from a daemon thread."""
    server = WorkloadServer(config, **kwargs)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield server
    finally:
        server.shutdown()
        server.server_close()


def fetch(url: str, method: str = "GET", timeout: float = 30.0):
    """One request; returns (status, headers dict, body bytes). 4xx/5xx do not raise."""
    request = urllib.request.Request(url, method=method)
    try:
        with urllib.request.urlopen(request, timeout=timeout) as response:
            return response.status, dict(response.headers), response.read()
    except urllib.error.HTTPError as err:
        body = err.read()
        return err.code, dict(err.headers), body


def get_json(url: str, timeout: float = 30.0):
    status, headers, body = fetch(url, timeout=timeout)
    assert status == 200, f"GET {url} -> {status}"
    return json.loads(body), headers


def get_stats(base_url: str) -> dict:
    doc, _ = get_json(base_url + "/stats")
    return doc


def post_reset(base_url: str) -> int:
    status, _, _ = fetch(base_url + "/reset", method="POST")
    return status


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def wait_until_listening(port: int, timeout: float = 10.0) -> None:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        try:
            with socket.create_connection(("127.0.0.1", port), timeout=0.25):
                return
        except OSError:
            time.sleep(0.02)
    raise RuntimeError(f"server on port {port} did not come up within {timeout}s")


@contextmanager
def server_process(mode: str, delay_ms: int, ttl_ms: int | None = None):
    """The real CLI entry point in a subprocess, for end-to-end runs."""
    port = free_port()
    cmd = [
        sys.executable, "-m", "cachelab", "serve",
        "--mode", mode, "--delay-ms", str(delay_ms), "--port", str(port),
    ]
    if ttl_ms is not None:
        cmd += ["--ttl-ms", str(ttl_ms)]
    proc = subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.STDOUT)
    try:
        wait_until_listening(port)
        yield f"http://127.0.0.1:{port}"
    finally:
        proc.terminate()
        try:
            proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            proc.kill()


def make_report(durations, outcomes=None, label="", interval_ms=250,
                url="http://127.0.0.1:9/compute") -> ExperimentReport:
    """Synthetic report from duration/outcome columns, for table tests."""
    outcomes = outcomes if outcomes is not None else ["none"] * len(durations)
    samples = [
        RequestSample(
            seq=i + 1,
            sent_at_ms=float(i * interval_ms),
            client_latency_ms=(duration if duration is not None else 0) + 0.4,
            server_duration_ms=duration,
            cache_outcome=outcome,
        )
        for i, (duration, outcome) in enumerate(zip(durations, outcomes))
    ]
    config = ExperimentConfig(
        target_url=url, num_requests=len(durations), interval_ms=interval_ms, label=label
    )
    return ExperimentReport.from_samples(config, samples)


class _BareHandler(BaseHTTPRequestHandler):
    """200 OK with no instrumentation headers (a third-party server)."""

    def do_GET(self):
        body = b"ok"
        self.send_response(200)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format, *args):
        pass


class _FailingHandler(BaseHTTPRequestHandler):
    """Returns 500 on the Nth request, 200 otherwise."""

    fail_on = 3
    _count = 0
    _lock = threading.Lock()

    def do_GET(self):
        with self._lock:
            type(self)._count += 1
            count = self._count
        if count == self.fail_on:
            self.send_error(500)
            return
        body = b"ok"
        self.send_response(200)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format, *args):
        pass


@contextmanager
def plain_server(handler_cls):
    server = ThreadingHTTPServer(("127.0.0.1", 0), handler_cls)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_address[1]}"
    finally:
        server.shutdown()
        server.server_close()


def bare_server():
    return plain_server(_BareHandler)


def failing_server(fail_on: int = 3):
    handler = type("FailingHandler", (_FailingHandler,), {"fail_on": fail_on, "_count": 0})
    return plain_server(handler)

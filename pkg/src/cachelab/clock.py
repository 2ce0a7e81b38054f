"""Millisecond time sources: a real monotonic clock and a simulated one.

Everything that makes an expiry or duration decision takes one of these
instead of calling time functions directly, so tests can replay exact
timelines.
"""

from __future__ import annotations

import time
from typing import Protocol


class Clock(Protocol):
    def now(self) -> float:
        """Current time in milliseconds. Successive readings never decrease."""
        ...


class MonotonicClock:
    """Wall-clock-independent time source backed by time.monotonic()."""

    def now(self) -> float:
        return time.monotonic() * 1000.0


class SimulatedClock:
    """Manually advanced clock for deterministic tests.

    Time stands still until advance() is called.
    """

    def __init__(self, start_ms: float = 0.0):
        self._now = float(start_ms)

    def now(self) -> float:
        return self._now

    def advance(self, delta_ms: float) -> None:
        if delta_ms < 0:
            raise ValueError(f"cannot move time backward (delta_ms={delta_ms})")
        self._now += delta_ms

    def advance_to(self, target_ms: float) -> None:
        if target_ms < self._now:
            raise ValueError(
                f"cannot move time backward (now={self._now}, target={target_ms})"
            )
        self._now = float(target_ms)

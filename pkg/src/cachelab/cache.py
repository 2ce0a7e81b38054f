"""In-memory key/value cache with a single fixed TTL and hit/miss accounting.

An entry is live while its age is strictly less than the TTL; an entry whose
age equals the TTL is already expired. Expired entries are evicted lazily,
at lookup time. All time comes from an injected clock so the behaviour is
reproducible under simulation.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, replace
from typing import Any, Callable, NamedTuple, Optional

from .clock import Clock, MonotonicClock


class Outcome(str, enum.Enum):
    """How a lookup was answered."""

    HIT = "hit"
    MISS_ABSENT = "miss_absent"
    MISS_EXPIRED = "miss_expired"

    @property
    def is_hit(self) -> bool:
        return self is Outcome.HIT

    @property
    def is_miss(self) -> bool:
        return not self.is_hit


class LookupResult(NamedTuple):
    outcome: Outcome
    value: Any  # None on a miss


@dataclass
class CacheEntry:
    value: Any
    stored_at: float  # clock reading when the value finished computing


@dataclass
class CacheStats:
    """Monotone counters; only reset() zeroes them."""

    hits: int = 0
    misses_absent: int = 0
    misses_expired: int = 0
    insertions: int = 0

    @property
    def misses(self) -> int:
        return self.misses_absent + self.misses_expired

    @property
    def total_lookups(self) -> int:
        return self.hits + self.misses

    def as_dict(self) -> dict:
        return {
            "total_lookups": self.total_lookups,
            "hits": self.hits,
            "misses_absent": self.misses_absent,
            "misses_expired": self.misses_expired,
            "insertions": self.insertions,
        }


class TtlCache:
    """Thread-safe map with one fixed time-to-live for every entry.

    Individual operations are atomic with respect to the entry map and the
    counters; there is no request coalescing, so concurrent misses on the
    same key may each run their compute function.
    """

    def __init__(self, ttl_ms: float, clock: Optional[Clock] = None):
        if ttl_ms <= 0:
            raise ValueError(f"ttl_ms must be positive, got {ttl_ms}")
        self._ttl_ms = float(ttl_ms)
        self._clock = clock if clock is not None else MonotonicClock()
        self._entries: dict[str, CacheEntry] = {}
        self._stats = CacheStats()
        self._lock = threading.RLock()

    @property
    def ttl_ms(self) -> float:
        return self._ttl_ms

    def get(self, key: str) -> LookupResult:
        """Look up a key, evicting it first if it has expired.

        Absence is a normal result, not an error.
        """
        with self._lock:
            return self._lookup(key)

    def put(self, key: str, value: Any) -> None:
        """Store a value, overwriting any previous entry for the key."""
        with self._lock:
            self._store(key, value)

    def get_or_compute(self, key: str, compute: Callable[[], Any]) -> tuple[Any, Outcome]:
        """Serve from cache, or invoke compute exactly once and store the result.

        The stored timestamp is the compute completion time, so the TTL window
        starts when the value exists. If compute raises, nothing is stored but
        the miss has already been counted.
        """
        with self._lock:
            found = self._lookup(key)
        if found.outcome.is_hit:
            return found.value, found.outcome
        # compute runs outside the lock: concurrent misses may both compute
        value = compute()
        with self._lock:
            self._store(key, value)
        return value, found.outcome

    def stats_snapshot(self) -> CacheStats:
        """Point-in-time copy of the counters."""
        with self._lock:
            return replace(self._stats)

    def reset(self) -> None:
        """Drop all entries and zero all counters."""
        with self._lock:
            self._entries.clear()
            self._stats = CacheStats()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    # internals -- callers must hold the lock

    def _lookup(self, key: str) -> LookupResult:
        entry = self._entries.get(key)
        if entry is None:
            self._stats.misses_absent += 1
            return LookupResult(Outcome.MISS_ABSENT, None)
        age = self._clock.now() - entry.stored_at
        if age >= self._ttl_ms:  # age == ttl is expired
            del self._entries[key]
            self._stats.misses_expired += 1
            return LookupResult(Outcome.MISS_EXPIRED, None)
        self._stats.hits += 1
        return LookupResult(Outcome.HIT, entry.value)

    def _store(self, key: str, value: Any) -> None:
        self._entries[key] = CacheEntry(value=value, stored_at=self._clock.now())
        self._stats.insertions += 1

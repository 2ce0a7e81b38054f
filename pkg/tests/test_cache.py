"""TTL cache semantics under a simulated clock."""

import threading

import pytest

from cachelab import Outcome, SimulatedClock, TtlCache


@pytest.fixture
def clock():
    return SimulatedClock()


@pytest.fixture
def cache(clock):
    return TtlCache(5000, clock=clock)


def test_ttl_must_be_positive():
    with pytest.raises(ValueError):
        TtlCache(0)
    with pytest.raises(ValueError):
        TtlCache(-100)


def test_get_on_empty_cache_is_absent_miss(cache):
    outcome, value = cache.get("k")
    assert outcome is Outcome.MISS_ABSENT
    assert value is None


def test_get_within_ttl_is_hit(cache, clock):
    cache.put("k", "v")
    clock.advance(4999)
    assert cache.get("k") == (Outcome.HIT, "v")


def test_get_at_exact_ttl_age_is_expired_miss(cache, clock):
    # age == ttl is already expired: liveness is strict inequality
    cache.put("k", "v")
    clock.advance(5000)
    outcome, value = cache.get("k")
    assert outcome is Outcome.MISS_EXPIRED
    assert value is None


def test_zero_age_entry_is_live(cache):
    cache.put("k", "v")
    assert cache.get("k").outcome is Outcome.HIT


def test_last_write_wins(cache):
    cache.put("k", "v1")
    cache.put("k", "v2")
    assert cache.get("k") == (Outcome.HIT, "v2")


def test_overwrite_restarts_ttl_window(cache, clock):
    cache.put("k", "v")
    clock.advance(3000)
    cache.put("k", "v")
    clock.advance(4000)  # age 4000 from the second put, 7000 from the first
    assert cache.get("k").outcome is Outcome.HIT


def test_expired_entry_is_removed_at_lookup(cache, clock):
    cache.put("k", "v")
    clock.advance(5000)
    assert cache.get("k").outcome is Outcome.MISS_EXPIRED
    assert len(cache) == 0
    # entry was consumed, so the same key now misses as absent
    assert cache.get("k").outcome is Outcome.MISS_ABSENT


def test_get_or_compute_first_miss_then_hit(cache):
    value, outcome = cache.get_or_compute("k", lambda: "r")
    assert (value, outcome) == ("r", Outcome.MISS_ABSENT)
    value, outcome = cache.get_or_compute("k", lambda: "other")
    assert (value, outcome) == ("r", Outcome.HIT)


def test_get_or_compute_invokes_compute_once_per_miss(cache):
    calls = 0

    def compute():
        nonlocal calls
        calls += 1
        return "r"

    cache.get_or_compute("k", compute)
    cache.get_or_compute("k", compute)
    cache.get_or_compute("k", compute)
    assert calls == 1


def test_get_or_compute_stores_at_completion_time(clock):
    # ttl window starts when the value exists, not when the request arrived
    cache = TtlCache(700, clock=clock)

    def slow_compute():
        clock.advance(200)
        return "r"

    cache.get_or_compute("k", slow_compute)  # stored at t=200
    clock.advance_to(850)
    assert cache.get("k").outcome is Outcome.HIT  # age 650 < 700
    clock.advance_to(900)
    assert cache.get("k").outcome is Outcome.MISS_EXPIRED  # age 700


def test_get_or_compute_timeline_miss_hit_pattern(clock):
    # calls every 250 ms, compute takes 200 ms, ttl 700 ms:
    # stored at 200/1200/..., so every fourth call finds the entry expired
    cache = TtlCache(700, clock=clock)
    outcomes = []
    for k in range(8):
        clock.advance_to(k * 250)

        def compute():
            clock.advance(200)
            return "r"

        _, outcome = cache.get_or_compute("k", compute)
        outcomes.append(outcome)
    assert [o.value for o in outcomes] == [
        "miss_absent", "hit", "hit", "hit",
        "miss_expired", "hit", "hit", "hit",
    ]


def test_ten_call_run_yields_seven_hits_three_misses(clock):
    cache = TtlCache(700, clock=clock)
    for k in range(10):
        clock.advance_to(k * 250)

        def compute():
            clock.advance(200)
            return "r"

        cache.get_or_compute("k", compute)
    stats = cache.stats_snapshot()
    assert stats.total_lookups == 10
    assert stats.hits == 7
    assert stats.misses == 3


def test_get_or_compute_failure_propagates_counts_miss_stores_nothing(cache):
    def boom():
        raise RuntimeError("backend down")

    with pytest.raises(RuntimeError):
        cache.get_or_compute("k", boom)
    stats = cache.stats_snapshot()
    assert stats.misses_absent == 1
    assert stats.insertions == 0
    assert len(cache) == 0
    assert cache.get("k").outcome is Outcome.MISS_ABSENT


def test_fresh_cache_has_zeroed_stats(cache):
    stats = cache.stats_snapshot()
    assert (stats.hits, stats.misses_absent, stats.misses_expired, stats.insertions) == (0, 0, 0, 0)
    assert stats.total_lookups == 0


def test_stats_snapshot_is_a_detached_copy(cache):
    snapshot = cache.stats_snapshot()
    snapshot.hits = 99
    assert cache.stats_snapshot().hits == 0


def test_stats_accounting_conservation(cache, clock):
    cache.put("a", "1")
    cache.get("a")          # hit
    cache.get("b")          # absent
    clock.advance(5000)
    cache.get("a")          # expired
    cache.get_or_compute("c", lambda: "2")  # absent
    stats = cache.stats_snapshot()
    assert stats.hits + stats.misses_absent + stats.misses_expired == 4
    assert stats == cache.stats_snapshot()


def test_put_counts_insertions(cache):
    cache.put("a", "1")
    cache.put("a", "2")
    cache.put("b", "3")
    assert cache.stats_snapshot().insertions == 3


def test_reset_is_idempotent_on_fresh_cache(cache):
    cache.reset()
    stats = cache.stats_snapshot()
    assert stats.total_lookups == 0 and stats.insertions == 0
    assert len(cache) == 0


def test_reset_clears_entries_and_counters(cache):
    cache.put("k", "v")
    cache.get("k")
    cache.reset()
    assert cache.get("k").outcome is Outcome.MISS_ABSENT
    stats = cache.stats_snapshot()
    assert stats.hits == 0
    assert stats.misses_absent == 1  # only the post-reset lookup


def test_stats_after_reset_reflect_only_later_operations(cache, clock):
    cache.put("a", "1")
    cache.get("a")
    cache.get("missing")
    cache.reset()
    cache.put("b", "2")
    cache.get("b")
    stats = cache.stats_snapshot()
    assert (stats.hits, stats.misses_absent, stats.misses_expired, stats.insertions) == (1, 0, 0, 1)


def test_outcome_classification_helpers():
    assert Outcome.HIT.is_hit and not Outcome.HIT.is_miss
    assert Outcome.MISS_ABSENT.is_miss
    assert Outcome.MISS_EXPIRED.is_miss
    assert Outcome.MISS_EXPIRED.value == "miss_expired"


def test_concurrent_get_or_compute_keeps_accounting_consistent():
    # real clock, many threads; per-operation atomicity must keep the
    # counters conserved even when misses stampede
    cache = TtlCache(5)  # 5 ms ttl so entries keep expiring mid-run
    threads = 8
    per_thread = 100

    def worker():
        for i in range(per_thread):
            cache.get_or_compute(f"key{i % 3}", lambda: "payload")

    pool = [threading.Thread(target=worker) for _ in range(threads)]
    for t in pool:
        t.start()
    for t in pool:
        t.join()

    stats = cache.stats_snapshot()
    assert stats.total_lookups == threads * per_thread
    assert stats.insertions == stats.misses  # every miss stored exactly once

"""Query workloads and latency/hub-scan measurement."""
from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass, field
from typing import Literal

from .graph import INFINITY
from .index import DistanceIndex, query, query_counted


@dataclass(frozen=True)
class BenchConfig:
    mode: Literal["random", "buckets"] = "random"
    pair_count: int = 10_000
    bucket_count: int = 10
    per_bucket: int = 10_000
    lmin: int = 1000
    seed: int = 0
    # sampling attempts allowed per bucket, as a multiple of per_bucket
    attempt_factor: int = 200

    def __post_init__(self):
        if self.mode not in ("random", "buckets"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.pair_count < 0 or self.per_bucket < 0:
            raise ValueError("pair counts must be non-negative")
        if self.bucket_count < 1 or self.lmin < 1:
            raise ValueError("bucket_count and lmin must be positive")


@dataclass
class Workload:
    pairs: list[list[tuple[int, int]]]
    # bucket i covers (bounds[i], bounds[i + 1]]; empty for random mode
    bounds: list[float] = field(default_factory=list)
    lmax: int = 0
    underfilled: list[int] = field(default_factory=list)


def sweep_lmax(idx: DistanceIndex) -> int:
    """Largest finite distance seen from the far end of a double sweep."""
    n = idx.vertex_count
    if n == 0:
        return 0

    def farthest(src):
        best, best_d = src, 0
        for v in range(n):
            d = query(idx, src, v)
            if d != INFINITY and d > best_d:
                best, best_d = v, d
        return best, best_d

    va, _ = farthest(0)
    return farthest(va)[1]


def bucket_bounds(lmin: int, lmax: int, count: int) -> list[float]:
    x = (lmax / lmin) ** (1 / count)
    bounds = [lmin * x**i for i in range(count + 1)]
    bounds[-1] = float(lmax)
    return bounds


def _bucket_of(d: int, bounds: list[float]) -> int:
    if d == INFINITY or d <= bounds[0] or d > bounds[-1]:
        return -1
    for i in range(len(bounds) - 1):
        if d <= bounds[i + 1]:
            return i
    return -1


def generate_workload(idx: DistanceIndex, cfg: BenchConfig) -> Workload:
    """Query pairs for ``cfg``; a pure function of the index and the config."""
    rng = random.Random(cfg.seed)
    n = idx.vertex_count
    if n == 0:
        return Workload([[]])
    if cfg.mode == "random":
        return Workload([[(rng.randrange(n), rng.randrange(n)) for _ in range(cfg.pair_count)]])

    lmax = sweep_lmax(idx)
    k = cfg.bucket_count
    if lmax <= cfg.lmin:
        return Workload([[] for _ in range(k)], [], lmax, list(range(k)))
    bounds = bucket_bounds(cfg.lmin, lmax, k)
    buckets: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    cap = cfg.attempt_factor * cfg.per_bucket
    attempts = [0] * k
    open_ = [cfg.per_bucket > 0] * k
    while any(open_):
        s, t = rng.randrange(n), rng.randrange(n)
        b = _bucket_of(query(idx, s, t), bounds)
        if b >= 0 and open_[b]:
            buckets[b].append((s, t))
            if len(buckets[b]) == cfg.per_bucket:
                open_[b] = False
        for i in range(k):
            if open_[i]:
                attempts[i] += 1
                if attempts[i] >= cap:
                    open_[i] = False
    under = [i for i in range(k) if len(buckets[i]) < cfg.per_bucket]
    return Workload(buckets, bounds, lmax, under)


@dataclass
class BenchRow:
    pairs: int
    unreachable: int
    mean_us: float
    median_us: float
    ahs: float


def run_pairs(idx: DistanceIndex, pairs: list[tuple[int, int]]) -> BenchRow:
    times = []
    scanned = 0
    unreachable = 0
    clock = time.perf_counter_ns
    for s, t in pairs:
        t0 = clock()
        d, k = query_counted(idx, s, t)
        times.append(clock() - t0)
        scanned += k
        unreachable += d == INFINITY
    if not pairs:
        return BenchRow(0, 0, 0.0, 0.0, 0.0)
    return BenchRow(
        len(pairs),
        unreachable,
        statistics.fmean(times) / 1000,
        statistics.median(times) / 1000,
        scanned / len(pairs),
    )

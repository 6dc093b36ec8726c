"""Latency microbenchmarks for push, pop and steal across implementations.

Each iteration times exactly one operation with a monotonic
high-resolution clock; queue refill and input-batch construction happen
outside the timed region, and the queue state is reset every iteration.
Results are emitted as BenchRecord rows and optionally CSV.
"""

from __future__ import annotations

import csv
import gc
import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

from .adapters import LFQueueAdapter, make_adapter

CSV_HEADER = ["impl", "operation", "parameter", "iterations",
              "mean_ns", "median_ns", "p99_ns", "stddev_ns"]

DEFAULT_BATCH_SIZES = [1, 128, 512, 1024]
DEFAULT_PROPORTIONS = [10, 20, 30, 40, 50, 60]   # percent
DEFAULT_INITIAL_SIZE = 10_000


class BenchConfigError(ValueError):
    """Raised for invalid benchmark configuration."""


@dataclass
class BenchConfig:
    impl: str = "lf"
    operation: str = "push"            # push | pop | steal
    parameters: List[int] = field(default_factory=list)
    initial_size: int = DEFAULT_INITIAL_SIZE
    warmup: int = 1_000
    iterations: int = 10_000
    optimized: bool = False
    seed: int = 0

    def validate(self) -> None:
        if self.iterations < 1:
            raise BenchConfigError("iterations must be >= 1")
        if self.warmup < 0:
            raise BenchConfigError("warmup must be >= 0")
        if self.operation not in ("push", "pop", "steal"):
            raise BenchConfigError(f"unknown operation {self.operation!r}")
        if any(p <= 0 for p in self.parameters):
            raise BenchConfigError("parameters must be positive")
        if self.operation == "steal":
            if any(p >= 100 for p in self.parameters):
                raise BenchConfigError(
                    "steal proportions are percentages below 100")
            biggest = max(self.parameters, default=0)
            if self.initial_size < 2 or \
                    int(self.initial_size * biggest / 100) < 1:
                raise BenchConfigError(
                    "initial size too small for the requested proportions")
        if self.operation == "pop" and self.initial_size < 1:
            raise BenchConfigError("pop benchmark requires a pre-filled queue")


@dataclass
class BenchRecord:
    impl: str
    operation: str
    parameter: int
    iterations: int
    mean_ns: float
    median_ns: float
    p99_ns: float
    stddev_ns: float

    def check_invariants(self) -> None:
        assert self.median_ns <= self.p99_ns
        assert self.mean_ns > 0 and self.median_ns > 0 and self.p99_ns > 0


def _summarize(impl: str, operation: str, parameter: int,
               samples: List[int]) -> BenchRecord:
    samples.sort()
    p99_index = min(len(samples) - 1, int(0.99 * len(samples)))
    record = BenchRecord(
        impl=impl,
        operation=operation,
        parameter=parameter,
        iterations=len(samples),
        mean_ns=statistics.fmean(samples),
        median_ns=statistics.median(samples),
        p99_ns=float(samples[p99_index]),
        stddev_ns=statistics.pstdev(samples) if len(samples) > 1 else 0.0,
    )
    record.check_invariants()
    return record


def _time_op(setup: Callable[[], Callable[[], None]],
             warmup: int, iterations: int) -> List[int]:
    clock = time.perf_counter_ns
    for _ in range(warmup):
        op = setup()
        op()
    samples = []
    # suspend the cycle collector while sampling, as timeit does, so that
    # collection pauses triggered by setup allocations do not land inside
    # the timed region
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(iterations):
            op = setup()
            t0 = clock()
            result = op()
            t1 = clock()
            samples.append(max(1, t1 - t0))
            # drop the result only after the clock stops: freeing a stolen
            # suffix cascades through its nodes and must not be timed
            result = None
    finally:
        if gc_was_enabled:
            gc.enable()
    return samples


def bench_push(cfg: BenchConfig) -> List[BenchRecord]:
    """Per batch size: fresh queue and pre-built batch, time push alone."""
    cfg.validate()
    parameters = cfg.parameters or list(DEFAULT_BATCH_SIZES)
    records = []
    for batch_size in parameters:
        payloads = list(range(batch_size))

        def setup():
            adapter = make_adapter(cfg.impl)
            prepared = adapter.prepare_push(payloads)
            return lambda: adapter.push_prepared(prepared)

        samples = _time_op(setup, cfg.warmup, cfg.iterations)
        records.append(_summarize(cfg.impl, "push", batch_size, samples))
    return records


def bench_pop(cfg: BenchConfig) -> List[BenchRecord]:
    """Pre-fill the queue each iteration, time a single pop."""
    cfg.validate()
    fill = list(range(max(1, cfg.initial_size)))

    def setup():
        adapter = make_adapter(cfg.impl)
        adapter.push_batch(fill)
        return adapter.pop

    samples = _time_op(setup, cfg.warmup, cfg.iterations)
    return [_summarize(cfg.impl, "pop", 1, samples)]


def bench_steal(cfg: BenchConfig) -> List[BenchRecord]:
    """Per proportion: reset and fill the queue, time one steal against a
    quiescent owner. Proportions above 50% are safe here because the owner
    is idle."""
    cfg.validate()
    parameters = cfg.parameters or list(DEFAULT_PROPORTIONS)
    operation = "steal_opt" if cfg.optimized else "steal"
    fill = list(range(cfg.initial_size))
    records = []
    for percent in parameters:
        proportion = percent / 100.0

        def setup():
            if cfg.impl == "lf" and cfg.optimized:
                adapter = LFQueueAdapter(optimized_steal=True)
            else:
                adapter = make_adapter(cfg.impl)
            adapter.push_batch(fill)
            return lambda: adapter.steal_raw(proportion, allow_over_half=True)

        samples = _time_op(setup, cfg.warmup, cfg.iterations)
        records.append(_summarize(cfg.impl, operation, percent, samples))
    return records


def run_bench(cfg: BenchConfig) -> List[BenchRecord]:
    dispatch = {"push": bench_push, "pop": bench_pop, "steal": bench_steal}
    return dispatch[cfg.operation](cfg)


def write_csv(records: Sequence[BenchRecord], path: str) -> None:
    """Write records with the fixed header, nanoseconds rounded to ints."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for r in records:
                writer.writerow([
                    r.impl, r.operation, r.parameter, r.iterations,
                    round(r.mean_ns), round(r.median_ns),
                    round(r.p99_ns), round(r.stddev_ns),
                ])
    except OSError as exc:
        raise OSError(f"cannot write benchmark CSV to {path!r}: {exc}") from exc


def read_csv(path: str) -> List[BenchRecord]:
    """Parse a CSV produced by write_csv back into records."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            records.append(BenchRecord(
                impl=row["impl"],
                operation=row["operation"],
                parameter=int(row["parameter"]),
                iterations=int(row["iterations"]),
                mean_ns=float(row["mean_ns"]),
                median_ns=float(row["median_ns"]),
                p99_ns=float(row["p99_ns"]),
                stddev_ns=float(row["stddev_ns"]),
            ))
    return records

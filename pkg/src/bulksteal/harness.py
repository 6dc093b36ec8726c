"""Correctness machinery: conservation stress runs, targeted races on the
steal window, and a sequential-oracle linearizability checker for small
recorded histories."""

from __future__ import annotations

import itertools
import random
import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

from .adapters import LFQueueAdapter, QueueAdapter
from .oracle import SequentialDeque, STOLEN, EMPTY, CONTENTION
from .queue import BulkStealQueue, StealOutcome, make_batch


# ---------------------------------------------------------------------------
# histories

_stamp_counter = itertools.count(1)


def _next_stamp() -> int:
    return next(_stamp_counter)


@dataclass
class OpEvent:
    """One invocation/response record of a queue operation."""

    thread_id: int
    kind: str                 # push | pop | steal | steal_opt
    arg: Any                  # batch payload list, or proportion
    result: Any               # payload / None / (tag, payloads)
    invoke_stamp: int
    response_stamp: int


class HistoryRecorder:
    """Wraps an adapter and records an OpEvent per call.

    Each thread appends to its own buffer; buffers are merged after the
    run so recording does not perturb cross-thread timing.
    """

    def __init__(self, adapter: QueueAdapter):
        self.adapter = adapter
        self._buffers: dict = {}

    def _buffer(self) -> List[OpEvent]:
        tid = threading.get_ident()
        buf = self._buffers.get(tid)
        if buf is None:
            buf = self._buffers[tid] = []
        return buf

    def push_batch(self, payloads: Sequence[Any], thread_id: int = 0) -> None:
        invoke = _next_stamp()
        self.adapter.push_batch(payloads)
        self._buffer().append(OpEvent(
            thread_id, "push", list(payloads), None, invoke, _next_stamp()))

    def pop(self, thread_id: int = 0) -> Optional[Any]:
        invoke = _next_stamp()
        result = self.adapter.pop()
        self._buffer().append(OpEvent(
            thread_id, "pop", None, result, invoke, _next_stamp()))
        return result

    def steal(self, proportion: float, thread_id: int = 1,
              kind: str = "steal") -> Tuple[str, List[Any]]:
        invoke = _next_stamp()
        result = self.adapter.steal(proportion)
        self._buffer().append(OpEvent(
            thread_id, kind, proportion, result, invoke, _next_stamp()))
        return result

    def history(self) -> List[OpEvent]:
        events = [e for buf in self._buffers.values() for e in buf]
        events.sort(key=lambda e: e.invoke_stamp)
        return events


# ---------------------------------------------------------------------------
# linearizability

LINEARIZABLE = "linearizable"
NOT_LINEARIZABLE = "not-linearizable"
BOUND_EXCEEDED = "bound-exceeded"


@dataclass
class LinResult:
    status: str
    witness: Optional[List[OpEvent]] = None

    def __bool__(self) -> bool:
        return self.status == LINEARIZABLE


def _replay(state: SequentialDeque, event: OpEvent
            ) -> Optional[SequentialDeque]:
    """Apply an event to a copy of the state; None if the recorded result
    is impossible sequentially."""
    new = state.copy()
    if event.kind == "push":
        new.push_batch(event.arg)
        return new
    if event.kind == "pop":
        if new.pop() != event.result:
            return None
        return new
    if event.kind in ("steal", "steal_opt"):
        tag, payloads = event.result
        if tag == CONTENTION:
            # an aborted steal mutates nothing and is legal in any state
            return new
        got_tag, got = new.steal(event.arg)
        if got_tag != tag or got != payloads:
            return None
        return new
    raise ValueError(f"unknown event kind: {event.kind}")


def check_linearizable(history: Sequence[OpEvent], bound: int = 8) -> LinResult:
    """Exhaustive witness search against the sequential deque oracle.

    True iff some total order consistent with real-time order (response
    before invoke implies ordered) replays correctly. Histories longer
    than the bound get an explicit bound-exceeded result.
    """
    events = sorted(history, key=lambda e: e.invoke_stamp)
    if len(events) > bound:
        return LinResult(BOUND_EXCEEDED)
    if not events:
        return LinResult(LINEARIZABLE, [])

    witness: List[OpEvent] = []

    def search(remaining: List[OpEvent], state: SequentialDeque) -> bool:
        if not remaining:
            return True
        min_response = min(e.response_stamp for e in remaining)
        for i, event in enumerate(remaining):
            # real-time order: anything invoked after some pending response
            # cannot go first
            if event.invoke_stamp > min_response:
                continue
            new_state = _replay(state, event)
            if new_state is None:
                continue
            witness.append(event)
            if search(remaining[:i] + remaining[i + 1:], new_state):
                return True
            witness.pop()
        return False

    if search(events, SequentialDeque()):
        return LinResult(LINEARIZABLE, list(witness))
    return LinResult(NOT_LINEARIZABLE)


# ---------------------------------------------------------------------------
# conservation stress

@dataclass
class StressConfig:
    """Knobs for a randomized one-owner/one-stealer stress run."""

    ops: int = 10_000                # owner operation budget
    push_prob: float = 0.55
    batch_max: int = 16
    steal_prop: float = 0.5
    seed: int = 0
    steal_every: int = 20            # stealer attempts per owner-ops estimate

    def validate(self) -> None:
        if not 0.0 <= self.push_prob <= 1.0:
            raise ValueError("push_prob must be in [0, 1]")
        if not 0.0 < self.steal_prop <= 0.5:
            raise ValueError("steal_prop must be in (0, 0.5]")
        if self.ops < 0:
            raise ValueError("ops must be non-negative")
        if self.batch_max < 1:
            raise ValueError("batch_max must be >= 1")


@dataclass
class ConservationReport:
    impl: str
    ops: int
    seed: int
    pushed: int = 0
    popped: int = 0
    stolen: int = 0
    residual: int = 0
    steals_attempted: int = 0
    steals_succeeded: int = 0
    contentions: int = 0
    duplicated: List[Any] = field(default_factory=list)
    missing: List[Any] = field(default_factory=list)
    harness_error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return not self.duplicated and not self.missing \
            and self.harness_error is None

    def to_dict(self) -> dict:
        return {
            "impl": self.impl, "ops": self.ops, "seed": self.seed,
            "pushed": self.pushed, "popped": self.popped,
            "stolen": self.stolen, "residual": self.residual,
            "steals_attempted": self.steals_attempted,
            "steals_succeeded": self.steals_succeeded,
            "contentions": self.contentions,
            "duplicated": self.duplicated[:20],
            "missing": self.missing[:20],
            "harness_error": self.harness_error,
            "ok": self.ok,
        }


def _diff_multisets(pushed: Counter, recovered: Counter
                    ) -> Tuple[List[Any], List[Any]]:
    duplicated = list(( recovered - pushed).elements())
    missing = list((pushed - recovered).elements())
    return duplicated, missing


def run_conservation(adapter: QueueAdapter, cfg: StressConfig
                     ) -> ConservationReport:
    """One owner thread and one stealer thread hammer the adapter; at the
    end the queue is drained and pushed == popped + stolen + residual is
    verified as multisets."""
    cfg.validate()
    report = ConservationReport(impl=adapter.name, ops=cfg.ops, seed=cfg.seed)
    rng = random.Random(cfg.seed)
    pushed: Counter = Counter()
    popped: List[Any] = []
    stolen: List[Any] = []
    owner_done = threading.Event()
    errors: List[str] = []

    def owner():
        try:
            next_payload = 0
            for _ in range(cfg.ops):
                if rng.random() < cfg.push_prob:
                    n = rng.randint(1, cfg.batch_max)
                    batch = list(range(next_payload, next_payload + n))
                    next_payload += n
                    pushed.update(batch)
                    adapter.push_batch(batch)
                else:
                    item = adapter.pop()
                    if item is not None:
                        popped.append(item)
        except Exception as exc:   # harness failure, not a property violation
            errors.append(f"owner: {exc!r}")
        finally:
            owner_done.set()

    def stealer():
        srng = random.Random(cfg.seed ^ 0x5EED)
        try:
            while not owner_done.is_set():
                report.steals_attempted += 1
                tag, items = adapter.steal(cfg.steal_prop)
                if tag == STOLEN:
                    report.steals_succeeded += 1
                    stolen.extend(items)
                elif tag == CONTENTION:
                    report.contentions += 1
                # brief back-off so the owner makes progress between steals
                for _ in range(srng.randint(0, cfg.steal_every)):
                    pass
        except Exception as exc:
            errors.append(f"stealer: {exc!r}")

    owner_thread = threading.Thread(target=owner, name="owner")
    stealer_thread = threading.Thread(target=stealer, name="stealer")
    owner_thread.start()
    stealer_thread.start()
    owner_thread.join()
    stealer_thread.join()

    residual: List[Any] = []
    item = adapter.pop()
    while item is not None:
        residual.append(item)
        item = adapter.pop()

    report.pushed = sum(pushed.values())
    report.popped = len(popped)
    report.stolen = len(stolen)
    report.residual = len(residual)
    recovered = Counter(popped) + Counter(stolen) + Counter(residual)
    report.duplicated, report.missing = _diff_multisets(pushed, recovered)
    if errors:
        report.harness_error = "; ".join(errors)
    return report


# ---------------------------------------------------------------------------
# steal-window race

@dataclass
class RaceReport:
    iterations: int
    steals_succeeded: int = 0
    contentions: int = 0
    empties: int = 0
    conservation_violations: int = 0
    abort_purity_violations: int = 0
    harness_error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.conservation_violations == 0 \
            and self.abort_purity_violations == 0 \
            and self.harness_error is None

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "steals_succeeded": self.steals_succeeded,
            "contentions": self.contentions,
            "empties": self.empties,
            "conservation_violations": self.conservation_violations,
            "abort_purity_violations": self.abort_purity_violations,
            "harness_error": self.harness_error,
            "ok": self.ok,
        }


def run_steal_window_race(iterations: int = 100_000, seed: int = 0,
                          max_size: int = 24) -> RaceReport:
    """Adversarial schedule specific to the lock-free queue's
    check-then-sever sequence: the owner's pop burst is injected exactly
    between the consistency check and the sever via a yield hook, which
    under the interpreter's serial execution reproduces the worst-case
    interleaving deterministically."""
    rng = random.Random(seed)
    report = RaceReport(iterations=iterations)

    for _ in range(iterations):
        q = BulkStealQueue()
        size = rng.randint(2, max_size)
        payloads = list(range(size))
        q.push_batch(make_batch(payloads))
        before_chain = q.chain_payloads()

        burst = rng.randint(0, size + 2)
        popped: List[Any] = []

        def pop_burst(queue, n=burst, sink=popped):
            for _ in range(n):
                item = queue.pop()
                if item is not None:
                    sink.append(item)

        q._hooks = {"before_sever": pop_burst}
        proportion = rng.choice([0.25, 0.5])
        if rng.random() < 0.5:
            outcome = q.steal(proportion)
        else:
            outcome = q.steal_optimized(proportion)
        q._hooks = None

        stolen = outcome.batch.payloads() if outcome.is_stolen else []
        if outcome.is_contention:
            report.contentions += 1
            # abort purity: chain must equal the pre-steal chain minus the
            # burst pops (the burst itself is legitimate owner activity)
            expected = [p for p in before_chain if p not in popped]
            if q.chain_payloads() != expected or q.size() != len(expected):
                report.abort_purity_violations += 1
        elif outcome.is_empty:
            report.empties += 1
        else:
            report.steals_succeeded += 1

        residual = q.chain_payloads()
        recovered = Counter(popped) + Counter(stolen) + Counter(residual)
        if recovered != Counter(payloads):
            report.conservation_violations += 1
        if q.size() != len(residual):
            report.conservation_violations += 1
    return report

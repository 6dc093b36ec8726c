"""Uniform payload-level adapters over the three queue implementations.

The harness, benchmarks and DAG workload talk to queues through this
interface: push a list of payloads, pop one payload, steal a proportion
and get back (outcome tag, payload list in chain order).
"""

from __future__ import annotations

from typing import Any, List, Optional, Protocol, Sequence, Tuple

from .baselines import ChaseLevDeque, LockedDeque
from .queue import BulkStealQueue, StealOutcome, make_batch


class QueueAdapter(Protocol):
    name: str

    def push_batch(self, payloads: Sequence[Any]) -> None: ...
    def pop(self) -> Optional[Any]: ...
    def steal(self, proportion: float, *,
              allow_over_half: bool = False) -> Tuple[str, List[Any]]: ...
    def size(self) -> int: ...
    # benchmark hooks: input preparation outside the timed region, raw
    # operations (no payload materialization) inside it
    def prepare_push(self, payloads: Sequence[Any]) -> Any: ...
    def push_prepared(self, prepared: Any) -> None: ...
    def steal_raw(self, proportion: float, *,
                  allow_over_half: bool = False) -> Any: ...


class LFQueueAdapter:
    """Adapter over the lock-free bulk-steal queue."""

    name = "lf"

    def __init__(self, optimized_steal: bool = False):
        self.queue = BulkStealQueue()
        self._optimized = optimized_steal

    def push_batch(self, payloads: Sequence[Any]) -> None:
        self.queue.push_batch(make_batch(payloads))

    def pop(self) -> Optional[Any]:
        return self.queue.pop()

    def steal(self, proportion: float, *,
              allow_over_half: bool = False) -> Tuple[str, List[Any]]:
        if self._optimized:
            outcome = self.queue.steal_optimized(
                proportion, _allow_over_half=allow_over_half)
        else:
            outcome = self.queue.steal(
                proportion, _allow_over_half=allow_over_half)
        if outcome.is_stolen:
            return StealOutcome.STOLEN, outcome.batch.payloads()
        return outcome.kind, []

    def size(self) -> int:
        return self.queue.size()

    def residual(self) -> List[Any]:
        return self.queue.chain_payloads()

    def prepare_push(self, payloads: Sequence[Any]):
        return make_batch(payloads)

    def push_prepared(self, prepared) -> None:
        self.queue.push_batch(prepared)

    def steal_raw(self, proportion: float, *, allow_over_half: bool = False):
        if self._optimized:
            return self.queue.steal_optimized(
                proportion, _allow_over_half=allow_over_half)
        return self.queue.steal(proportion, _allow_over_half=allow_over_half)


class LockedDequeAdapter:
    """Adapter over the mutex-guarded deque baseline."""

    name = "locked"

    def __init__(self):
        self.queue = LockedDeque()

    def push_batch(self, payloads: Sequence[Any]) -> None:
        self.queue.push_batch(list(payloads))

    def pop(self) -> Optional[Any]:
        return self.queue.pop()

    def steal(self, proportion: float, *,
              allow_over_half: bool = False) -> Tuple[str, List[Any]]:
        outcome = self.queue.steal(proportion, _allow_over_half=allow_over_half)
        if outcome.is_stolen:
            return StealOutcome.STOLEN, outcome.batch.payloads()
        return outcome.kind, []

    def size(self) -> int:
        return self.queue.size()

    def residual(self) -> List[Any]:
        return list(self.queue._items)

    def prepare_push(self, payloads: Sequence[Any]):
        return list(payloads)

    def push_prepared(self, prepared) -> None:
        self.queue.push_batch(prepared)

    def steal_raw(self, proportion: float, *, allow_over_half: bool = False):
        return self.queue.steal(proportion, _allow_over_half=allow_over_half)


class ChaseLevAdapter:
    """Adapter over the Chase-Lev-style deque with emulated bulk operations."""

    name = "chaselev"

    def __init__(self):
        self.queue = ChaseLevDeque()

    def push_batch(self, payloads: Sequence[Any]) -> None:
        self.queue.push_batch(list(payloads))

    def pop(self) -> Optional[Any]:
        return self.queue.pop()

    def steal(self, proportion: float, *,
              allow_over_half: bool = False) -> Tuple[str, List[Any]]:
        outcome = self.queue.steal(proportion, _allow_over_half=allow_over_half)
        if outcome.is_stolen:
            return StealOutcome.STOLEN, outcome.batch.payloads()
        return outcome.kind, []

    def size(self) -> int:
        return self.queue.size()

    def residual(self) -> List[Any]:
        q = self.queue
        out = []
        for i in range(q._top, q._bottom):
            out.append(q._buffer[i % len(q._buffer)])
        return out

    def prepare_push(self, payloads: Sequence[Any]):
        return list(payloads)

    def push_prepared(self, prepared) -> None:
        self.queue.push_batch(prepared)

    def steal_raw(self, proportion: float, *, allow_over_half: bool = False):
        return self.queue.steal(proportion, _allow_over_half=allow_over_half)


ADAPTERS = {
    "lf": LFQueueAdapter,
    "locked": LockedDequeAdapter,
    "chaselev": ChaseLevAdapter,
}


def make_adapter(impl: str) -> QueueAdapter:
    try:
        return ADAPTERS[impl]()
    except KeyError:
        raise ValueError(
            f"unknown implementation {impl!r}; choose from {sorted(ADAPTERS)}")

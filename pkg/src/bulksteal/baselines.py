"""Comparator queues behind the same bulk API as the lock-free queue.

Two baselines: a lock-guarded deque (naive), and a Chase-Lev-style dynamic
circular deque whose bulk operations are emulated by looping the
single-task operations. Both satisfy the same conservation contract under
one-owner/one-stealer use.
"""

from __future__ import annotations

from collections import deque
from threading import Lock
from typing import Any, List, Optional

from .queue import MIN_STEAL_SIZE, MAX_STEAL_PROPORTION, StealOutcome, \
    EMPTY_OUTCOME, Batch, make_batch


class _ListBatch:
    """Batch stand-in for baselines: payloads held as a plain list."""

    __slots__ = ("items",)

    def __init__(self, items: List[Any]):
        self.items = items

    @property
    def count(self) -> int:
        return len(self.items)

    def payloads(self) -> List[Any]:
        return list(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


def _check_proportion(proportion: float, allow_over_half: bool) -> None:
    cap = 1.0 if allow_over_half else MAX_STEAL_PROPORTION
    if not 0.0 < proportion <= cap:
        raise ValueError(
            f"steal proportion must be in (0, {cap}], got {proportion}")


class LockedDeque:
    """Doubly ended list guarded by a single mutex.

    steal(p) removes floor(size * p) tail elements one by one inside one
    critical section; it never returns Contention since the lock
    serializes everything.
    """

    def __init__(self):
        self._items: deque = deque()
        self._lock = Lock()

    def push_batch(self, items) -> None:
        payloads = items.payloads() if hasattr(items, "payloads") else list(items)
        if not payloads:
            return
        with self._lock:
            # batch head ends up at the queue front
            self._items.extendleft(reversed(payloads))

    def pop(self) -> Optional[Any]:
        with self._lock:
            if not self._items:
                return None
            return self._items.popleft()

    def steal(self, proportion: float, *,
              _allow_over_half: bool = False) -> StealOutcome:
        _check_proportion(proportion, _allow_over_half)
        with self._lock:
            size = len(self._items)
            if size < MIN_STEAL_SIZE:
                return EMPTY_OUTCOME
            take = int(size * proportion)
            if take < 1:
                return EMPTY_OUTCOME
            # keep chain order: suffix head first, oldest element last
            stolen = [None] * take
            for i in range(take - 1, -1, -1):
                stolen[i] = self._items.pop()
            return StealOutcome(StealOutcome.STOLEN, _ListBatch(stolen))

    def size(self) -> int:
        return len(self._items)


class ChaseLevDeque:
    """Dynamic circular work-stealing deque (Chase-Lev lineage).

    Owner pushes and pops at the bottom (LIFO); the stealer takes single
    tasks from the top (oldest first). The buffer doubles when full and
    never shrinks. Bulk push and bulk steal loop the single-task
    operations, which is exactly the per-node overhead this baseline is
    meant to exhibit.

    The compare-and-swap on ``top`` is realized with a small lock, the
    standard Python rendering of a CAS.
    """

    INITIAL_CAPACITY = 64

    def __init__(self):
        self._buffer: List[Any] = [None] * self.INITIAL_CAPACITY
        self._top = 0       # stealer end; advanced by CAS
        self._bottom = 0    # owner end
        self._cas_lock = Lock()

    def _cas_top(self, expected: int) -> bool:
        with self._cas_lock:
            if self._top == expected:
                self._top = expected + 1
                return True
            return False

    def _grow(self, bottom: int, top: int) -> None:
        old = self._buffer
        old_cap = len(old)
        new = [None] * (old_cap * 2)
        for i in range(top, bottom):
            new[i % len(new)] = old[i % old_cap]
        self._buffer = new

    # -- single-task operations ----------------------------------------------

    def push(self, item: Any) -> None:
        bottom = self._bottom
        top = self._top
        if bottom - top >= len(self._buffer):
            self._grow(bottom, top)
        self._buffer[bottom % len(self._buffer)] = item
        self._bottom = bottom + 1

    def pop(self) -> Optional[Any]:
        bottom = self._bottom - 1
        if bottom < self._top:
            return None
        self._bottom = bottom
        buf = self._buffer
        item = buf[bottom % len(buf)]
        top = self._top
        if bottom > top:
            return item
        # last element: race with the stealer via CAS on top
        self._bottom = top + 1
        if bottom == top and self._cas_top(top):
            return item
        return None

    def steal_one(self) -> Optional[Any]:
        top = self._top
        bottom = self._bottom
        if top >= bottom:
            return None
        buf = self._buffer
        item = buf[top % len(buf)]
        if self._cas_top(top):
            return item
        return None    # lost the race; caller may retry

    # -- emulated bulk operations ---------------------------------------------

    def push_batch(self, items) -> None:
        payloads = items.payloads() if hasattr(items, "payloads") else list(items)
        # repeated single pushes: batch head is pushed last so it pops first
        for item in reversed(payloads):
            self.push(item)

    def steal(self, proportion: float, *,
              _allow_over_half: bool = False) -> StealOutcome:
        _check_proportion(proportion, _allow_over_half)
        size = self.size()
        if size < MIN_STEAL_SIZE:
            return EMPTY_OUTCOME
        take = int(size * proportion)
        if take < 1:
            return EMPTY_OUTCOME
        stolen: List[Any] = []
        for _ in range(take):
            item = self.steal_one()
            if item is None:
                break
            stolen.append(item)
        if not stolen:
            return EMPTY_OUTCOME
        # steal_one yields oldest first; reverse so the oldest element is
        # last, matching the linked-chain suffix order
        stolen.reverse()
        return StealOutcome(StealOutcome.STOLEN, _ListBatch(stolen))

    def size(self) -> int:
        return self._bottom - self._top

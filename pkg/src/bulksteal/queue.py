"""Lock-free work-stealing queue with bulk push and proportional bulk steal.

The queue is an unbounded singly linked list. A single owner thread pushes
batches at the head and pops single items from the head; a single stealer
(one at a time, externally serialized) detaches a proportional suffix from
the tail in one operation.

Thread-safety relies on CPython's sequentially consistent attribute
reads/writes plus a strict single-writer discipline:

- ``_head`` is written only by the owner; the stealer only snapshots it.
- The stealer writes only the ``next`` link of the cut node (the sever).
- Size is split into owner-written and stealer-written monotone counters
  so no counter ever has two writers.
- ``_pop_epoch`` is a seqlock-style counter (two bumps per pop) that lets
  the stealer detect in-flight and completed pops.

The sever itself is guarded by a small arbitration window (``_sever_lock``
plus the ``_steal_critical`` flag) that the owner's pop enters only in the
rare case a steal is about to sever; the fast paths of push and pop take
no lock.
"""

from __future__ import annotations

import sys
from typing import Any, Callable, Iterator, List, Optional, Sequence
from threading import Lock

# Minimum queue size for a steal to be attempted; a 1-element queue stays
# with its owner.
MIN_STEAL_SIZE = 2

# Proportion cap for concurrent use: keeps the cut point in the front half
# so the half-remaining consistency check bounds owner pops away from it.
MAX_STEAL_PROPORTION = 0.5

# Each node must span at least one full cache line; pad slots below are
# sized so a TaskNode instance occupies two 64-byte lines.
NODE_MIN_BYTES = 64


class TaskNode:
    """A queue cell: an opaque payload plus a successor link.

    Padded with unused slots so adjacent nodes never share a cache line
    (two full 64-byte lines per node).
    """

    __slots__ = (
        "payload", "next",
        "_pad0", "_pad1", "_pad2", "_pad3", "_pad4",
        "_pad5", "_pad6", "_pad7", "_pad8", "_pad9",
    )

    def __init__(self, payload: Any, next: Optional["TaskNode"] = None):
        self.payload = payload
        self.next = next


# Startup size assertion for the padding invariant.
assert sys.getsizeof(TaskNode(None)) >= NODE_MIN_BYTES, (
    "TaskNode must span at least one full cache line"
)


class Batch:
    """A detached singly linked segment with known head, tail and count.

    An optimized steal may return a batch whose tail is not yet known
    ("count known, tail deferred"); the tail is resolved by walking the
    links on first access and then cached.
    """

    __slots__ = ("head", "count", "_tail")

    def __init__(self, head: Optional[TaskNode], tail: Optional[TaskNode],
                 count: int):
        self.head = head
        self._tail = tail
        self.count = count

    @property
    def tail(self) -> Optional[TaskNode]:
        if self._tail is None and self.head is not None:
            node = self.head
            while node.next is not None:
                node = node.next
            self._tail = node
        return self._tail

    def __len__(self) -> int:
        return self.count

    def payloads(self) -> List[Any]:
        """Payloads in head-to-tail order (walks the links)."""
        out = []
        node = self.head
        while node is not None:
            out.append(node.payload)
            node = node.next
        return out

    def __iter__(self) -> Iterator[Any]:
        return iter(self.payloads())


def make_batch(items: Sequence[Any]) -> Batch:
    """Build a batch from an ordered sequence; list order equals input order."""
    head = None
    tail = None
    count = 0
    prev = None
    for item in items:
        node = TaskNode(item)
        if prev is None:
            head = node
        else:
            prev.next = node
        prev = node
        count += 1
    tail = prev
    return Batch(head, tail, count)


class StealOutcome:
    """Result of a steal attempt: Stolen(batch), Empty, or Contention."""

    __slots__ = ("kind", "batch")

    STOLEN = "stolen"
    EMPTY = "empty"
    CONTENTION = "contention"

    def __init__(self, kind: str, batch: Optional[Batch] = None):
        self.kind = kind
        self.batch = batch

    @property
    def is_stolen(self) -> bool:
        return self.kind == StealOutcome.STOLEN

    @property
    def is_empty(self) -> bool:
        return self.kind == StealOutcome.EMPTY

    @property
    def is_contention(self) -> bool:
        return self.kind == StealOutcome.CONTENTION

    def __repr__(self) -> str:
        if self.is_stolen:
            return f"StealOutcome(stolen, count={self.batch.count})"
        return f"StealOutcome({self.kind})"


EMPTY_OUTCOME = StealOutcome(StealOutcome.EMPTY)
CONTENTION_OUTCOME = StealOutcome(StealOutcome.CONTENTION)


class BulkStealQueue:
    """Unbounded single-owner / single-stealer queue with bulk transfer.

    Owner API: :meth:`push_batch`, :meth:`pop`.
    Stealer API: :meth:`steal`, :meth:`steal_optimized` (one steal in
    flight per queue at a time, serialized externally).
    :meth:`size` may be called from any thread.
    """

    def __init__(self):
        self._head: Optional[TaskNode] = None
        # size counters, single writer each: size = pushed - popped - stolen
        self._pushed = 0      # owner
        self._popped = 0      # owner
        self._stolen = 0      # stealer
        # bumped once per completed owner push/pop
        self._op_version = 0
        # seqlock-style pop counter: odd while a pop is in flight
        self._pop_epoch = 0
        # sever arbitration (rare path only)
        self._steal_critical = False
        self._sever_lock = Lock()
        # test-only yield points; no hooks installed means zero branches taken
        self._hooks: Optional[dict] = None

    # -- owner operations ---------------------------------------------------

    def push_batch(self, batch: Batch) -> None:
        """Prepend a batch at the head in one head store (owner only).

        An empty batch is a no-op. The batch's nodes must be exclusively
        held by the caller; ownership transfers to the queue.
        """
        if batch.count == 0:
            return
        batch.tail.next = self._head     # relaxed read: owner is sole writer
        self._head = batch.head          # release store: publishes the links
        self._pushed += batch.count      # single size update
        self._op_version += 1

    def pop(self) -> Optional[Any]:
        """Remove and return the head payload, or None when empty (owner only)."""
        head = self._head
        if head is None:
            return None
        self._pop_epoch += 1             # pop in flight
        if self._steal_critical:
            # a steal is severing right now: arbitrate through its lock and
            # re-read state afterwards
            with self._sever_lock:
                head = self._head
                if head is None:
                    self._pop_epoch += 1
                    return None
                self._head = head.next
        else:
            self._head = head.next
        self._pop_epoch += 1             # pop complete
        self._popped += 1
        self._op_version += 1
        return head.payload

    # -- any thread ---------------------------------------------------------

    def size(self) -> int:
        """Relaxed size snapshot: exact at quiescence, approximate otherwise."""
        return self._pushed - self._popped - self._stolen

    @property
    def op_version(self) -> int:
        return self._op_version

    # -- stealer operations -------------------------------------------------

    def steal(self, proportion: float, *,
              _allow_over_half: bool = False) -> StealOutcome:
        """Detach floor(size * proportion) tail nodes as a batch.

        Returns Empty when the queue is below MIN_STEAL_SIZE (or the
        rounded count is zero) and Contention when the queue changed too
        much during the attempt; both aborts leave the queue unmodified.
        """
        return self._steal_impl(proportion, _allow_over_half, optimized=False)

    def steal_optimized(self, proportion: float, *,
                        _allow_over_half: bool = False) -> StealOutcome:
        """Like :meth:`steal`, but skips the suffix recount when the owner
        performed no push or pop during the attempt; the batch's tail is
        then resolved lazily by its consumer."""
        return self._steal_impl(proportion, _allow_over_half, optimized=True)

    def _steal_impl(self, proportion: float, allow_over_half: bool,
                    optimized: bool) -> StealOutcome:
        cap = 1.0 if allow_over_half else MAX_STEAL_PROPORTION
        if not 0.0 < proportion <= cap:
            raise ValueError(
                f"steal proportion must be in (0, {cap}], got {proportion}")
        hooks = self._hooks

        version_before = self._op_version
        epoch_before = self._pop_epoch
        observed = self.size()                     # acquire load
        if observed < MIN_STEAL_SIZE:
            return EMPTY_OUTCOME
        take = int(observed * proportion)          # floor rounding
        if take < 1:
            return EMPTY_OUTCOME
        kept = observed - take

        head = self._head                          # acquire head snapshot
        if hooks is not None and "after_snapshot" in hooks:
            hooks["after_snapshot"](self)

        # traverse kept-1 links from the snapshot to the cut node; links are
        # hopped four at a time and a chain shorter than observed surfaces as
        # an attribute error on the None terminator
        steps = kept - 1
        node = head
        try:
            for _ in range(steps >> 2):
                node = node.next.next.next.next
            for _ in range(steps & 3):
                node = node.next
        except AttributeError:
            return CONTENTION_OUTCOME              # chain shorter than observed
        if node is None:
            return CONTENTION_OUTCOME
        if hooks is not None and "after_traverse" in hooks:
            hooks["after_traverse"](self)

        # consistency check: abort unless at least half of the initially
        # observed nodes remain
        if 2 * self.size() < observed:
            return CONTENTION_OUTCOME
        if hooks is not None and "before_sever" in hooks:
            hooks["before_sever"](self)

        # sever under arbitration: abort if a pop is in flight or if pops
        # since the snapshot could have reached the cut node
        self._steal_critical = True
        try:
            with self._sever_lock:
                epoch = self._pop_epoch
                if epoch & 1:
                    return CONTENTION_OUTCOME
                if (epoch // 2) - (epoch_before // 2) >= kept:
                    return CONTENTION_OUTCOME
                suffix = node.next
                if suffix is None:
                    return CONTENTION_OUTCOME
                node.next = None                   # sever: linearization point
        finally:
            self._steal_critical = False
        if hooks is not None and "after_sever" in hooks:
            hooks["after_sever"](self)

        if optimized and self._op_version == version_before:
            # owner performed no push or pop since before the size load:
            # the suffix is exactly `take` nodes, tail resolved lazily
            self._stolen += take
            return StealOutcome(StealOutcome.STOLEN, Batch(suffix, None, take))

        # recount the detached suffix to find its tail and exact count
        count = 1
        tail = suffix
        while tail.next is not None:
            tail = tail.next
            count += 1
        self._stolen += count                      # decrement size by count
        return StealOutcome(StealOutcome.STOLEN, Batch(suffix, tail, count))

    # -- introspection (tests and drain only; not thread-safe) ---------------

    def chain_payloads(self) -> List[Any]:
        """Payloads reachable from head, in order. Quiescent use only."""
        out = []
        node = self._head
        while node is not None:
            out.append(node.payload)
            node = node.next
        return out


class InstrumentedQueue(BulkStealQueue):
    """Queue variant that counts head stores and size read-modify-writes.

    Used to assert the single-store property of push_batch; counters are
    reset to zero after construction.
    """

    def __init__(self):
        self.head_stores = -1   # construction writes _head once
        self.size_rmws = 0
        super().__init__()
        self.head_stores = 0
        self.size_rmws = 0

    @property
    def _head(self):
        return self._head_raw

    @_head.setter
    def _head(self, value):
        self.head_stores += 1
        self._head_raw = value

    @property
    def _pushed(self):
        return self._pushed_raw

    @_pushed.setter
    def _pushed(self, value):
        self.size_rmws += 1
        self._pushed_raw = value

    @property
    def _popped(self):
        return self._popped_raw

    @_popped.setter
    def _popped(self, value):
        self.size_rmws += 1
        self._popped_raw = value

    @property
    def _stolen(self):
        return self._stolen_raw

    @_stolen.setter
    def _stolen(self, value):
        self.size_rmws += 1
        self._stolen_raw = value

    def reset_counters(self) -> None:
        self.head_stores = 0
        self.size_rmws = 0

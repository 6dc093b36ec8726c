"""Sequential reference model for the owner/stealer deque discipline.

The state is a plain list with the head (owner end) first. This is the
specification that implementations are checked against: push prepends a
batch preserving its order, pop removes the front, steal detaches a
floor(size * p) suffix from the tail or aborts Empty.
"""

from __future__ import annotations

from typing import Any, List, Optional, Sequence, Tuple

from .queue import MIN_STEAL_SIZE

# result tags mirroring StealOutcome kinds
STOLEN = "stolen"
EMPTY = "empty"
CONTENTION = "contention"


class SequentialDeque:
    """Pure reference deque: a list with the owner end at index 0."""

    def __init__(self, items: Optional[Sequence[Any]] = None):
        self.items: List[Any] = list(items) if items else []

    def push_batch(self, batch_items: Sequence[Any]) -> None:
        self.items = list(batch_items) + self.items

    def pop(self) -> Optional[Any]:
        if not self.items:
            return None
        return self.items.pop(0)

    def steal(self, proportion: float) -> Tuple[str, List[Any]]:
        size = len(self.items)
        if size < MIN_STEAL_SIZE:
            return EMPTY, []
        take = int(size * proportion)
        if take < 1:
            return EMPTY, []
        stolen = self.items[-take:]
        del self.items[-take:]
        return STOLEN, stolen

    def size(self) -> int:
        return len(self.items)

    def copy(self) -> "SequentialDeque":
        return SequentialDeque(self.items)


def apply_op(state: SequentialDeque, op: str, arg: Any) -> Tuple[SequentialDeque, Any]:
    """Apply one operation to a copy of the state; returns (state, result).

    op is one of "push", "pop", "steal", "steal_opt"; arg is the batch
    payload list for push or the proportion for steal variants.
    """
    new = state.copy()
    if op == "push":
        new.push_batch(arg)
        return new, None
    if op == "pop":
        return new, new.pop()
    if op in ("steal", "steal_opt"):
        tag, items = new.steal(arg)
        return new, (tag, items)
    raise ValueError(f"unknown operation: {op}")

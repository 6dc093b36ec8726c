"""Work-stealing queue with native bulk push and proportional bulk steal,
baseline queues, correctness harness, microbenchmarks and a DAG-exploration
workload."""

from .queue import (
    Batch,
    BulkStealQueue,
    InstrumentedQueue,
    MAX_STEAL_PROPORTION,
    MIN_STEAL_SIZE,
    StealOutcome,
    TaskNode,
    make_batch,
)
from .baselines import ChaseLevDeque, LockedDeque
from .adapters import (
    ADAPTERS,
    ChaseLevAdapter,
    LFQueueAdapter,
    LockedDequeAdapter,
    make_adapter,
)
from .oracle import SequentialDeque, apply_op

__version__ = "0.1.0"

__all__ = [
    "Batch", "BulkStealQueue", "InstrumentedQueue", "MAX_STEAL_PROPORTION",
    "MIN_STEAL_SIZE", "StealOutcome", "TaskNode", "make_batch",
    "ChaseLevDeque", "LockedDeque",
    "ADAPTERS", "ChaseLevAdapter", "LFQueueAdapter", "LockedDequeAdapter",
    "make_adapter", "SequentialDeque", "apply_op",
]

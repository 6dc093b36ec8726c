"""Parallel DAG exploration with per-worker queues and steal-half.

Each worker owns a queue of node ids. A worker pops a node, claims it
(test-and-set in a shared claim table), and pushes the unclaimed
successors as one batch. A worker with an empty queue scans victims in
worker-id order, toggles the victim's steal-permission flag (try-only,
non-blocking), steals half, and pushes the stolen batch into its own
queue. Termination: two consecutive empty-handed full scans while no
queue holds work and no worker is mid-task.
"""

from __future__ import annotations

import csv
import threading
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .adapters import make_adapter


class DagConfigError(ValueError):
    """Raised for invalid DAG generation parameters."""


@dataclass
class Dag:
    """Layered random DAG in CSR form; node 0 is the single root and edges
    only go from lower to higher node id, which guarantees acyclicity."""

    n: int
    indptr: List[int]
    indices: List[int]
    degree: float
    seed: int
    root: int = 0

    def successors(self, node: int) -> List[int]:
        return self.indices[self.indptr[node]:self.indptr[node + 1]]

    def edge_count(self) -> int:
        return len(self.indices)


def generate_dag(n: int, d: float, seed: int) -> Dag:
    """Deterministic layered random DAG with expected out-degree d.

    Every node above the root gets one parent with a smaller id (full
    reachability); the remaining edges are sampled uniformly among
    (src < dst) pairs.
    """
    if n < 1:
        raise DagConfigError("node count must be >= 1")
    if d < 0:
        raise DagConfigError("mean out-degree must be >= 0")
    rng = np.random.default_rng(seed)
    if n == 1:
        return Dag(n=1, indptr=[0, 0], indices=[], degree=d, seed=seed)

    dst = np.arange(1, n, dtype=np.int64)
    parents = (rng.random(n - 1) * dst).astype(np.int64)
    extra = max(0, int(round(n * (d - 1))))
    if extra > 0:
        edst = rng.integers(1, n, size=extra, dtype=np.int64)
        esrc = (rng.random(extra) * edst).astype(np.int64)
        src = np.concatenate([parents, esrc])
        tgt = np.concatenate([dst, edst])
    else:
        src, tgt = parents, dst

    order = np.argsort(src, kind="stable")
    src = src[order]
    tgt = tgt[order]
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return Dag(n=n, indptr=indptr.tolist(), indices=tgt.tolist(),
               degree=d, seed=seed)


def reachable_count(dag: Dag) -> int:
    """Independent sequential traversal; used as the exploration oracle."""
    seen = bytearray(dag.n)
    seen[dag.root] = 1
    stack = [dag.root]
    count = 0
    indptr, indices = dag.indptr, dag.indices
    while stack:
        u = stack.pop()
        count += 1
        for v in indices[indptr[u]:indptr[u + 1]]:
            if not seen[v]:
                seen[v] = 1
                stack.append(v)
    return count


@dataclass
class ExplorationReport:
    threads: int
    nodes: int
    wall_seconds: float
    visited: int
    steals_attempted: int
    steals_succeeded: int
    per_worker_visits: List[int]
    max_concurrent_steals: int = 1

    def to_dict(self) -> dict:
        return {
            "threads": self.threads, "nodes": self.nodes,
            "wall_seconds": self.wall_seconds, "visited": self.visited,
            "steals_attempted": self.steals_attempted,
            "steals_succeeded": self.steals_succeeded,
            "per_worker_visits": self.per_worker_visits,
        }


def explore(dag: Dag, workers: int, p_steal: float = 0.5,
            impl: str = "lf") -> ExplorationReport:
    """Explore the DAG with the given number of worker threads."""
    if workers < 1:
        raise DagConfigError("workers must be >= 1")

    queues = [make_adapter(impl) for _ in range(workers)]
    # steal-permission flag per queue: try-only acquisition serializes
    # stealers without blocking
    steal_flags = [threading.Lock() for _ in range(workers)]
    claimed: dict = {}          # node id -> claim token; setdefault is the TAS
    busy = [False] * workers    # single writer per slot
    visits = [0] * workers
    steals_attempted = [0] * workers
    steals_succeeded = [0] * workers
    # debug check that the flag really admits one stealer per queue
    concurrent_steals = [0] * workers
    max_concurrent = [1] * workers
    errors: List[str] = []

    indptr, indices = dag.indptr, dag.indices
    queues[0].push_batch([dag.root])

    def worker(wid: int) -> None:
        q = queues[wid]
        my_visits = 0
        empty_scans = 0
        try:
            while True:
                busy[wid] = True
                node = q.pop()
                if node is not None:
                    empty_scans = 0
                    token = object()
                    if claimed.setdefault(node, token) is token:
                        my_visits += 1
                        succ = [v for v in indices[indptr[node]:indptr[node + 1]]
                                if v not in claimed]
                        if succ:
                            q.push_batch(succ)
                    busy[wid] = False
                    continue
                busy[wid] = False

                # empty queue: scan victims in worker-id order
                got_work = False
                for vid in range(workers):
                    if vid == wid:
                        continue
                    flag = steal_flags[vid]
                    if not flag.acquire(blocking=False):
                        continue
                    try:
                        concurrent_steals[vid] += 1
                        if concurrent_steals[vid] > max_concurrent[vid]:
                            max_concurrent[vid] = concurrent_steals[vid]
                        steals_attempted[wid] += 1
                        tag, items = queues[vid].steal(p_steal)
                        concurrent_steals[vid] -= 1
                    finally:
                        flag.release()
                    if items:
                        steals_succeeded[wid] += 1
                        q.push_batch(items)
                        got_work = True
                        break
                if got_work:
                    empty_scans = 0
                    continue

                empty_scans += 1
                if empty_scans >= 2 \
                        and not any(busy) \
                        and all(qq.size() == 0 for qq in queues):
                    return
        except Exception as exc:   # pragma: no cover - diagnostic path
            errors.append(f"worker {wid}: {exc!r}")
        finally:
            visits[wid] = my_visits

    threads = [threading.Thread(target=worker, args=(i,), name=f"worker-{i}")
               for i in range(workers)]
    start = time.perf_counter()
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    wall = time.perf_counter() - start

    if errors:
        raise RuntimeError("exploration failed: " + "; ".join(errors))
    visited = sum(visits)
    return ExplorationReport(
        threads=workers,
        nodes=dag.n,
        wall_seconds=wall,
        visited=visited,
        steals_attempted=sum(steals_attempted),
        steals_succeeded=sum(steals_succeeded),
        per_worker_visits=list(visits),
        max_concurrent_steals=max(max_concurrent),
    )


def scalability_run(node_counts: Sequence[int], thread_counts: Sequence[int],
                    degree: float = 2.0, seed: int = 7, impl: str = "lf",
                    p_steal: float = 0.5,
                    out_csv: Optional[str] = None) -> List[ExplorationReport]:
    """Run explore for every (size, threads) pair; thread counts ascending."""
    if list(thread_counts) != sorted(thread_counts):
        raise DagConfigError("thread counts must be ascending")
    reports = []
    for n in node_counts:
        dag = generate_dag(n, degree, seed)
        for workers in thread_counts:
            reports.append(explore(dag, workers, p_steal=p_steal, impl=impl))
    if out_csv is not None:
        write_scaling_csv(reports, out_csv)
    return reports


SCALING_HEADER = ["nodes", "threads", "wall_ms", "visited", "steals"]


def write_scaling_csv(reports: Sequence[ExplorationReport], path: str) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SCALING_HEADER)
            for r in reports:
                writer.writerow([r.nodes, r.threads,
                                 round(r.wall_seconds * 1000.0, 3),
                                 r.visited, r.steals_succeeded])
    except OSError as exc:
        raise OSError(f"cannot write scaling CSV to {path!r}: {exc}") from exc

"""Baseline queues: locked deque and Chase-Lev, plus cross-implementation
equivalence on quiescent states."""

import pytest

from bulksteal import ChaseLevDeque, LockedDeque, make_adapter
from bulksteal.oracle import STOLEN, EMPTY


# -- locked deque -------------------------------------------------------------

def test_locked_push_pop():
    q = LockedDeque()
    q.push_batch(["a", "b", "c"])
    assert q.pop() == "a"
    assert q.pop() == "b"


def test_locked_steal_matches_lf_payload_set():
    locked = make_adapter("locked")
    lf = make_adapter("lf")
    items = list(range(1, 11))
    locked.push_batch(items)
    lf.push_batch(items)
    tag_l, got_l = locked.steal(0.5)
    tag_f, got_f = lf.steal(0.5)
    assert tag_l == tag_f == STOLEN
    assert got_l == got_f == [6, 7, 8, 9, 10]


def test_locked_steal_too_small():
    q = LockedDeque()
    q.push_batch([1])
    assert q.steal(0.5).is_empty


def test_locked_never_contends():
    q = LockedDeque()
    q.push_batch(list(range(100)))
    for _ in range(10):
        out = q.steal(0.3)
        assert not out.is_contention


# -- Chase-Lev ------------------------------------------------------------------

def test_chaselev_owner_is_lifo_at_bottom():
    q = ChaseLevDeque()
    q.push("a")
    q.push("b")
    q.push("c")
    assert q.pop() == "c"
    assert q.pop() == "b"
    assert q.pop() == "a"
    assert q.pop() is None


def test_chaselev_steal_one_on_empty():
    q = ChaseLevDeque()
    assert q.steal_one() is None


def test_chaselev_steal_takes_oldest():
    q = ChaseLevDeque()
    for x in (1, 2, 3):
        q.push(x)
    assert q.steal_one() == 1
    assert q.steal_one() == 2
    assert q.pop() == 3


def test_chaselev_growth_beyond_initial_capacity():
    q = ChaseLevDeque()
    n = ChaseLevDeque.INITIAL_CAPACITY * 4 + 3
    for x in range(n):
        q.push(x)
    assert q.size() == n
    assert [q.pop() for _ in range(n)] == list(reversed(range(n)))


def test_chaselev_interleaved_pop_steal_conserves():
    q = ChaseLevDeque()
    for x in range(50):
        q.push(x)
    got = []
    for i in range(50):
        item = q.pop() if i % 2 else q.steal_one()
        assert item is not None
        got.append(item)
    assert sorted(got) == list(range(50))
    assert q.size() == 0


def test_chaselev_adapter_bulk_semantics_match_lf():
    cl = make_adapter("chaselev")
    lf = make_adapter("lf")
    items = list(range(1, 11))
    cl.push_batch(items)
    lf.push_batch(items)
    assert cl.pop() == lf.pop() == 1
    tag_c, got_c = cl.steal(0.5)
    tag_f, got_f = lf.steal(0.5)
    assert tag_c == tag_f == STOLEN
    assert sorted(got_c) == sorted(got_f)


def test_chaselev_bulk_steal_counts_single_steals():
    q = ChaseLevDeque()
    for x in range(20):
        q.push(x)
    out = q.steal(0.5, _allow_over_half=False)
    assert out.is_stolen
    assert out.batch.count == 10
    assert q.size() == 10


# -- quiescent equivalence across all adapters --------------------------------------

@pytest.mark.parametrize("size", [2, 5, 10, 100, 1001])
@pytest.mark.parametrize("percent", [10, 20, 30, 40, 50])
def test_all_adapters_steal_same_count(size, percent):
    p = percent / 100.0
    counts = set()
    for impl in ("lf", "locked", "chaselev"):
        adapter = make_adapter(impl)
        adapter.push_batch(list(range(size)))
        tag, items = adapter.steal(p)
        expected = int(size * p)
        if size < 2 or expected < 1:
            assert tag == EMPTY
            counts.add(0)
        else:
            assert tag == STOLEN
            counts.add(len(items))
            assert len(items) == expected
    assert len(counts) == 1

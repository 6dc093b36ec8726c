"""Benchmark plumbing: config validation, record invariants, and CSV
round-tripping. Timing magnitudes are covered by the acceptance suite."""

import pytest

from bulksteal.bench import (
    BenchConfig, BenchConfigError, BenchRecord, CSV_HEADER, read_csv,
    run_bench, write_csv,
)


# -- configuration -------------------------------------------------------------

def test_default_config_is_valid():
    BenchConfig().validate()


def test_zero_iterations_rejected():
    with pytest.raises(BenchConfigError):
        BenchConfig(iterations=0).validate()


def test_negative_warmup_rejected():
    with pytest.raises(BenchConfigError):
        BenchConfig(warmup=-1).validate()


def test_unknown_operation_rejected():
    with pytest.raises(BenchConfigError):
        BenchConfig(operation="fly").validate()


def test_steal_proportion_of_100_percent_rejected():
    with pytest.raises(BenchConfigError):
        BenchConfig(operation="steal", parameters=[50, 100]).validate()


def test_steal_on_tiny_queue_rejected():
    with pytest.raises(BenchConfigError):
        BenchConfig(operation="steal", parameters=[10],
                    initial_size=1).validate()


def test_nonpositive_parameters_rejected():
    with pytest.raises(BenchConfigError):
        BenchConfig(operation="push", parameters=[128, 0]).validate()


# -- records --------------------------------------------------------------------

def _tiny(operation, impl="lf", **kw):
    cfg = BenchConfig(impl=impl, operation=operation, warmup=2, iterations=20,
                      initial_size=100, **kw)
    return run_bench(cfg)


def test_push_records_one_per_batch_size():
    records = _tiny("push", parameters=[1, 4, 16])
    assert [r.parameter for r in records] == [1, 4, 16]
    for r in records:
        assert r.operation == "push"
        assert r.iterations == 20
        assert r.median_ns <= r.p99_ns
        assert r.mean_ns > 0


def test_pop_emits_single_record():
    (record,) = _tiny("pop")
    assert record.operation == "pop"
    assert record.impl == "lf"


def test_steal_records_carry_percent_parameter():
    records = _tiny("steal", parameters=[10, 50])
    assert [r.parameter for r in records] == [10, 50]
    assert all(r.operation == "steal" for r in records)


def test_optimized_steal_is_labelled():
    records = _tiny("steal", parameters=[50], optimized=True)
    assert records[0].operation == "steal_opt"


def test_record_invariant_rejects_inverted_percentiles():
    bad = BenchRecord(impl="lf", operation="pop", parameter=1, iterations=5,
                      mean_ns=10.0, median_ns=20.0, p99_ns=5.0, stddev_ns=1.0)
    with pytest.raises(AssertionError):
        bad.check_invariants()


# -- CSV ---------------------------------------------------------------------------

def test_csv_round_trip(tmp_path):
    records = _tiny("push", parameters=[1, 8])
    path = tmp_path / "push.csv"
    write_csv(records, str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + len(records)

    back = read_csv(str(path))
    assert [(r.impl, r.operation, r.parameter, r.iterations) for r in back] \
        == [(r.impl, r.operation, r.parameter, r.iterations) for r in records]
    for orig, parsed in zip(records, back):
        assert parsed.mean_ns == round(orig.mean_ns)


def test_write_csv_unwritable_path_raises(tmp_path):
    records = _tiny("pop")
    with pytest.raises(OSError):
        write_csv(records, str(tmp_path / "missing_dir" / "out.csv"))

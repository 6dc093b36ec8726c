"""Command-line entry point: bench, stress and dag subcommands.

Exit codes: 0 success, 1 property violation (stress), 2 configuration
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .adapters import ADAPTERS, make_adapter
from .bench import (BenchConfig, BenchConfigError, CSV_HEADER,
                    DEFAULT_BATCH_SIZES, DEFAULT_INITIAL_SIZE,
                    DEFAULT_PROPORTIONS, run_bench, write_csv)
from .dagwork import DagConfigError, scalability_run, write_scaling_csv
from .harness import StressConfig, run_conservation

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}")


def _impl_list(text: str) -> List[str]:
    impls = [part for part in text.split(",") if part]
    for impl in impls:
        if impl not in ADAPTERS:
            raise argparse.ArgumentTypeError(
                f"unknown implementation {impl!r}; choose from {sorted(ADAPTERS)}")
    return impls


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bulksteal",
        description="Work-stealing queue benchmarks, stress tests and "
                    "DAG-exploration workload.")
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="latency microbenchmarks")
    bench.add_argument("operation", choices=["push", "pop", "steal"])
    bench.add_argument("--impl", type=_impl_list, default=["lf"],
                       help="comma-separated: lf,locked,chaselev")
    bench.add_argument("--batch-sizes", type=_int_list,
                       default=list(DEFAULT_BATCH_SIZES))
    bench.add_argument("--proportions", type=_int_list,
                       default=list(DEFAULT_PROPORTIONS),
                       help="steal proportions in percent")
    bench.add_argument("--initial-size", type=int, default=DEFAULT_INITIAL_SIZE)
    bench.add_argument("--iters", type=int, default=10_000)
    bench.add_argument("--warmup", type=int, default=1_000)
    bench.add_argument("--optimized", action="store_true",
                       help="use the optimized steal variant (lf only)")
    bench.add_argument("--out", help="write CSV to this path")
    bench.add_argument("--json", action="store_true", dest="as_json")

    stress = sub.add_parser("stress", help="conservation stress run")
    stress.add_argument("--impl", choices=sorted(ADAPTERS), default="lf")
    stress.add_argument("--ops", type=int, default=100_000)
    stress.add_argument("--seed", type=int, default=0)
    stress.add_argument("--push-prob", type=float, default=0.55)
    stress.add_argument("--batch-max", type=int, default=16)
    stress.add_argument("--steal-prop", type=float, default=0.5)
    stress.add_argument("--json", action="store_true", dest="as_json")

    dag = sub.add_parser("dag", help="DAG exploration scalability run")
    dag.add_argument("--nodes", type=_int_list, default=[250_000])
    dag.add_argument("--degree", type=float, default=2.0)
    dag.add_argument("--seed", type=int, default=7)
    dag.add_argument("--threads", type=_int_list, default=[1, 2, 4, 8])
    dag.add_argument("--impl", choices=sorted(ADAPTERS), default="lf")
    dag.add_argument("--steal-prop", type=float, default=0.5)
    dag.add_argument("--out", help="write scaling CSV to this path")
    dag.add_argument("--json", action="store_true", dest="as_json")
    return parser


def _cmd_bench(args) -> int:
    records = []
    for impl in args.impl:
        if args.operation == "steal":
            parameters = args.proportions
        elif args.operation == "push":
            parameters = args.batch_sizes
        else:
            parameters = []
        cfg = BenchConfig(
            impl=impl,
            operation=args.operation,
            parameters=list(parameters),
            initial_size=args.initial_size,
            warmup=args.warmup,
            iterations=args.iters,
            optimized=args.optimized and impl == "lf",
        )
        try:
            cfg.validate()
        except BenchConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        records.extend(run_bench(cfg))

    if args.out:
        write_csv(records, args.out)
    if args.as_json:
        print(json.dumps([r.__dict__ for r in records], indent=2))
    elif not args.out:
        print(",".join(CSV_HEADER))
        for r in records:
            print(f"{r.impl},{r.operation},{r.parameter},{r.iterations},"
                  f"{round(r.mean_ns)},{round(r.median_ns)},"
                  f"{round(r.p99_ns)},{round(r.stddev_ns)}")
    return EXIT_OK


def _cmd_stress(args) -> int:
    cfg = StressConfig(
        ops=args.ops,
        push_prob=args.push_prob,
        batch_max=args.batch_max,
        steal_prop=args.steal_prop,
        seed=args.seed,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    adapter = make_adapter(args.impl)
    report = run_conservation(adapter, cfg)
    if args.as_json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(f"impl={report.impl} ops={report.ops} seed={report.seed}")
        print(f"pushed={report.pushed} popped={report.popped} "
              f"stolen={report.stolen} residual={report.residual}")
        print(f"steals: attempted={report.steals_attempted} "
              f"succeeded={report.steals_succeeded} "
              f"contentions={report.contentions}")
        if report.ok:
            print("conservation: OK (no lost or duplicated payloads)")
        else:
            print(f"VIOLATIONS: duplicated={report.duplicated[:10]} "
                  f"missing={report.missing[:10]} "
                  f"harness_error={report.harness_error}")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_dag(args) -> int:
    try:
        reports = scalability_run(
            args.nodes, args.threads, degree=args.degree, seed=args.seed,
            impl=args.impl, p_steal=args.steal_prop, out_csv=args.out)
    except DagConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.as_json:
        print(json.dumps([r.to_dict() for r in reports], indent=2))
    else:
        print("nodes,threads,wall_ms,visited,steals")
        for r in reports:
            print(f"{r.nodes},{r.threads},{round(r.wall_seconds * 1000, 3)},"
                  f"{r.visited},{r.steals_succeeded}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "stress":
            return _cmd_stress(args)
        if args.command == "dag":
            return _cmd_dag(args)
    except (BenchConfigError, DagConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

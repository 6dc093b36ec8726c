#!/usr/bin/env python3
"""Render benchmark and scalability CSVs as figures.

Three figure kinds:

- ``push``: mean latency (ns) vs batch size, one line per implementation.
- ``steal``: mean latency (ns) vs steal proportion (%), one line per
  implementation and steal variant.
- ``scaling``: wall time (ms) vs thread count on log-log axes, one line
  per graph size.

The output format follows the file extension (png, svg, pdf, ...).
Usage: ``plots.py --kind push|steal|scaling --in results.csv --out fig.png
[--log-x] [--log-y]``
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from typing import Dict, List, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

KINDS = ("push", "steal", "scaling")

# columns each kind needs from its CSV
REQUIRED_COLUMNS = {
    "push": ("impl", "operation", "parameter", "mean_ns"),
    "steal": ("impl", "operation", "parameter", "mean_ns"),
    "scaling": ("nodes", "threads", "wall_ms"),
}


class PlotError(Exception):
    """Input CSV cannot be plotted (missing columns or malformed rows)."""


@dataclass
class FigureSpec:
    kind: str
    input_path: str
    output_path: str
    log_x: bool = False
    log_y: bool = False

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise PlotError(f"unknown figure kind {self.kind!r}; "
                            f"expected one of {', '.join(KINDS)}")


def _read_rows(path: str, kind: str) -> List[dict]:
    """Read and type-check the CSV; errors name the offending line."""
    required = REQUIRED_COLUMNS[kind]
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise PlotError(f"{path}: empty file, expected a header row")
        missing = [col for col in required if col not in reader.fieldnames]
        if missing:
            raise PlotError(
                f"{path}: missing required column(s) {', '.join(missing)} "
                f"for kind {kind!r}")
        rows = []
        # header is line 1; data starts at line 2
        for lineno, row in enumerate(reader, start=2):
            try:
                if kind == "scaling":
                    rows.append({
                        "nodes": int(row["nodes"]),
                        "threads": int(row["threads"]),
                        "wall_ms": float(row["wall_ms"]),
                    })
                else:
                    rows.append({
                        "impl": row["impl"],
                        "operation": row["operation"],
                        "parameter": int(row["parameter"]),
                        "mean_ns": float(row["mean_ns"]),
                    })
            except (TypeError, ValueError) as exc:
                raise PlotError(
                    f"{path}: malformed row at line {lineno}: {exc}") from exc
    return rows


def _series(rows: List[dict], key_fields: Tuple[str, ...],
            x_field: str, y_field: str) -> Dict[str, List[Tuple[float, float]]]:
    """Group rows into x-sorted (x, y) series keyed by the given fields."""
    series: Dict[str, List[Tuple[float, float]]] = {}
    for row in rows:
        label = " ".join(str(row[f]) for f in key_fields)
        series.setdefault(label, []).append((row[x_field], row[y_field]))
    for points in series.values():
        points.sort()
    return series


def render(spec: FigureSpec):
    """Render the figure described by spec and write it to its output
    path; returns the matplotlib figure for inspection."""
    spec.validate()
    rows = _read_rows(spec.input_path, spec.kind)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if spec.kind == "push":
        series = _series(rows, ("impl",), "parameter", "mean_ns")
        ax.set_xlabel("batch size (tasks)")
        ax.set_ylabel("mean push latency (ns)")
        ax.set_title("Push latency vs batch size")
    elif spec.kind == "steal":
        series = _series(rows, ("impl", "operation"), "parameter", "mean_ns")
        ax.set_xlabel("steal proportion (%)")
        ax.set_ylabel("mean steal latency (ns)")
        ax.set_title("Steal latency vs proportion")
    else:
        series = _series(rows, ("nodes",), "threads", "wall_ms")
        series = {f"{label} nodes": pts for label, pts in series.items()}
        ax.set_xlabel("threads")
        ax.set_ylabel("wall time (ms)")
        ax.set_title("Exploration time vs threads")
        # near log-linear scalability reads best on log-log axes
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")

    for label in sorted(series):
        points = series[label]
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.plot(xs, ys, marker="o", label=label)

    if spec.log_x:
        ax.set_xscale("log")
    if spec.log_y:
        ax.set_yscale("log")
    if series:
        ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.output_path)
    return fig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Render benchmark/scalability CSVs as figures.")
    parser.add_argument("--kind", required=True, choices=KINDS,
                        help="figure kind")
    parser.add_argument("--in", dest="input_path", required=True,
                        metavar="CSV", help="input CSV path")
    parser.add_argument("--out", dest="output_path", required=True,
                        metavar="IMAGE",
                        help="output image path (format from extension)")
    parser.add_argument("--log-x", action="store_true",
                        help="logarithmic x axis")
    parser.add_argument("--log-y", action="store_true",
                        help="logarithmic y axis")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(kind=args.kind, input_path=args.input_path,
                      output_path=args.output_path,
                      log_x=args.log_x, log_y=args.log_y)
    try:
        fig = render(spec)
    except (PlotError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Plot wall time and speedup from benchmark CSV rows.

Consumes the CSV written by the `qvirt` CLI (schema: algorithm, n_qubits,
n_layers, n_vqpus, n_circuits, wall_time_s, repetition, seed) and renders
two panels per (algorithm, n_qubits, n_layers) series: mean wall time vs
worker count, and speedup relative to the single-worker mean, with an
ideal-scaling guide line.  Needs matplotlib (`pip install qvirt[plots]`).
"""

import argparse
import csv
import statistics
import sys
from collections import defaultdict
from pathlib import Path


def load_series(path: Path) -> dict[tuple[str, int, int], dict[int, float]]:
    """Map (algorithm, n_qubits, n_layers) -> {n_vqpus: mean wall time}."""
    samples: dict[tuple[str, int, int], dict[int, list[float]]] = defaultdict(
        lambda: defaultdict(list))
    with path.open(newline="") as fh:
        for row in csv.DictReader(fh):
            key = (row["algorithm"], int(row["n_qubits"]), int(row["n_layers"]))
            samples[key][int(row["n_vqpus"])].append(float(row["wall_time_s"]))
    return {
        key: {v: statistics.fmean(times) for v, times in sorted(points.items())}
        for key, points in samples.items()
    }


def series_label(key: tuple[str, int, int]) -> str:
    algorithm, n_qubits, n_layers = key
    label = f"{algorithm} n={n_qubits}"
    return f"{label} L={n_layers}" if n_layers else label


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv", type=Path, help="benchmark CSV to plot")
    parser.add_argument("--out", type=Path, default=Path("scaling.png"),
                        help="output image path (default scaling.png)")
    args = parser.parse_args()

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib is required: pip install 'qvirt[plots]'", file=sys.stderr)
        return 1

    series = load_series(args.csv)
    if not series:
        print(f"no rows in {args.csv}", file=sys.stderr)
        return 1

    fig, (ax_time, ax_speedup) = plt.subplots(1, 2, figsize=(10, 4))
    worker_axis: set[int] = set()
    for key, points in sorted(series.items()):
        workers = list(points)
        worker_axis.update(workers)
        times = [points[v] for v in workers]
        ax_time.plot(workers, times, marker="o", label=series_label(key))
        if 1 in points:
            ax_speedup.plot(workers, [points[1] / t for t in times],
                            marker="o", label=series_label(key))

    ticks = sorted(worker_axis)
    ax_speedup.plot(ticks, ticks, linestyle="--", color="gray", label="ideal")
    for ax, ylabel in ((ax_time, "mean wall time [s]"), (ax_speedup, "speedup vs 1 worker")):
        ax.set_xlabel("virtual QPUs")
        ax.set_ylabel(ylabel)
        ax.set_xscale("log", base=2)
        ax.set_xticks(ticks, [str(t) for t in ticks])
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
    ax_time.set_yscale("log")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Drive a strong-scaling sweep through the benchmark CLI.

Runs the MC-VQE and DDCL gradient workloads over a worker-count sweep and
appends every timing row to one CSV, ready for scripts/plot_scaling.py.
Everything goes through the installed `qvirt` command line, so this script
measures exactly what an external user would see.

Defaults are sized for a laptop-class box (minutes, not hours); raise
--qubits / --reps on a many-core machine to reproduce saturation behaviour.
"""

import argparse
import shlex
import subprocess
import sys
from pathlib import Path


def run(argv: list[str]) -> None:
    print("+", shlex.join(argv), flush=True)
    subprocess.run(argv, check=True)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("scaling.csv"),
                        help="CSV to append to (default scaling.csv)")
    parser.add_argument("--qubits", type=int, nargs="+", default=[10, 12],
                        help="MC-VQE register sizes (default 10 12)")
    parser.add_argument("--ddcl-qubits", type=int, nargs="+", default=[10, 12],
                        help="DDCL register sizes, must be even (default 10 12)")
    parser.add_argument("--layers", type=int, default=4, help="DDCL layers (default 4)")
    parser.add_argument("--vqpus", default="1,2,4,8",
                        help="worker counts to sweep (default 1,2,4,8)")
    parser.add_argument("--reps", type=int, default=3, help="repetitions per point (default 3)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--shots", type=int, default=8192, help="DDCL samples per circuit")
    args = parser.parse_args()

    base = [sys.executable, "-m", "qvirt.cli"]
    common = ["--n-virtual-qpus", args.vqpus, "--reps", str(args.reps),
              "--seed", str(args.seed), "--out", str(args.out)]
    for n in args.qubits:
        run(base + ["mcvqe-grad", "--qubits", str(n)] + common)
    for n in args.ddcl_qubits:
        run(base + ["ddcl-grad", "--qubits", str(n), "--layers", str(args.layers),
                    "--shots", str(args.shots)] + common)
    print(f"sweep complete; rows in {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

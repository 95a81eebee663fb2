"""Benchmark command line: gradient sweeps over virtual QPU counts.

Subcommands:

  mcvqe-grad     time MC-VQE gradient updates over a vQPU sweep
  ddcl-grad      time DDCL gradient updates over a vQPU sweep
  verify-counts  check the closed-form workload sizes against known values

Each sweep appends one CSV row per (n_vqpus, repetition) with the stable
schema `algorithm,n_qubits,n_layers,n_vqpus,n_circuits,wall_time_s,
repetition,seed` and prints mean/std wall time per sweep point.  Timing
covers only the pool execution span, not circuit construction.  The CSV
lands in $QVIRT_OUT_DIR (default `.`) unless --out says otherwise.

Workload inputs derive deterministically from --seed: MC-VQE coefficients
use the seed itself, reference amplitudes seed+1, angles seed+2; DDCL
angles use seed+1 and the target distribution seed+2.  The same seed is
the pool's sampling base seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import statistics
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .backend import MODES
from .buffers import ResultBuffer, serialize
from .ddcl import (
    DdclSpec,
    ddcl_execution_count,
    ddcl_gradient,
    ddcl_parameter_count,
    load_target_distribution,
    random_target_distribution,
)
from .gradients import GradientReport
from .mcvqe import (
    McvqeAnsatzSpec,
    mcvqe_execution_count,
    mcvqe_gradient,
    mcvqe_parameter_count,
    random_angles,
    random_cis_amplitudes,
)
from .pauli import (
    aiem_hamiltonian,
    load_aiem_coefficients,
    measurable_term_count,
    random_aiem_coefficients,
)
from .pool import VqpuPoolConfig

OUT_DIR_ENV = "QVIRT_OUT_DIR"

CSV_FIELDS = ("algorithm", "n_qubits", "n_layers", "n_vqpus", "n_circuits",
              "wall_time_s", "repetition", "seed")

# Known-good workload sizes, used as regression anchors by verify-counts:
# n -> (terms, parameters, executions) for the chain-Hamiltonian gradient,
# (n, layers) -> (parameters, executions) for the circuit-learning gradient.
MCVQE_REFERENCE_SIZES = {
    16: (92, 76, 13984),
    18: (104, 86, 17888),
    20: (116, 96, 22272),
    22: (128, 106, 27136),
}
DDCL_REFERENCE_SIZES = {
    (20, 10): (1200, 2400),
    (22, 10): (1320, 2640),
    (24, 10): (1440, 2880),
    (26, 10): (1560, 3120),
}


@dataclass
class SweepSettings:
    """Parsed flags shared by both gradient subcommands."""

    algorithm: str
    n_qubits: int
    n_layers: int
    vqpu_counts: tuple[int, ...]
    seed: int
    reps: int
    mode: str
    shots: int
    out: Path
    dump_buffer: Path | None
    dump_gradient: Path | None


def _parse_vqpu_list(text: str) -> tuple[int, ...]:
    try:
        counts = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad worker-count list {text!r}") from None
    if not counts or any(v < 1 for v in counts):
        raise argparse.ArgumentTypeError("worker counts must be positive integers")
    return counts


def _add_sweep_flags(parser: argparse.ArgumentParser, default_mode: str) -> None:
    parser.add_argument("--qubits", type=int, required=True, help="register size")
    parser.add_argument("--n-virtual-qpus", type=_parse_vqpu_list, default=(1,),
                        metavar="N[,N...]", help="worker counts to sweep (default 1)")
    parser.add_argument("--seed", type=int, default=0, help="base seed for inputs and sampling")
    parser.add_argument("--reps", type=int, default=10, help="repetitions per sweep point")
    parser.add_argument("--mode", choices=MODES, default=default_mode,
                        help=f"estimation mode (default {default_mode})")
    parser.add_argument("--shots", type=int, default=8192, help="samples per circuit in counts mode")
    parser.add_argument("--out", type=Path, default=None,
                        help=f"CSV path (default bench.csv under ${OUT_DIR_ENV} or .)")
    parser.add_argument("--dump-buffer", type=Path, metavar="PATH",
                        help="write the last run's result buffer in text form")
    parser.add_argument("--dump-gradient", type=Path, metavar="PATH",
                        help="write the last run's gradient report as JSON")


def _settings(args: argparse.Namespace, algorithm: str, n_layers: int) -> SweepSettings:
    out = args.out
    if out is None:
        out = Path(os.environ.get(OUT_DIR_ENV, ".")) / "bench.csv"
    return SweepSettings(
        algorithm=algorithm,
        n_qubits=args.qubits,
        n_layers=n_layers,
        vqpu_counts=args.n_virtual_qpus,
        seed=args.seed,
        reps=args.reps,
        mode=args.mode,
        shots=args.shots,
        out=out,
        dump_buffer=args.dump_buffer,
        dump_gradient=args.dump_gradient,
    )


def _append_rows(path: Path, rows: list[dict[str, object]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fresh = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        if fresh:
            writer.writeheader()
        writer.writerows(rows)


def _run_sweep(
    settings: SweepSettings,
    n_circuits: int,
    run_once: Callable[[VqpuPoolConfig, ResultBuffer | None], GradientReport],
) -> int:
    rows: list[dict[str, object]] = []
    last_report: GradientReport | None = None
    last_buffer: ResultBuffer | None = None
    for n_vqpus in settings.vqpu_counts:
        config = VqpuPoolConfig(
            n_virtual_qpus=n_vqpus,
            mode=settings.mode,
            shots=settings.shots,
            base_seed=settings.seed,
        )
        times: list[float] = []
        for rep in range(settings.reps):
            want_dump = settings.dump_buffer is not None
            buffer = ResultBuffer(n_qubits=settings.n_qubits) if want_dump else None
            report = run_once(config, buffer)
            if report.n_circuit_executions != n_circuits:
                raise RuntimeError(
                    f"executed {report.n_circuit_executions} circuits, expected {n_circuits}")
            times.append(report.wall_time_s)
            rows.append({
                "algorithm": settings.algorithm,
                "n_qubits": settings.n_qubits,
                "n_layers": settings.n_layers,
                "n_vqpus": n_vqpus,
                "n_circuits": n_circuits,
                "wall_time_s": format(report.wall_time_s, ".6f"),
                "repetition": rep,
                "seed": settings.seed,
            })
            last_report = report
            last_buffer = buffer
        mean = statistics.fmean(times)
        std = statistics.pstdev(times) if len(times) > 1 else 0.0
        print(f"{settings.algorithm} n={settings.n_qubits} vqpus={n_vqpus}: "
              f"mean {mean:.4f} s, std {std:.4f} s over {len(times)} reps "
              f"({n_circuits} circuits)")
    _append_rows(settings.out, rows)
    print(f"appended {len(rows)} rows to {settings.out}")
    if settings.dump_buffer is not None and last_buffer is not None:
        settings.dump_buffer.write_text(serialize(last_buffer))
        print(f"wrote buffer dump to {settings.dump_buffer}")
    if settings.dump_gradient is not None and last_report is not None:
        payload = {
            "algorithm": settings.algorithm,
            "n_qubits": settings.n_qubits,
            "n_layers": settings.n_layers,
            "n_vqpus": settings.vqpu_counts[-1],
            "mode": settings.mode,
            "shots": settings.shots,
            "seed": settings.seed,
            "n_circuit_executions": last_report.n_circuit_executions,
            "wall_time_s": last_report.wall_time_s,
            "gradient": list(last_report.gradient),
        }
        settings.dump_gradient.write_text(json.dumps(payload, indent=1) + "\n")
        print(f"wrote gradient dump to {settings.dump_gradient}")
    return 0


def cmd_mcvqe_grad(args: argparse.Namespace) -> int:
    if args.qubits < 2:
        print("error: --qubits must be at least 2", file=sys.stderr)
        return 2
    settings = _settings(args, "mcvqe", n_layers=0)
    if args.coefficients is not None:
        coefficients = load_aiem_coefficients(args.coefficients.read_text())
        if coefficients.n_monomers != args.qubits:
            print(f"error: coefficient file covers {coefficients.n_monomers} sites, "
                  f"--qubits is {args.qubits}", file=sys.stderr)
            return 2
    else:
        coefficients = random_aiem_coefficients(args.qubits, args.seed)
    hamiltonian = aiem_hamiltonian(coefficients)
    spec = McvqeAnsatzSpec(
        cis_amplitudes=random_cis_amplitudes(args.qubits, args.seed + 1),
        theta=random_angles(mcvqe_parameter_count(args.qubits), args.seed + 2),
    )

    def run_once(config: VqpuPoolConfig, buffer: ResultBuffer | None) -> GradientReport:
        return mcvqe_gradient(hamiltonian, spec, config, buffer=buffer)

    return _run_sweep(settings, mcvqe_execution_count(args.qubits), run_once)


def cmd_ddcl_grad(args: argparse.Namespace) -> int:
    if args.qubits < 2 or args.qubits % 2:
        print("error: --qubits must be even and at least 2", file=sys.stderr)
        return 2
    if args.layers < 1:
        print("error: --layers must be positive", file=sys.stderr)
        return 2
    settings = _settings(args, "ddcl", n_layers=args.layers)
    if args.target is not None:
        target = load_target_distribution(args.target.read_text())
    else:
        target = random_target_distribution(args.qubits, args.seed + 2)
    spec = DdclSpec(
        n_qubits=args.qubits,
        n_layers=args.layers,
        theta=random_angles(ddcl_parameter_count(args.qubits, args.layers), args.seed + 1),
        target=target,
        shots=args.shots,
    )

    def run_once(config: VqpuPoolConfig, buffer: ResultBuffer | None) -> GradientReport:
        return ddcl_gradient(spec, config, buffer=buffer)

    return _run_sweep(settings, ddcl_execution_count(args.qubits, args.layers), run_once)


def cmd_verify_counts(_: argparse.Namespace) -> int:
    failures = 0
    for n, expected in sorted(MCVQE_REFERENCE_SIZES.items()):
        got = (measurable_term_count(n), mcvqe_parameter_count(n), mcvqe_execution_count(n))
        ok = got == expected
        failures += not ok
        print(f"mcvqe n={n}: terms={got[0]} params={got[1]} executions={got[2]} "
              f"expected={expected} {'ok' if ok else 'MISMATCH'}")
    for (n, layers), expected in sorted(DDCL_REFERENCE_SIZES.items()):
        got = (ddcl_parameter_count(n, layers), ddcl_execution_count(n, layers))
        ok = got == expected
        failures += not ok
        print(f"ddcl n={n} layers={layers}: params={got[0]} executions={got[1]} "
              f"expected={expected} {'ok' if ok else 'MISMATCH'}")
    if failures:
        print(f"{failures} row(s) mismatched", file=sys.stderr)
        return 1
    print("all 8 rows match")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qvirt", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_mcvqe = sub.add_parser("mcvqe-grad", help="time MC-VQE gradient updates")
    _add_sweep_flags(p_mcvqe, default_mode="expectation")
    p_mcvqe.add_argument("--coefficients", type=Path, metavar="FILE",
                         help="Hamiltonian coefficient file (default: seeded random)")
    p_mcvqe.set_defaults(handler=cmd_mcvqe_grad)

    p_ddcl = sub.add_parser("ddcl-grad", help="time DDCL gradient updates")
    _add_sweep_flags(p_ddcl, default_mode="counts")
    p_ddcl.add_argument("--layers", type=int, default=10, help="circuit layers (default 10)")
    p_ddcl.add_argument("--target", type=Path, metavar="FILE",
                        help="target distribution file (default: seeded random)")
    p_ddcl.set_defaults(handler=cmd_ddcl_grad)

    p_verify = sub.add_parser("verify-counts", help="check workload-size formulas")
    p_verify.set_defaults(handler=cmd_verify_counts)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())

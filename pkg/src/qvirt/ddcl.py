"""Data-driven circuit learning: Born-machine circuit, JS loss, gradient.

The circuit entangles neighboring qubits into Bell pairs, then applies L
layers of single-qubit rotation triples (Rz, Ry, Rz on every qubit) around
a CNOT ladder, 6n angles per layer.  Training drives the circuit's output
distribution toward a target under the Jensen-Shannon divergence; the
gradient estimator evaluates the loss at each angle shifted by +-pi/2,
costing exactly 2 * 6nL circuit executions per update.

The shift rule is exact for expectation-valued losses only; applied to the
JS loss it is a fixed-stencil central-difference estimator with the same
flat cost of two circuits per parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .backend import Accelerator, StatevectorBackend, allocate, born_distribution, run_gates
from .buffers import ChildResult, ResultBuffer
from .circuits import Circuit, Gate, bind, cnot, h, rz, ry
from .gradients import GradientReport, shifted_circuits
from .pool import VqpuPoolConfig, execute_parallel

LN2 = math.log(2.0)

NORMALIZATION_TOLERANCE = 1e-9

# Benchmark targets cap their support so huge registers stay tractable.
MAX_TARGET_SUPPORT_QUBITS = 10


def js_divergence(p: Mapping[str, float], q: Mapping[str, float]) -> float:
    """Jensen-Shannon divergence, natural log, in [0, ln 2].

    0.5 * sum_b [p(b) ln(p(b)/m(b)) + q(b) ln(q(b)/m(b))] with the midpoint
    m = (p + q) / 2; missing keys are zero and zero-numerator terms
    contribute nothing.
    """
    for name, dist in (("first", p), ("second", q)):
        total = math.fsum(dist.values())
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValueError(f"{name} distribution sums to {total!r}, not 1")
        if any(v < 0.0 for v in dist.values()):
            raise ValueError(f"{name} distribution has negative entries")
    acc = 0.0
    # Sorted union: set order is hash-salted and would perturb the float
    # accumulation from process to process.
    for b in sorted(p.keys() | q.keys()):
        pb = p.get(b, 0.0)
        qb = q.get(b, 0.0)
        m = 0.5 * (pb + qb)
        if pb > 0.0:
            acc += 0.5 * pb * math.log(pb / m)
        if qb > 0.0:
            acc += 0.5 * qb * math.log(qb / m)
    return acc


def ddcl_parameter_count(n_qubits: int, n_layers: int) -> int:
    """Angles in the layered circuit: 6 * n * L."""
    if n_qubits < 2 or n_qubits % 2:
        raise ValueError(f"n_qubits must be even and >= 2, got {n_qubits}")
    if n_layers < 1:
        raise ValueError(f"n_layers must be positive, got {n_layers}")
    return 6 * n_qubits * n_layers


def ddcl_execution_count(n_qubits: int, n_layers: int) -> int:
    """Circuits per gradient update: two per parameter."""
    return 2 * ddcl_parameter_count(n_qubits, n_layers)


@dataclass(frozen=True)
class DdclSpec:
    """Inputs for one gradient evaluation: geometry, angles, target, shots."""

    n_qubits: int
    n_layers: int
    theta: tuple[float, ...]
    target: Mapping[str, float]
    shots: int = 8192

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        object.__setattr__(self, "target", dict(self.target))
        want = ddcl_parameter_count(self.n_qubits, self.n_layers)
        if len(self.theta) != want:
            raise ValueError(f"expected {want} angles, got {len(self.theta)}")
        if self.shots < 1:
            raise ValueError(f"shots must be positive, got {self.shots}")
        total = math.fsum(self.target.values())
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValueError(f"target sums to {total!r}, not 1")
        for bits in self.target:
            if len(bits) != self.n_qubits or set(bits) - {"0", "1"}:
                raise ValueError(f"bad target bitstring {bits!r} for {self.n_qubits} qubits")


def _rotation_triple(qubit: int, angles: Sequence[float | str]) -> list[Gate]:
    a, b, c = angles
    return [rz(qubit, a), ry(qubit, b), rz(qubit, c)]


def ddcl_circuit_template(n_qubits: int, n_layers: int) -> Circuit:
    """Parameterized circuit with angles named t0.. in gate order.

    Bell-pair initialization (H + CNOT on each neighboring pair), then per
    layer: a rotation triple on every qubit, a CNOT ladder, and a second
    round of rotation triples.
    """
    count = ddcl_parameter_count(n_qubits, n_layers)
    params = [f"t{i}" for i in range(count)]
    gates: list[Gate] = []
    for i in range(n_qubits // 2):
        gates.append(h(2 * i))
        gates.append(cnot(2 * i, 2 * i + 1))
    cursor = 0
    for _ in range(n_layers):
        for q in range(n_qubits):
            gates += _rotation_triple(q, params[cursor:cursor + 3])
            cursor += 3
        for q in range(n_qubits - 1):
            gates.append(cnot(q, q + 1))
        for q in range(n_qubits):
            gates += _rotation_triple(q, params[cursor:cursor + 3])
            cursor += 3
    return Circuit(n_qubits, tuple(gates), name="ddcl", params=tuple(params))


def ddcl_circuit(spec: DdclSpec) -> Circuit:
    """Bound circuit for one spec."""
    return bind(ddcl_circuit_template(spec.n_qubits, spec.n_layers), spec.theta)


def ddcl_distribution(spec: DdclSpec) -> dict[str, float]:
    """Exact output distribution at the workload's angles (no pool, no sampling)."""
    state = allocate(spec.n_qubits)
    run_gates(state, ddcl_circuit(spec).gates)
    return born_distribution(state)


def random_target_distribution(n_qubits: int, seed: int) -> dict[str, float]:
    """Seeded random target over the lexicographically first
    2^min(n, 10) bitstrings (support capping keeps large registers cheap)."""
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be positive, got {n_qubits}")
    support = 1 << min(n_qubits, MAX_TARGET_SUPPORT_QUBITS)
    rng = np.random.Generator(np.random.PCG64(seed))
    weights = rng.uniform(0.0, 1.0, size=support)
    weights /= weights.sum()
    fmt = f"{{:0{n_qubits}b}}"
    return {fmt.format(i): float(w) for i, w in enumerate(weights)}


def dump_target_distribution(target: Mapping[str, float]) -> str:
    """Serialize as `bitstring probability` lines, sorted by bitstring."""
    return "".join(f"{bits} {float(target[bits])!r}\n" for bits in sorted(target))


def load_target_distribution(text: str) -> dict[str, float]:
    """Parse `bitstring probability` lines; `#` starts a comment."""
    target: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2 or set(tokens[0]) - {"0", "1"}:
            raise ValueError(f"line {lineno}: expected `bitstring probability`, got {raw!r}")
        if tokens[0] in target:
            raise ValueError(f"line {lineno}: duplicate bitstring {tokens[0]!r}")
        weight = float(tokens[1])
        if not weight > 0.0:
            raise ValueError(f"line {lineno}: probability must be positive, got {weight!r}")
        target[tokens[0]] = weight
    if not target:
        raise ValueError("empty target distribution")
    total = math.fsum(target.values())
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise ValueError(f"target probabilities sum to {total!r}, expected 1")
    return target


def _child_distribution(child: ChildResult) -> dict[str, float]:
    if child.distribution is not None:
        return child.distribution
    if not child.counts:
        raise ValueError(f"child {child.name!r} carries no distribution or counts")
    return {bits: tally / child.shots for bits, tally in child.counts.items()}


def ddcl_gradient(
    spec: DdclSpec,
    config: VqpuPoolConfig,
    backend_factory: Callable[[], Accelerator] = StatevectorBackend,
    buffer: ResultBuffer | None = None,
) -> GradientReport:
    """JS-loss gradient estimate: half the loss difference at theta_k +- pi/2.

    In counts mode each shifted distribution is estimated from `shots`
    samples under per-circuit seeds; in expectation mode the exact output
    distributions are used.  Passing a `buffer` exposes the raw
    per-circuit children to the caller.
    """
    template = ddcl_circuit_template(spec.n_qubits, spec.n_layers)
    batch = [
        replace(bound, name=f"k{k}{tag}")
        for k, tag, bound in shifted_circuits(template, spec.theta)
    ]
    pool_config = replace(config, shots=spec.shots)
    if buffer is None:
        buffer = ResultBuffer(n_qubits=spec.n_qubits)
    first_child = len(buffer.children)
    elapsed = execute_parallel(buffer, batch, pool_config, backend_factory)

    losses = [js_divergence(spec.target, _child_distribution(c)) for c in buffer.children[first_child:]]
    gradient = tuple(
        0.5 * (losses[2 * k] - losses[2 * k + 1])
        for k in range(len(spec.theta))
    )
    return GradientReport(gradient, len(batch), elapsed)

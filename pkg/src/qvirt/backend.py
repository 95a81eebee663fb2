"""Dense statevector execution of circuits.

A state on n qubits is the full 2**n complex amplitude array (memory grows
exponentially; `MAX_QUBITS` guards against accidental huge allocations).
Gates update amplitudes in place through the compiled kernels.

`StatevectorBackend.execute` runs a batch serially into a result buffer,
one child per circuit in order.  Modes:

  - "expectation": no sampling.  A circuit with an observable attached gets
    the exact expectation value; one without gets the exact outcome
    distribution.
  - "counts": sample bitstrings.  A circuit with an observable is first
    rotated into its measurement basis.  The sampling seed for the circuit
    at global batch index g is seed + g, which makes results independent
    of how a batch is split across executors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Protocol, Sequence

import numpy as np

from . import kernels
from .buffers import ChildResult, ResultBuffer
from .circuits import Circuit, Gate, GateKind
from .pauli import Observable, PauliTerm, measurement_basis_circuit

MAX_QUBITS = 30

MODES = ("expectation", "counts")


class ExecutionError(RuntimeError):
    """A circuit failed during batch execution; the batch is abandoned."""

    def __init__(self, circuit_name: str, message: str):
        super().__init__(f"circuit {circuit_name!r}: {message}")
        self.circuit_name = circuit_name


@dataclass
class StateVector:
    """Mutable amplitudes for one register, qubit 0 the most significant bit."""

    n_qubits: int
    amplitudes: np.ndarray

    def norm_squared(self) -> float:
        out = np.empty(self.amplitudes.shape[0], dtype=np.float64)
        kernels.born_probabilities(self.amplitudes, out)
        return float(out.sum())


def allocate(n_qubits: int) -> StateVector:
    """Fresh register in the all-zeros basis state."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def apply(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate in place.  MeasureAll is a no-op here; sampling reads
    the final amplitudes."""
    if gate.is_parameterized:
        raise ValueError(f"unbound parameter {gate.angle!r}; bind before executing")
    a, n = state.amplitudes, state.n_qubits
    kind = gate.kind
    if kind is GateKind.H:
        kernels.apply_h(a, n, gate.targets[0])
    elif kind is GateKind.X:
        kernels.apply_x(a, n, gate.targets[0])
    elif kind is GateKind.RY:
        kernels.apply_ry(a, n, gate.targets[0], gate.angle)
    elif kind is GateKind.RZ:
        kernels.apply_rz(a, n, gate.targets[0], gate.angle)
    elif kind is GateKind.CNOT:
        kernels.apply_cnot(a, n, gate.targets[0], gate.targets[1])
    elif kind is not GateKind.MEASURE_ALL:
        raise ValueError(f"unsupported gate {kind.value}")
    return state


def run_gates(state: StateVector, gates: Iterable[Gate]) -> StateVector:
    for gate in gates:
        apply(state, gate)
    return state


def expectation(state: StateVector, observable: PauliTerm | Observable) -> float:
    """Exact expectation value of a Pauli term or weighted sum."""
    if isinstance(observable, PauliTerm):
        return observable.coefficient * _term_expectation(state, observable)
    total = observable.constant
    for term in observable.terms:
        total += term.coefficient * _term_expectation(state, term)
    return total


def _term_expectation(state: StateVector, term: PauliTerm) -> float:
    n = state.n_qubits
    if term.min_qubits > n:
        raise ValueError(f"term on qubit {term.min_qubits - 1} exceeds {n} qubits")
    xmask = ymask = zmask = 0
    ny = 0
    for q, letter in term.factors:
        bit = 1 << (n - 1 - q)
        if letter == "X":
            xmask |= bit
        elif letter == "Y":
            ymask |= bit
            ny += 1
        else:
            zmask |= bit
    return kernels.pauli_expectation(state.amplitudes, n, xmask, ymask, zmask, ny)


def _probabilities(state: StateVector) -> np.ndarray:
    probs = np.empty(state.amplitudes.shape[0], dtype=np.float64)
    kernels.born_probabilities(state.amplitudes, probs)
    total = probs.sum()
    if not total > 0.0:
        raise ValueError("state has zero norm")
    probs /= total
    return probs


def born_distribution(state: StateVector) -> dict[str, float]:
    """Exact outcome distribution over bitstrings with nonzero probability."""
    n = state.n_qubits
    probs = _probabilities(state)
    fmt = f"{{:0{n}b}}"
    return {fmt.format(i): float(p) for i, p in enumerate(probs) if p > 0.0}


def sample(state: StateVector, shots: int, seed: int) -> dict[str, int]:
    """Draw measurement outcomes via inverse-CDF lookup on PCG64 uniforms.

    Uniform doubles are a stable primitive of the generator, so a given
    (state, shots, seed) reproduces exactly across platforms and numpy
    versions, unlike higher-level distribution methods.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    probs = _probabilities(state)
    edges = np.cumsum(probs)
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = np.searchsorted(edges, rng.random(shots), side="right")
    draws = np.minimum(draws, probs.shape[0] - 1)
    hits = np.bincount(draws, minlength=probs.shape[0])
    n = state.n_qubits
    fmt = f"{{:0{n}b}}"
    return {fmt.format(i): int(c) for i, c in enumerate(hits) if c}


@dataclass(frozen=True)
class ExecutionConfig:
    """How a backend runs one batch.

    `first_global_index` is the batch-wide index of the first circuit
    handed to this executor; per-circuit sampling seeds are relative to it.
    """

    mode: str = "expectation"
    shots: int = 8192
    seed: int = 0
    first_global_index: int = 0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.shots < 1:
            raise ValueError(f"shots must be positive, got {self.shots}")
        if self.first_global_index < 0:
            raise ValueError("first_global_index must be nonnegative")


class Accelerator(Protocol):
    """Anything that can run circuit batches into a result buffer."""

    def execute(self, buffer: ResultBuffer, circuits: Sequence[Circuit], config: ExecutionConfig) -> None:
        ...


@dataclass
class StatevectorBackend:
    """Serial dense-simulation executor.

    Stateless between circuits; each instance may be driven from its own
    thread.  `gate_counter` tallies applied gates for instrumentation.
    """

    gate_counter: int = field(default=0)

    def execute(self, buffer: ResultBuffer, circuits: Sequence[Circuit], config: ExecutionConfig) -> None:
        for offset, circuit in enumerate(circuits):
            if circuit.n_qubits != buffer.n_qubits:
                raise ExecutionError(circuit.name, f"circuit has {circuit.n_qubits} qubits, buffer {buffer.n_qubits}")
            global_index = config.first_global_index + offset
            try:
                child = self._run_one(circuit, config, global_index)
            except ExecutionError:
                raise
            except Exception as exc:
                raise ExecutionError(circuit.name, str(exc)) from exc
            buffer.append_child(child)

    def _run_one(self, circuit: Circuit, config: ExecutionConfig, global_index: int) -> ChildResult:
        state = allocate(circuit.n_qubits)
        run_gates(state, circuit.gates)
        self.gate_counter += len(circuit.gates)
        if config.mode == "expectation":
            if circuit.observable is None:
                return ChildResult(name=circuit.name, distribution=born_distribution(state))
            return ChildResult(name=circuit.name, expectation=expectation(state, circuit.observable))
        if circuit.observable is not None:
            if not isinstance(circuit.observable, PauliTerm):
                raise ValueError("counts mode measures one Pauli term per circuit")
            basis = measurement_basis_circuit(circuit.observable, circuit.n_qubits)
            run_gates(state, basis.gates)
            self.gate_counter += len(basis.gates)
        counts = sample(state, config.shots, config.seed + global_index)
        return ChildResult(name=circuit.name, counts=counts, shots=config.shots)

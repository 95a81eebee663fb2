"""MC-VQE workload: contracted-reference ansatz and its shift-rule gradient.

The ansatz prepares a normalized superposition over Hamming-weight-1 basis
states (a generalized W state carrying the CIS reference amplitudes), then
applies a chain of two-qubit entanglers on pairs (0,1), (1,2), ...,
(n-2, n-1).  Each entangler is three Ry pairs interleaved with two CNOTs;
because consecutive entanglers share a qubit, the leading Ry of every
entangler after the first folds into its predecessor's trailing Ry, leaving
5n - 4 distinct angles.

The gradient of the chain-Hamiltonian energy is evaluated by the parameter
shift rule: one circuit per (shifted parameter vector, Hamiltonian term)
pair, 2 * (6n - 4) * (5n - 4) executions per update, all submitted to the
virtual QPU pool as a single batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .backend import Accelerator, StatevectorBackend, allocate, expectation, run_gates
from .buffers import ResultBuffer
from .circuits import Circuit, Gate, bind, cnot, ry, x
from .gradients import GradientReport, shifted_circuits
from .pauli import Observable, expectation_from_counts, measurable_term_count
from .pool import VqpuPoolConfig, execute_parallel

UNIT_NORM_TOLERANCE = 1e-12


def mcvqe_parameter_count(n_monomers: int) -> int:
    """Distinct entangler angles after chain merging: 5n - 4."""
    if n_monomers < 2:
        raise ValueError("need at least two monomers")
    return 5 * n_monomers - 4


def mcvqe_execution_count(n_monomers: int) -> int:
    """Circuits per gradient update: 2 terms-times-parameters products."""
    return 2 * measurable_term_count(n_monomers) * mcvqe_parameter_count(n_monomers)


@dataclass(frozen=True)
class McvqeAnsatzSpec:
    """Inputs for one ansatz instance: reference amplitudes plus entangler angles."""

    cis_amplitudes: tuple[float, ...]
    theta: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cis_amplitudes", tuple(float(a) for a in self.cis_amplitudes))
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        n = len(self.cis_amplitudes)
        if n < 2:
            raise ValueError("need at least two monomers")
        norm = math.sqrt(sum(a * a for a in self.cis_amplitudes))
        if abs(norm - 1.0) > UNIT_NORM_TOLERANCE:
            raise ValueError(f"reference amplitudes have norm {norm!r}, want 1")
        want = mcvqe_parameter_count(n)
        if len(self.theta) != want:
            raise ValueError(f"expected {want} angles for {n} monomers, got {len(self.theta)}")

    @property
    def n_monomers(self) -> int:
        return len(self.cis_amplitudes)


def w_state_prep(cis_amplitudes: Sequence[float]) -> Circuit:
    """Circuit sending |0...0> to sum_k a_k |e_k>, e_k the weight-1 state
    with qubit k set.

    Built from an X on qubit 0 followed by a cascade of controlled
    rotations (each decomposed into two Ry and two CNOT) that peel off one
    signed amplitude per step.  Signs are exact; for a single site only the
    magnitude is representable, so a = [1] compiles to a bare X.
    """
    a = [float(v) for v in cis_amplitudes]
    n = len(a)
    if n < 1:
        raise ValueError("need at least one amplitude")
    norm = math.sqrt(sum(v * v for v in a))
    if abs(norm - 1.0) > UNIT_NORM_TOLERANCE:
        raise ValueError(f"amplitudes have norm {norm!r}, want 1")
    gates: list[Gate] = [x(0)]
    if n == 1:
        return Circuit(1, tuple(gates), name="w-prep")
    # residual[k] = norm of the amplitude tail a[k:], the weight still to
    # be distributed when step k runs
    residual = [0.0] * (n + 1)
    for k in range(n - 1, -1, -1):
        residual[k] = math.hypot(a[k], residual[k + 1])
    for k in range(1, n):
        if k < n - 1:
            half = math.atan2(residual[k], a[k - 1])
        else:
            half = math.atan2(a[n - 1], a[n - 2])
        # controlled-Ry(2*half) with control k-1, target k
        gates.append(ry(k, half))
        gates.append(cnot(k - 1, k))
        gates.append(ry(k, -half))
        gates.append(cnot(k - 1, k))
        gates.append(cnot(k, k - 1))
    return Circuit(n, tuple(gates), name="w-prep")


def entangler_gates(a: int, b: int, angles: Sequence[float | str]) -> list[Gate]:
    """One two-qubit entangler on (a, b): Ry pair, CNOT, Ry pair, CNOT, Ry pair."""
    p = list(angles)
    if len(p) != 6:
        raise ValueError(f"entangler takes 6 angles, got {len(p)}")
    return [
        ry(a, p[0]), ry(b, p[1]),
        cnot(a, b),
        ry(a, p[2]), ry(b, p[3]),
        cnot(a, b),
        ry(a, p[4]), ry(b, p[5]),
    ]


def mcvqe_ansatz_template(cis_amplitudes: Sequence[float]) -> Circuit:
    """Parameterized ansatz with merged angles named t0..t{5n-5}.

    The first entangler contributes six parameters; every later one
    contributes five, its leading shared-qubit Ry having been folded into
    the previous entangler's trailing Ry.
    """
    n = len(cis_amplitudes)
    if n < 2:
        raise ValueError("need at least two monomers")
    prep = w_state_prep(cis_amplitudes)
    params = [f"t{i}" for i in range(mcvqe_parameter_count(n))]
    gates = list(prep.gates)
    gates += entangler_gates(0, 1, params[:6])
    for j in range(1, n - 1):
        a, b = j, j + 1
        base = 6 + 5 * (j - 1)
        q = params[base:base + 5]
        gates += [
            ry(b, q[0]),
            cnot(a, b),
            ry(a, q[1]), ry(b, q[2]),
            cnot(a, b),
            ry(a, q[3]), ry(b, q[4]),
        ]
    return Circuit(n, tuple(gates), name="mcvqe-ansatz", params=tuple(params))


def mcvqe_ansatz(spec: McvqeAnsatzSpec) -> Circuit:
    """Bound ansatz for one spec."""
    return bind(mcvqe_ansatz_template(spec.cis_amplitudes), spec.theta)


def mcvqe_raw_ansatz(cis_amplitudes: Sequence[float], phi: Sequence[float]) -> Circuit:
    """Unmerged ansatz taking six angles per entangler (6(n-1) total).

    Merging its adjacent Ry pairs reproduces the 5n - 4 angle template;
    kept as the ground truth the merged form is tested against.
    """
    n = len(cis_amplitudes)
    phi = [float(v) for v in phi]
    if len(phi) != 6 * (n - 1):
        raise ValueError(f"expected {6 * (n - 1)} angles, got {len(phi)}")
    gates = list(w_state_prep(cis_amplitudes).gates)
    for j in range(n - 1):
        gates += entangler_gates(j, j + 1, phi[6 * j:6 * j + 6])
    return Circuit(n, tuple(gates), name="mcvqe-ansatz-raw")


def random_cis_amplitudes(n_monomers: int, seed: int) -> tuple[float, ...]:
    """Seeded random unit vector of reference amplitudes."""
    rng = np.random.Generator(np.random.PCG64(seed))
    v = rng.normal(size=n_monomers)
    v /= np.linalg.norm(v)
    return tuple(float(a) for a in v)


def random_angles(count: int, seed: int) -> tuple[float, ...]:
    """Seeded angles uniform over [-pi, pi)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return tuple(float(t) for t in rng.uniform(-math.pi, math.pi, size=count))


def mcvqe_energy(hamiltonian: Observable, spec: McvqeAnsatzSpec) -> float:
    """Exact ansatz energy via direct statevector expectation (no pool)."""
    state = allocate(spec.n_monomers)
    run_gates(state, mcvqe_ansatz(spec).gates)
    return expectation(state, hamiltonian)


def mcvqe_gradient_batch(hamiltonian: Observable, spec: McvqeAnsatzSpec) -> list[Circuit]:
    """One circuit per (shifted parameter vector, Hamiltonian term) pair.

    Child order is parameter-major, then +/- shift, then term order; each
    circuit carries its bare (coefficient-1) term so executors estimate
    plain <P>, with coefficients applied at assembly time.
    """
    template = mcvqe_ansatz_template(spec.cis_amplitudes)
    batch: list[Circuit] = []
    for k, tag, bound in shifted_circuits(template, spec.theta):
        for term in hamiltonian.terms:
            batch.append(replace(
                bound,
                name=f"k{k}{tag} {term.factors_text()}",
                observable=replace(term, coefficient=1.0),
            ))
    return batch


def mcvqe_gradient(
    hamiltonian: Observable,
    spec: McvqeAnsatzSpec,
    config: VqpuPoolConfig,
    backend_factory: Callable[[], Accelerator] = StatevectorBackend,
    buffer: ResultBuffer | None = None,
) -> GradientReport:
    """Energy gradient by the parameter-shift rule, executed through the pool.

    gradient_k = (E(theta_k + pi/2) - E(theta_k - pi/2)) / 2 with
    E = constant + sum_i c_i <P_i>.  In counts mode each <P_i> is estimated
    from sampled bitstrings after the term's basis change.  Passing a
    `buffer` exposes the raw per-circuit children to the caller.
    """
    n = spec.n_monomers
    if hamiltonian.min_qubits > n:
        raise ValueError(f"hamiltonian acts on {hamiltonian.min_qubits} qubits, register has {n}")
    batch = mcvqe_gradient_batch(hamiltonian, spec)
    if buffer is None:
        buffer = ResultBuffer(n_qubits=n)
    first_child = len(buffer.children)
    elapsed = execute_parallel(buffer, batch, config, backend_factory)

    terms = hamiltonian.terms
    n_terms = len(terms)
    values = np.empty(len(batch))
    for i, child in enumerate(buffer.children[first_child:]):
        if child.expectation is not None:
            values[i] = child.expectation
        else:
            values[i] = expectation_from_counts(child.counts, terms[i % n_terms])
    coefficients = np.array([t.coefficient for t in terms])
    energies = hamiltonian.constant + values.reshape(-1, 2, n_terms) @ coefficients
    gradient = 0.5 * (energies[:, 0] - energies[:, 1])
    return GradientReport(tuple(float(g) for g in gradient), len(batch), elapsed)

"""Parallel quantum-circuit execution over a pool of virtual QPUs.

Batches of circuits are partitioned across workers that each own a private
statevector simulator; results consolidate into one buffer with the exact
content serial execution would produce.  Ships two gradient-heavy
workloads (a contracted-reference VQE over a chain Hamiltonian, and
Born-machine circuit learning against a target distribution) plus a
benchmarking CLI.
"""

from __future__ import annotations

from .backend import (
    Accelerator,
    ExecutionConfig,
    ExecutionError,
    StatevectorBackend,
    StateVector,
    allocate,
    apply,
    born_distribution,
    expectation,
    run_gates,
    sample,
)
from .buffers import ChildResult, ResultBuffer, deserialize, merge, serialize
from .circuits import (
    Circuit,
    Gate,
    GateKind,
    ParameterVector,
    bind,
    cnot,
    h,
    measure_all,
    merge_adjacent_ry,
    ry,
    rz,
    x,
)
from .ddcl import (
    DdclSpec,
    ddcl_circuit,
    ddcl_circuit_template,
    ddcl_distribution,
    ddcl_execution_count,
    ddcl_gradient,
    ddcl_parameter_count,
    dump_target_distribution,
    js_divergence,
    load_target_distribution,
    random_target_distribution,
)
from .gradients import GradientReport, central_difference, shifted_circuits
from .mcvqe import (
    McvqeAnsatzSpec,
    mcvqe_ansatz,
    mcvqe_ansatz_template,
    mcvqe_energy,
    mcvqe_execution_count,
    mcvqe_gradient,
    mcvqe_gradient_batch,
    mcvqe_parameter_count,
    mcvqe_raw_ansatz,
    random_angles,
    random_cis_amplitudes,
    w_state_prep,
)
from .pauli import (
    AiemCoefficients,
    Observable,
    PauliTerm,
    aiem_hamiltonian,
    combine,
    dump_aiem_coefficients,
    expectation_from_counts,
    load_aiem_coefficients,
    measurable_term_count,
    measurement_basis_circuit,
    parse_pauli,
    pauli,
    random_aiem_coefficients,
)
from .pool import Block, VqpuPoolConfig, consolidate, execute_parallel, partition

__version__ = "0.1.0"

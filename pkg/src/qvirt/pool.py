"""Virtual QPU pool: split one batch across parallel execution units.

The pool virtualizes a single simulator into `n_virtual_qpus` workers.
Circuits are assigned by contiguous block partitioning: the first
n_circuits mod n_vqpus blocks get one extra circuit, so block sizes differ
by at most one.  Each worker runs its block on a private backend instance
into a private local buffer; afterwards the local buffers are consolidated
into the caller's buffer in global batch order.

Serial equivalence: executing a batch through the pool yields exactly the
children a plain serial `StatevectorBackend.execute` would, for every
worker count.  This holds because workers share nothing, consolidation
restores batch order, and sampling seeds derive from global circuit
indices rather than worker-local ones.

Workers are threads; the statevector kernels release the interpreter lock,
so blocks make real concurrent progress on multi-core hosts.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .backend import MODES, Accelerator, ExecutionConfig, StatevectorBackend
from .buffers import ChildResult, ResultBuffer, merge
from .circuits import Circuit


@dataclass(frozen=True)
class VqpuPoolConfig:
    """Pool-level run settings; per-worker configs are derived from these."""

    n_virtual_qpus: int = 1
    mode: str = "expectation"
    shots: int = 8192
    base_seed: int = 0

    def __post_init__(self) -> None:
        if self.n_virtual_qpus < 1:
            raise ValueError(f"n_virtual_qpus must be positive, got {self.n_virtual_qpus}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.shots < 1:
            raise ValueError(f"shots must be positive, got {self.shots}")


@dataclass(frozen=True)
class Block:
    """One worker's contiguous slice [start, end) of the batch."""

    vqpu_id: int
    start: int
    end: int

    @property
    def size(self) -> int:
        return self.end - self.start


def partition(n_circuits: int, n_vqpus: int) -> list[Block]:
    """Contiguous block assignment; sizes differ by at most one, big blocks first."""
    if n_circuits < 0:
        raise ValueError(f"n_circuits must be nonnegative, got {n_circuits}")
    if n_vqpus < 1:
        raise ValueError(f"n_vqpus must be positive, got {n_vqpus}")
    base, extra = divmod(n_circuits, n_vqpus)
    blocks = []
    start = 0
    for vqpu_id in range(n_vqpus):
        size = base + (1 if vqpu_id < extra else 0)
        blocks.append(Block(vqpu_id, start, start + size))
        start += size
    return blocks


def consolidate(tagged_locals: Sequence[tuple[tuple[int, int], ResultBuffer]]) -> list[ChildResult]:
    """Flatten per-worker buffers into one child list in global batch order."""
    if not tagged_locals:
        raise ValueError("nothing to consolidate")
    scratch = ResultBuffer(n_qubits=tagged_locals[0][1].n_qubits)
    merge(scratch, tagged_locals)
    return list(scratch.children)


def execute_parallel(
    buffer: ResultBuffer,
    circuits: Sequence[Circuit],
    config: VqpuPoolConfig,
    backend_factory: Callable[[], Accelerator] = StatevectorBackend,
) -> float:
    """Run a batch across the pool into `buffer`; returns the wall time.

    Each nonempty block gets its own backend from `backend_factory` and its
    own thread.  On any circuit failure the whole batch aborts with
    `ExecutionError` and `buffer` is left untouched.
    """
    if not circuits:
        raise ValueError("empty batch")
    names = [c.name for c in circuits]
    if len(set(names)) != len(names):
        raise ValueError("duplicate circuit names in batch")
    for circuit in circuits:
        if circuit.n_qubits != buffer.n_qubits:
            raise ValueError(f"circuit {circuit.name!r} has {circuit.n_qubits} qubits, buffer {buffer.n_qubits}")
        if circuit.is_parameterized:
            raise ValueError(f"circuit {circuit.name!r} has unbound parameters")

    blocks = [b for b in partition(len(circuits), config.n_virtual_qpus) if b.size]

    def run_block(block: Block) -> tuple[tuple[int, int], ResultBuffer]:
        backend = backend_factory()
        local = ResultBuffer(n_qubits=buffer.n_qubits)
        local.metadata["vqpu_id"] = block.vqpu_id
        worker_config = ExecutionConfig(
            mode=config.mode,
            shots=config.shots,
            seed=config.base_seed,
            first_global_index=block.start,
        )
        backend.execute(local, circuits[block.start:block.end], worker_config)
        return (block.start, block.end), local

    started = time.perf_counter()
    if len(blocks) == 1:
        tagged = [run_block(blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as workers:
            futures = [workers.submit(run_block, b) for b in blocks]
            tagged = [f.result() for f in futures]
    elapsed = time.perf_counter() - started

    for child in consolidate(tagged):
        buffer.append_child(child)
    buffer.metadata["vqpu_count"] = config.n_virtual_qpus
    return elapsed

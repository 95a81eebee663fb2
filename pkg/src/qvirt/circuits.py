"""Gate-level circuit representation.

Circuits are immutable descriptions of what to run: a qubit count, a gate
sequence, and an ordered list of free parameter names.  Angles are radians.
A gate angle is either a float literal or the name of a parameter declared
on the circuit; `bind` substitutes values positionally.

Qubit indices follow the bitstring convention used everywhere in this
package: character position i of a measured bitstring is qubit i, and
qubit 0 is the most significant bit of a statevector index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from .pauli import Observable, PauliTerm

# Angles bind positionally from a plain float sequence.
ParameterVector = Sequence[float]


class GateKind(Enum):
    H = "h"
    X = "x"
    CNOT = "cnot"
    RY = "ry"
    RZ = "rz"
    MEASURE_ALL = "measure_all"


_ROTATIONS = frozenset({GateKind.RY, GateKind.RZ})
_TARGET_COUNT = {
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.CNOT: 2,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.MEASURE_ALL: 0,
}


@dataclass(frozen=True)
class Gate:
    """One instruction: a kind, target qubits, and an optional angle.

    `angle` is a float (literal radians) or a str (parameter name); it must
    be present exactly for Ry/Rz.  MeasureAll takes no targets and acts on
    every qubit.
    """

    kind: GateKind
    targets: tuple[int, ...] = ()
    angle: float | str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(self.targets))
        want = _TARGET_COUNT[self.kind]
        if len(self.targets) != want:
            raise ValueError(f"{self.kind.value} takes {want} target(s), got {self.targets}")
        if any(q < 0 for q in self.targets):
            raise ValueError(f"negative qubit index in {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"repeated qubit index in {self.targets}")
        if self.kind in _ROTATIONS:
            if self.angle is None:
                raise ValueError(f"{self.kind.value} requires an angle")
            if not isinstance(self.angle, str):
                object.__setattr__(self, "angle", float(self.angle))
                if not math.isfinite(self.angle):
                    raise ValueError(f"non-finite angle {self.angle}")
        elif self.angle is not None:
            raise ValueError(f"{self.kind.value} takes no angle")

    @property
    def is_parameterized(self) -> bool:
        return isinstance(self.angle, str)

    def touches(self, qubit: int) -> bool:
        """True if this gate acts on `qubit` (MeasureAll acts on all)."""
        return self.kind is GateKind.MEASURE_ALL or qubit in self.targets


def h(qubit: int) -> Gate:
    return Gate(GateKind.H, (qubit,))


def x(qubit: int) -> Gate:
    return Gate(GateKind.X, (qubit,))


def cnot(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, (control, target))


def ry(qubit: int, angle: float | str) -> Gate:
    return Gate(GateKind.RY, (qubit,), angle)


def rz(qubit: int, angle: float | str) -> Gate:
    return Gate(GateKind.RZ, (qubit,), angle)


def measure_all() -> Gate:
    return Gate(GateKind.MEASURE_ALL)


@dataclass(frozen=True)
class Circuit:
    """An immutable gate sequence on `n_qubits` qubits.

    `params` declares the free parameter names, in binding order.  Every
    str angle in `gates` must appear in `params`.  `observable` optionally
    names the quantity the run should estimate; executors that sample
    instead rotate into its measurement basis first.
    """

    n_qubits: int
    gates: tuple[Gate, ...] = ()
    name: str = "circuit"
    params: tuple[str, ...] = ()
    observable: "PauliTerm | Observable | None" = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "params", tuple(self.params))
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        if not self.name:
            raise ValueError("circuit name must be nonempty")
        if len(set(self.params)) != len(self.params):
            raise ValueError("duplicate parameter names")
        declared = set(self.params)
        for gate in self.gates:
            for q in gate.targets:
                if q >= self.n_qubits:
                    raise ValueError(f"gate {gate.kind.value} targets qubit {q} on {self.n_qubits} qubits")
            if isinstance(gate.angle, str) and gate.angle not in declared:
                raise ValueError(f"unbound parameter {gate.angle!r}")

    @property
    def is_parameterized(self) -> bool:
        return any(g.is_parameterized for g in self.gates)

    def with_name(self, name: str) -> Circuit:
        return replace(self, name=name)

    def with_observable(self, observable: "PauliTerm | Observable | None") -> Circuit:
        return replace(self, observable=observable)


def bind(circuit: Circuit, theta: ParameterVector) -> Circuit:
    """Substitute parameter values positionally; returns a literal-angle circuit."""
    values = [float(v) for v in theta]
    if len(values) != len(circuit.params):
        raise ValueError(f"expected {len(circuit.params)} parameter values, got {len(values)}")
    table = dict(zip(circuit.params, values))
    gates = tuple(
        replace(g, angle=table[g.angle]) if isinstance(g.angle, str) else g
        for g in circuit.gates
    )
    return replace(circuit, gates=gates, params=())


def merge_adjacent_ry(circuit: Circuit) -> Circuit:
    """Fold runs of Ry on one qubit into single gates by summing angles.

    Two Ry gates merge when only gates touching neither's qubit sit between
    them.  Requires literal angles.  Idempotent; preserves the circuit
    unitary because same-axis rotations compose additively.
    """
    if circuit.is_parameterized:
        raise ValueError("merge requires literal angles; bind first")
    out: list[Gate] = []
    for gate in circuit.gates:
        if gate.kind is GateKind.RY:
            q = gate.targets[0]
            j = len(out) - 1
            while j >= 0 and not out[j].touches(q):
                j -= 1
            if j >= 0 and out[j].kind is GateKind.RY and out[j].targets == gate.targets:
                out[j] = replace(out[j], angle=out[j].angle + gate.angle)
                continue
        out.append(gate)
    return replace(circuit, gates=tuple(out))

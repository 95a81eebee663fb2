import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qvirt import Circuit, Gate, GateKind, bind, cnot, h, measure_all, merge_adjacent_ry, ry, rz, x

import oracles


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate(GateKind.CNOT, (1, 1))
    with pytest.raises(ValueError):
        Gate(GateKind.CNOT, (0,))
    with pytest.raises(ValueError):
        Gate(GateKind.RY, (0,))
    with pytest.raises(ValueError):
        Gate(GateKind.H, (0,), 0.5)
    with pytest.raises(ValueError):
        Gate(GateKind.X, (-1,))
    with pytest.raises(ValueError):
        Gate(GateKind.MEASURE_ALL, (0,))
    with pytest.raises(ValueError):
        ry(0, float("nan"))


def test_circuit_validation():
    with pytest.raises(ValueError):
        Circuit(0, ())
    with pytest.raises(ValueError):
        Circuit(2, (x(2),))
    with pytest.raises(ValueError):
        Circuit(2, (ry(0, "a"),))
    with pytest.raises(ValueError):
        Circuit(2, (ry(0, "a"),), params=("a", "a"))
    with pytest.raises(ValueError):
        Circuit(2, (), name="")


def test_bind_substitutes_positionally():
    c = Circuit(1, (ry(0, "a"), rz(0, "b")), params=("a", "b"), name="two")
    bound = bind(c, [0.3, 0.7])
    assert [g.angle for g in bound.gates] == [0.3, 0.7]
    assert bound.params == ()
    assert bound.name == "two"
    assert not bound.is_parameterized


def test_bind_identity_substitution():
    c = Circuit(1, (ry(0, "t"),), params=("t",))
    assert bind(c, [0.0]).gates[0].angle == 0.0


def test_bind_length_mismatch():
    c = Circuit(1, (ry(0, "a"), ry(0, "b")), params=("a", "b"))
    with pytest.raises(ValueError):
        bind(c, [0.1, 0.2, 0.3])


def test_merge_sums_adjacent_ry():
    c = Circuit(1, (ry(0, 0.2), ry(0, 0.3)))
    merged = merge_adjacent_ry(c)
    assert len(merged.gates) == 1
    assert merged.gates[0].angle == pytest.approx(0.5)


def test_merge_blocked_by_touching_gate():
    c = Circuit(2, (ry(0, 0.2), cnot(0, 1), ry(0, 0.3)))
    assert merge_adjacent_ry(c).gates == c.gates


def test_merge_skips_untouching_gates():
    c = Circuit(2, (ry(0, 0.2), h(1), ry(0, 0.3)))
    merged = merge_adjacent_ry(c)
    kinds = [g.kind for g in merged.gates]
    assert kinds == [GateKind.RY, GateKind.H]
    assert merged.gates[0].angle == pytest.approx(0.5)


def test_merge_blocked_by_measure_all():
    c = Circuit(2, (ry(0, 0.2), measure_all(), ry(0, 0.3)))
    assert merge_adjacent_ry(c).gates == c.gates


def test_merge_requires_literal_angles():
    c = Circuit(1, (ry(0, "a"),), params=("a",))
    with pytest.raises(ValueError):
        merge_adjacent_ry(c)


@st.composite
def literal_circuits(draw, max_qubits=4, max_gates=12):
    n = draw(st.integers(1, max_qubits))
    rng = np.random.Generator(np.random.PCG64(draw(st.integers(0, 2**31))))
    n_gates = draw(st.integers(0, max_gates))
    return oracles.random_circuit(rng, n, n_gates)


@given(literal_circuits())
@settings(max_examples=60, deadline=None)
def test_merge_preserves_unitary(circuit):
    u0 = oracles.circuit_unitary(circuit)
    u1 = oracles.circuit_unitary(merge_adjacent_ry(circuit))
    assert np.max(np.abs(u0 - u1)) < 1e-10


@given(literal_circuits())
@settings(max_examples=60, deadline=None)
def test_merge_idempotent_and_no_longer(circuit):
    once = merge_adjacent_ry(circuit)
    twice = merge_adjacent_ry(once)
    assert twice.gates == once.gates
    assert len(once.gates) <= len(circuit.gates)

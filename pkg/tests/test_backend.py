import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qvirt import (
    Circuit,
    ExecutionConfig,
    ExecutionError,
    ResultBuffer,
    StatevectorBackend,
    allocate,
    apply,
    born_distribution,
    cnot,
    expectation,
    h,
    pauli,
    run_gates,
    ry,
    sample,
    x,
)

import oracles


def bell_state():
    return run_gates(allocate(2), (h(0), cnot(0, 1)))


def test_allocate_zero_state():
    assert list(allocate(1).amplitudes) == [1, 0]
    assert list(allocate(2).amplitudes) == [1, 0, 0, 0]
    with pytest.raises(ValueError):
        allocate(31)
    with pytest.raises(ValueError):
        allocate(0)


def test_single_gate_actions():
    st_ = apply(allocate(1), h(0))
    assert np.allclose(st_.amplitudes, [2**-0.5, 2**-0.5])
    st_ = apply(allocate(1), ry(0, np.pi))
    assert np.allclose(st_.amplitudes, [0, 1], atol=1e-12)
    st_ = bell_state()
    assert np.allclose(st_.amplitudes, [2**-0.5, 0, 0, 2**-0.5])


def test_apply_rejects_unbound_angle():
    with pytest.raises(ValueError):
        apply(allocate(1), ry(0, "t"))


def test_expectation_basics():
    assert expectation(allocate(1), pauli({0: "Z"})) == pytest.approx(1.0)
    assert expectation(bell_state(), pauli({0: "X", 1: "X"})) == pytest.approx(1.0)
    assert expectation(bell_state(), pauli({0: "Z"})) == pytest.approx(0.0)


def test_expectation_supports_y():
    # real-amplitude states have zero Y expectation
    state = apply(allocate(1), ry(0, np.pi / 2))
    assert expectation(state, pauli({0: "Y"})) == pytest.approx(0.0, abs=1e-12)
    rng = np.random.Generator(np.random.PCG64(12))
    circuit = oracles.random_circuit(rng, 3, 12)
    term = pauli({0: "Y", 2: "Y"}, 0.7)
    got = expectation(run_gates(allocate(3), circuit.gates), term)
    want = oracles.dense_expectation(oracles.circuit_state(circuit), term, 3)
    assert got == pytest.approx(want, abs=1e-10)


def test_random_circuit_expectation_matches_dense_oracle():
    rng = np.random.Generator(np.random.PCG64(42))
    circuit = oracles.random_circuit(rng, 4, 16)
    obs = oracles.random_observable(np.random.Generator(np.random.PCG64(7)), 4, 5)
    state = run_gates(allocate(4), circuit.gates)
    want = oracles.dense_expectation(oracles.circuit_state(circuit), obs, 4)
    assert expectation(state, obs) == pytest.approx(want, abs=1e-10)


@given(st.integers(0, 2**31), st.integers(1, 5), st.integers(0, 25))
@settings(max_examples=60, deadline=None)
def test_state_matches_dense_oracle(seed, n, n_gates):
    rng = np.random.Generator(np.random.PCG64(seed))
    circuit = oracles.random_circuit(rng, n, n_gates)
    got = run_gates(allocate(n), circuit.gates).amplitudes
    assert np.max(np.abs(got - oracles.circuit_state(circuit))) < 1e-10


def test_norm_conserved_over_long_random_circuit():
    rng = np.random.Generator(np.random.PCG64(3))
    circuit = oracles.random_circuit(rng, 10, 10_000)
    state = run_gates(allocate(10), circuit.gates)
    assert abs(state.norm_squared() - 1.0) < 1e-10


def test_sample_deterministic_state():
    assert sample(allocate(1), shots=100, seed=5) == {"0": 100}


def test_sample_reproducible_and_seed_sensitive():
    state = bell_state()
    a = sample(state, shots=2000, seed=9)
    b = sample(state, shots=2000, seed=9)
    c = sample(state, shots=2000, seed=10)
    assert a == b
    assert a != c
    assert set(a) <= {"00", "11"}
    assert sum(a.values()) == 2000


def test_sample_frequency_within_5_sigma():
    state = apply(allocate(1), h(0))
    counts = sample(state, shots=10_000, seed=123)
    sigma = 0.005
    assert abs(counts["0"] / 10_000 - 0.5) < 5 * sigma


def test_born_distribution_exact():
    dist = born_distribution(bell_state())
    assert set(dist) == {"00", "11"}
    assert dist["00"] == pytest.approx(0.5, abs=1e-15)
    assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)


def _named(circuits):
    return [c.with_name(f"c{i}") for i, c in enumerate(circuits)]


def test_execute_one_child_per_circuit_in_order():
    backend = StatevectorBackend()
    buffer = ResultBuffer(n_qubits=2)
    batch = _named([
        Circuit(2, (h(0),), observable=pauli({0: "Z"})),
        Circuit(2, (x(0),), observable=pauli({0: "Z"})),
        Circuit(2, (), observable=pauli({0: "Z"})),
    ])
    backend.execute(buffer, batch, ExecutionConfig())
    assert buffer.child_names() == ["c0", "c1", "c2"]
    assert [c.expectation for c in buffer.children] == pytest.approx([0.0, -1.0, 1.0], abs=1e-12)


def test_execute_bell_expectation():
    buffer = ResultBuffer(n_qubits=2)
    bell = Circuit(2, (h(0), cnot(0, 1)), name="bell", observable=pauli({0: "X", 1: "X"}))
    StatevectorBackend().execute(buffer, [bell], ExecutionConfig(mode="expectation"))
    assert buffer.children[0].expectation == pytest.approx(1.0)


def test_execute_counts_mode_rotates_basis_and_seeds_globally():
    bell = Circuit(2, (h(0), cnot(0, 1)), name="xx", observable=pauli({0: "X", 1: "X"}))
    buffer = ResultBuffer(n_qubits=2)
    StatevectorBackend().execute(buffer, [bell], ExecutionConfig(mode="counts", shots=500, seed=3))
    child = buffer.children[0]
    # Bell state in the XX basis has even parity only
    assert all(b in {"00", "11"} for b in child.counts)
    assert child.shots == 500

    # same circuit at global index 4 must reproduce seed 3 + 4
    shifted = ResultBuffer(n_qubits=2)
    StatevectorBackend().execute(
        shifted, [bell], ExecutionConfig(mode="counts", shots=500, seed=3, first_global_index=4))
    direct = ResultBuffer(n_qubits=2)
    StatevectorBackend().execute(
        direct, [bell], ExecutionConfig(mode="counts", shots=500, seed=7))
    assert shifted.children[0].counts == direct.children[0].counts


def test_execute_without_observable_stores_distribution():
    buffer = ResultBuffer(n_qubits=2)
    StatevectorBackend().execute(
        buffer, [Circuit(2, (h(0), cnot(0, 1)), name="bell")], ExecutionConfig())
    dist = buffer.children[0].distribution
    assert dist is not None and set(dist) == {"00", "11"}


def test_execute_determinism():
    rng = np.random.Generator(np.random.PCG64(8))
    batch = _named([oracles.random_circuit(rng, 3, 8) for _ in range(5)])
    runs = []
    for _ in range(2):
        buffer = ResultBuffer(n_qubits=3)
        StatevectorBackend().execute(buffer, batch, ExecutionConfig(mode="counts", seed=11))
        runs.append([(c.name, c.counts) for c in buffer.children])
    assert runs[0] == runs[1]


def test_execute_failure_names_circuit():
    bad = Circuit(3, (x(2),), name="too-wide")
    buffer = ResultBuffer(n_qubits=2)
    with pytest.raises(ExecutionError, match="too-wide"):
        StatevectorBackend().execute(buffer, [bad], ExecutionConfig())
    assert buffer.children == []

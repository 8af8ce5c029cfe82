import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import S2, X, Y, kron_circuit, random_state
from vqpt.simcore import (
    CapacityError, GateSpec, apply_gate, apply_gates, basis_state, circuit_to_unitary,
    inner_product, unitarity_error,
)

ONE_QUBIT = ["Ry", "Rz", "H", "T", "SqrtX", "SqrtY"]


def random_gates(rng, n, count):
    gates = []
    for _ in range(count):
        kind = rng.choice(ONE_QUBIT + (["CZ"] if n > 1 else []))
        if kind == "CZ":
            gates.append(GateSpec("CZ", tuple(rng.choice(n, 2, replace=False))))
        elif kind in ("Ry", "Rz"):
            gates.append(GateSpec(kind, (rng.integers(n),), angle=rng.uniform(-7, 7)))
        else:
            gates.append(GateSpec(kind, (rng.integers(n),)))
    return gates


def test_ry_pi_flips_zero():
    out = apply_gate(basis_state(1), GateSpec("Ry", (0,), angle=np.pi))
    np.testing.assert_allclose(out, [0, 1], atol=1e-15)


def test_rz_phases_zero():
    theta = 0.731
    out = apply_gate(basis_state(1), GateSpec("Rz", (0,), angle=theta))
    np.testing.assert_allclose(out, [np.exp(-0.5j * theta), 0], atol=1e-15)


def test_cz_sign_on_11_only():
    # qubit 0 is the low bit: |10> means q1=1, q0=0 -> index 2
    state = np.array([0, 0, S2, S2], dtype=complex)
    out = apply_gate(state, GateSpec("CZ", (0, 1)))
    np.testing.assert_allclose(out, [0, 0, S2, -S2], atol=1e-15)


def test_qubit_zero_is_least_significant():
    out = apply_gate(basis_state(3), GateSpec("Ry", (0,), angle=np.pi))
    assert abs(out[1]) == pytest.approx(1.0)


def test_gate_sequence_matches_kronecker_oracle(rng):
    n = 3
    for _ in range(5):
        gates = random_gates(rng, n, 25)
        psi = random_state(rng, n)
        np.testing.assert_allclose(apply_gates(psi, gates), kron_circuit(n, gates) @ psi, atol=1e-12)


def test_target_out_of_range():
    with pytest.raises(IndexError):
        apply_gate(basis_state(2), GateSpec("H", (2,)))
    with pytest.raises(IndexError):
        apply_gate(basis_state(2), GateSpec("CZ", (0, 3)))


@pytest.mark.parametrize("kwargs", [
    dict(kind="CZ", targets=(0, 0)),
    dict(kind="H", targets=(0, 1)),
    dict(kind="Ry", targets=(0,)),
    dict(kind="T", targets=(0,), angle=0.3),
    dict(kind="Rx", targets=(0,), angle=0.3),
])
def test_gate_spec_validation(kwargs):
    with pytest.raises(ValueError):
        GateSpec(**kwargs)


def test_inner_product_basics(rng):
    assert inner_product(basis_state(1, 0), basis_state(1, 0)) == 1
    assert inner_product(basis_state(1, 0), basis_state(1, 1)) == 0
    a, b = random_state(rng, 3), random_state(rng, 3)
    loop = sum(np.conj(a[i]) * b[i] for i in range(len(a)))
    assert abs(inner_product(a, b) - loop) < 1e-14
    with pytest.raises(ValueError):
        inner_product(basis_state(1), basis_state(2))


def test_circuit_to_unitary_examples():
    np.testing.assert_allclose(circuit_to_unitary([], 2), np.eye(4))
    np.testing.assert_allclose(circuit_to_unitary([GateSpec("H", (0,))], 1), S2 * np.array([[1, 1], [1, -1]]),
                               atol=1e-15)
    gates = [GateSpec("H", (0,)), GateSpec("CZ", (0, 1))]
    np.testing.assert_allclose(circuit_to_unitary(gates, 2), kron_circuit(2, gates), atol=1e-12)


def test_circuit_to_unitary_columns_are_images(rng):
    n = 3
    gates = random_gates(rng, n, 30)
    u = circuit_to_unitary(gates, n)
    for k in range(1 << n):
        np.testing.assert_allclose(u[:, k], apply_gates(basis_state(n, k), gates), atol=1e-12)
    for _ in range(100):
        v = random_state(rng, n)
        np.testing.assert_allclose(u @ v, apply_gates(v, gates), atol=1e-12)


def test_capacity_error():
    with pytest.raises(CapacityError):
        circuit_to_unitary([], 13)
    with pytest.raises(CapacityError):
        circuit_to_unitary([], 5, cap=4)


def test_gate_algebra():
    def u(*gates, n=2):
        return circuit_to_unitary(list(gates), n)

    eye = np.eye(4)
    np.testing.assert_allclose(u(GateSpec("CZ", (0, 1)), GateSpec("CZ", (0, 1))), eye, atol=1e-12)
    np.testing.assert_allclose(u(GateSpec("H", (1,)), GateSpec("H", (1,))), eye, atol=1e-12)
    np.testing.assert_allclose(u(*[GateSpec("T", (0,))] * 8), eye, atol=1e-12)
    np.testing.assert_allclose(u(*[GateSpec("SqrtX", (0,))] * 2, n=1), X, atol=1e-12)
    np.testing.assert_allclose(u(*[GateSpec("SqrtY", (0,))] * 2, n=1), Y, atol=1e-12)
    a, b = 0.37, -2.1
    np.testing.assert_allclose(
        u(GateSpec("Rz", (0,), angle=a), GateSpec("Rz", (0,), angle=b), n=3),
        u(GateSpec("Rz", (0,), angle=a + b), n=3), atol=1e-12)


def test_batch_matches_single(rng):
    gates = random_gates(rng, 3, 20)
    states = np.array([random_state(rng, 3) for _ in range(4)])
    batch = apply_gates(states, gates)
    for s, out in zip(states, batch):
        np.testing.assert_allclose(apply_gates(s, gates), out, atol=1e-14)


def test_apply_does_not_mutate_input(rng):
    psi = random_state(rng, 2)
    keep = psi.copy()
    apply_gate(psi, GateSpec("H", (0,)))
    np.testing.assert_array_equal(psi, keep)


def test_norm_preserved_over_1000_gates(rng):
    n = 4
    psi = random_state(rng, n)
    out = apply_gates(psi, random_gates(rng, n, 1000))
    assert abs(np.vdot(out, out).real - 1) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5))
def test_random_circuits_are_unitary(seed, n):
    rng = np.random.default_rng(seed)
    assert unitarity_error(circuit_to_unitary(random_gates(rng, n, 40), n)) <= 1e-10

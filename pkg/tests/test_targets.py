import numpy as np
import pytest
from collections import Counter

from conftest import X, Y, Z, kron_op
from vqpt.simcore import circuit_to_unitary, unitarity_error
from vqpt.targets import (
    RANDOM_GATES, RQCParams, XXZParams, build_random_circuit, build_xxz_hamiltonian, evolve_unitary,
    rqc_target, xxz_target,
)


def kron_xxz(p):
    n = p.n
    h = np.zeros((1 << n, 1 << n), dtype=complex)
    for l in range(n - 1):
        h += p.J * (kron_op(n, {l: X, l + 1: X}) + kron_op(n, {l: Y, l + 1: Y}))
        h += p.Delta * kron_op(n, {l: Z, l + 1: Z})
    for l in range(n):
        h += p.h * kron_op(n, {l: Z})
    return h


def test_two_site_hand_expansion():
    h = build_xxz_hamiltonian(XXZParams(2, J=1, Delta=1, h=0.1))
    assert h[0, 0] == pytest.approx(1.2)
    assert h[3, 3] == pytest.approx(0.8)
    np.testing.assert_allclose(h[1:3, 1:3], [[-1, 2], [2, -1]])
    assert np.count_nonzero(h) == 6


def test_zero_couplings():
    assert not build_xxz_hamiltonian(XXZParams(2, J=0, Delta=0, h=0)).any()


@pytest.mark.parametrize("n", [2, 3, 5])
def test_matches_kronecker_sum(rng, n):
    p = XXZParams(n, J=rng.normal(), Delta=rng.normal(), h=rng.normal())
    h = build_xxz_hamiltonian(p)
    np.testing.assert_allclose(h, kron_xxz(p), atol=1e-12)
    assert np.linalg.norm(h - h.conj().T) <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_conserves_magnetization(n):
    h = build_xxz_hamiltonian(XXZParams(n, Delta=0.7))
    sz = sum(kron_op(n, {l: Z}) for l in range(n))
    assert np.linalg.norm(h @ sz - sz @ h) <= 1e-12


def test_evolution_examples():
    h = build_xxz_hamiltonian(XXZParams(2))
    np.testing.assert_allclose(evolve_unitary(h, 0.0), np.eye(4), atol=1e-14)
    dt = 0.37
    u = evolve_unitary(h, dt)
    np.testing.assert_allclose(u[:, 0], [np.exp(-1.2j * dt), 0, 0, 0], atol=1e-12)
    np.testing.assert_allclose(u @ evolve_unitary(h, -dt), np.eye(4), atol=1e-10)
    assert unitarity_error(u) <= 1e-10


def test_evolution_composes():
    h = build_xxz_hamiltonian(XXZParams(4, Delta=1.3))
    a, b = 0.04, 0.11
    np.testing.assert_allclose(evolve_unitary(h, a) @ evolve_unitary(h, b), evolve_unitary(h, a + b), atol=1e-10)


def test_evolution_matches_scipy_expm():
    from scipy.linalg import expm
    h = build_xxz_hamiltonian(XXZParams(3))
    np.testing.assert_allclose(evolve_unitary(h, 0.15), expm(-0.15j * h), atol=1e-12)


def test_param_validation():
    with pytest.raises(ValueError):
        XXZParams(1)
    with pytest.raises(ValueError):
        XXZParams(3, dt=-0.1)
    with pytest.raises(ValueError):
        RQCParams(4, 0)


def test_random_circuit_layout():
    gates = build_random_circuit(RQCParams(2, 1, seed=5))
    assert len(gates) == 7
    assert [g.kind for g in gates[:2]] == ["H", "H"] and [g.kind for g in gates[-2:]] == ["H", "H"]
    assert gates[2].kind == "CZ" and gates[2].targets == (0, 1)
    assert all(g.kind in RANDOM_GATES for g in gates[3:5])


def test_random_circuit_brick_order():
    gates = build_random_circuit(RQCParams(5, 3, seed=1))
    cz_layers = []
    for g in gates:
        if g.kind == "CZ":
            cz_layers.append(g.targets)
    assert cz_layers == [(0, 1), (2, 3), (1, 2), (3, 4), (0, 1), (2, 3)]


def test_random_circuit_deterministic():
    p = RQCParams(4, 8, seed=123)
    assert build_random_circuit(p) == build_random_circuit(p)
    assert build_random_circuit(p) != build_random_circuit(RQCParams(4, 8, seed=124))


def test_random_gate_choice_uniform():
    gates = build_random_circuit(RQCParams(10, 300, seed=9))
    counts = Counter(g.kind for g in gates if g.kind in RANDOM_GATES)
    total = sum(counts.values())
    assert total == 3000
    for kind in RANDOM_GATES:
        assert abs(counts[kind] / total - 1 / 3) <= 0.05


def test_targets_are_unitary():
    for p in (XXZParams(3, dt=0.15), XXZParams(5, Delta=0.5)):
        assert unitarity_error(xxz_target(p).unitary) <= 1e-10
    t = rqc_target(RQCParams(4, 8, seed=0))
    assert unitarity_error(t.unitary) <= 1e-10
    assert t.provenance() == {"kind": "rqc", "n": 4, "D": 8, "seed": 0}
    np.testing.assert_allclose(t.unitary, circuit_to_unitary(build_random_circuit(RQCParams(4, 8, 0)), 4))

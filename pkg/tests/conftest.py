import sys
from functools import reduce

import numpy as np
import pytest

S2 = 1 / np.sqrt(2)
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)

# reference matrices, written out independently of the package
REF = {
    "H": S2 * np.array([[1, 1], [1, -1]], dtype=complex),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "SqrtX": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
    "SqrtY": 0.5 * np.array([[1 + 1j, -1 - 1j], [1 + 1j, 1 + 1j]]),
}


def ref_matrix(kind, angle=None):
    if kind == "Ry":
        c, s = np.cos(angle / 2), np.sin(angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "Rz":
        return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])
    return REF[kind]


def kron_op(n, site_ops):
    """Full operator from ``{qubit: 2x2}``; qubit 0 is the rightmost Kronecker factor."""
    return reduce(np.kron, [site_ops.get(q, I2) for q in reversed(range(n))])


def kron_gate(n, gate):
    """Dense oracle for one GateSpec, built from Kronecker products only."""
    if gate.kind == "CZ":
        a, b = gate.targets
        p1 = np.diag([0, 1]).astype(complex)
        p0 = np.diag([1, 0]).astype(complex)
        return kron_op(n, {a: p0}) + kron_op(n, {a: p1, b: I2}) @ kron_op(n, {b: Z})
    return kron_op(n, {gate.targets[0]: ref_matrix(gate.kind, gate.angle)})


def kron_circuit(n, gates):
    u = np.eye(1 << n, dtype=complex)
    for g in gates:
        u = kron_gate(n, g) @ u
    return u


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_unitary(rng, dim):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.LINES, key=lambda s: s.split("[", 1)[1]):
        terminalreporter.write_line(line)

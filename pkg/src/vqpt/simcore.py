"""Dense statevector simulation.

States are plain 1-D complex128 arrays of length ``2**n``. Qubit 0 is the
least-significant bit of the amplitude index, so ``|q1 q0>`` with ``q0 = 1``
is index 1. Unitaries are ordinary ``(2**n, 2**n)`` arrays acting on column
vectors: column ``k`` is the image of basis state ``|k>``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels

MAX_QUBITS = 12

GATE_KINDS = {
    "Ry": kernels.RY,
    "Rz": kernels.RZ,
    "H": kernels.H,
    "T": kernels.T,
    "SqrtX": kernels.SQRT_X,
    "SqrtY": kernels.SQRT_Y,
    "CZ": kernels.CZ,
}
ROTATIONS = ("Ry", "Rz")


class CapacityError(ValueError):
    """Requested register is larger than the configured qubit cap."""


def check_capacity(n: int, cap: int = MAX_QUBITS) -> None:
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    if n > cap:
        raise CapacityError(f"{n} qubits exceeds the limit of {cap} (dense 2^n storage)")


@dataclass(frozen=True)
class GateSpec:
    """One gate instance.

    ``angle`` is required for rotations unless ``param`` names a slot of a
    parameter vector that supplies the angle at run time.
    """

    kind: str
    targets: tuple
    angle: Optional[float] = None
    param: Optional[int] = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        arity = 2 if self.kind == "CZ" else 1
        if len(targets) != arity:
            raise ValueError(f"{self.kind} takes {arity} target(s), got {targets}")
        if len(set(targets)) != len(targets):
            raise ValueError(f"repeated qubit in {targets}")
        if any(t < 0 for t in targets):
            raise IndexError(f"negative qubit index in {targets}")
        rotation = self.kind in ROTATIONS
        if not rotation and (self.angle is not None or self.param is not None):
            raise ValueError(f"{self.kind} takes no angle")
        if rotation and self.angle is None and self.param is None:
            raise ValueError(f"{self.kind} needs an angle or a parameter slot")

    def bind(self, theta: Sequence[float]) -> "GateSpec":
        """Substitute the parameter slot with its value from ``theta``."""
        if self.param is None:
            return self
        return GateSpec(self.kind, self.targets, angle=float(theta[self.param]))

    def matrix(self) -> np.ndarray:
        """Local 2x2 (or 4x4 for CZ) matrix, little-endian over ``targets``."""
        if self.kind == "CZ":
            return np.diag([1, 1, 1, -1]).astype(complex)
        if self.angle is None:
            raise ValueError("unbound parameter slot")
        return np.array(kernels.gate_entries(GATE_KINDS[self.kind], self.angle)).reshape(2, 2)


def num_qubits(state: np.ndarray) -> int:
    dim = len(state)
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise ValueError(f"state length {dim} is not a power of two >= 2")
    return n


def basis_state(n: int, index: int = 0) -> np.ndarray:
    check_capacity(n)
    state = np.zeros(1 << n, dtype=complex)
    state[index] = 1.0
    return state


def compile_program(gates: Iterable[GateSpec], n: int):
    """Encode gates as the ``(ops, fixed)`` arrays consumed by :mod:`vqpt.kernels`."""
    gates = list(gates)
    ops = np.zeros((len(gates), 4), dtype=np.int64)
    fixed = np.zeros(len(gates))
    for g, gate in enumerate(gates):
        if max(gate.targets) >= n:
            raise IndexError(f"{gate.kind} on qubit(s) {gate.targets} in a {n}-qubit register")
        q1 = gate.targets[1] if len(gate.targets) == 2 else -1
        slot = -1 if gate.param is None or gate.angle is not None else gate.param
        ops[g] = (GATE_KINDS[gate.kind], gate.targets[0], q1, slot)
        if gate.angle is not None:
            fixed[g] = gate.angle
    return ops, fixed


def apply_gates(states: np.ndarray, gates: Sequence[GateSpec], theta=None) -> np.ndarray:
    """Apply ``gates`` to a single state or a ``(batch, dim)`` stack; returns a new array."""
    out = np.array(states, dtype=np.complex128, order="C", copy=True)
    batch = out.reshape(-1, out.shape[-1])
    ops, fixed = compile_program(gates, num_qubits(batch[0]))
    if (ops[:, 3] >= 0).any() and theta is None:
        raise ValueError("circuit has parameter slots but no theta was given")
    kernels.run_program(batch, ops, fixed, np.zeros(0) if theta is None else theta)
    return out


def apply_gate(state: np.ndarray, gate: GateSpec) -> np.ndarray:
    return apply_gates(state, [gate])


def inner_product(a: np.ndarray, b: np.ndarray) -> complex:
    """<a|b>, conjugating the first argument."""
    if np.shape(a) != np.shape(b):
        raise ValueError(f"dimension mismatch: {np.shape(a)} vs {np.shape(b)}")
    return complex(np.vdot(a, b))


def circuit_to_unitary(gates: Sequence[GateSpec], n: int, theta=None, cap: int = MAX_QUBITS) -> np.ndarray:
    check_capacity(n, cap)
    images = apply_gates(np.eye(1 << n, dtype=complex), gates, theta)
    # row k holds C|k>
    return np.ascontiguousarray(images.T)


def unitarity_error(u: np.ndarray) -> float:
    """Frobenius norm of U^dagger U - I."""
    return float(np.linalg.norm(u.conj().T @ u - np.eye(len(u))))

"""Layered parametric circuit.

Layout: one single-qubit layer, then ``depth`` repetitions of
(entangling layer, single-qubit layer). A single-qubit layer is
Rz, Ry, Rz on every qubit, so there are ``3 n (depth + 1)`` parameters.
Entangling layers are fixed CZ gates chosen by a named pattern.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .simcore import GateSpec, check_capacity, circuit_to_unitary, compile_program


def _brick(n, layer):
    return [(q, q + 1) for q in range(layer % 2, n - 1, 2)]


def _ladder(n, layer):
    return [(q, q + 1) for q in range(n - 1)]


def _brick_wrap(n, layer):
    # brick, but a layer that would be empty (n == 2, odd layer) reuses the pair (0, 1)
    return _brick(n, layer) or [(0, 1)]


PATTERNS = {"brick": _brick, "ladder": _ladder, "brick_wrap": _brick_wrap}


def entangling_pairs(n: int, layer: int, pattern: str = "ladder"):
    try:
        return PATTERNS[pattern](n, layer)
    except KeyError:
        raise ValueError(f"unknown entangling pattern {pattern!r}; choose from {sorted(PATTERNS)}") from None


@dataclass(frozen=True)
class Ansatz:
    num_qubits: int
    depth: int
    pattern: str = "ladder"
    layout: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n, d = self.num_qubits, self.depth
        check_capacity(n)
        if d < 0:
            raise ValueError(f"depth must be >= 0, got {d}")
        gates = []
        slot = 0
        for layer in range(d + 1):
            if layer:
                gates += [GateSpec("CZ", pair) for pair in entangling_pairs(n, layer - 1, self.pattern)]
            for q in range(n):
                for kind in ("Rz", "Ry", "Rz"):
                    gates.append(GateSpec(kind, (q,), param=slot))
                    slot += 1
        object.__setattr__(self, "layout", tuple(gates))

    @property
    def num_params(self) -> int:
        return 3 * self.num_qubits * (self.depth + 1)

    @cached_property
    def program(self):
        return compile_program(self.layout, self.num_qubits)

    def bind(self, theta):
        self._check(theta)
        return [g.bind(theta) for g in self.layout]

    def unitary(self, theta) -> np.ndarray:
        self._check(theta)
        return circuit_to_unitary(self.layout, self.num_qubits, theta)

    def init_params(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(0.0, 2 * np.pi, self.num_params)

    def _check(self, theta):
        if len(theta) != self.num_params:
            raise ValueError(f"expected {self.num_params} parameters, got {len(theta)}")

    def to_dict(self) -> dict:
        return {"n": self.num_qubits, "d": self.depth, "pattern": self.pattern}

    @classmethod
    def from_dict(cls, data: dict) -> "Ansatz":
        return cls(int(data["n"]), int(data["d"]), data.get("pattern", "ladder"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Ansatz":
        return cls.from_dict(json.loads(text))


def build_ansatz(n: int, d: int, pattern: str = "ladder") -> Ansatz:
    return Ansatz(n, d, pattern)


def apply_ansatz(ansatz: Ansatz, theta, states: np.ndarray) -> np.ndarray:
    """Run the circuit on one state or a ``(batch, dim)`` stack; returns a new array."""
    ansatz._check(theta)
    out = np.array(states, dtype=np.complex128, order="C", copy=True)
    batch = out.reshape(-1, out.shape[-1])
    if batch.shape[1] != 1 << ansatz.num_qubits:
        raise ValueError(f"state dimension {batch.shape[1]} does not match {ansatz.num_qubits} qubits")
    ops, fixed = ansatz.program
    kernels.run_program(batch, ops, fixed, theta)
    return out

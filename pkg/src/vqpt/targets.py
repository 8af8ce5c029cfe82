"""Ground-truth unitaries: XXZ chain evolution and seeded random circuits."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .simcore import GateSpec, MAX_QUBITS, check_capacity, circuit_to_unitary

RANDOM_GATES = ("T", "SqrtX", "SqrtY")


@dataclass(frozen=True)
class XXZParams:
    n: int
    J: float = 1.0
    Delta: float = 1.0
    h: float = 0.1
    dt: float = 0.01

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"XXZ chain needs n >= 2, got {self.n}")
        if self.dt < 0:
            raise ValueError(f"dt must be >= 0, got {self.dt}")


@dataclass(frozen=True)
class RQCParams:
    n: int
    D: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 2 or self.D < 1:
            raise ValueError(f"random circuit needs n >= 2 and D >= 1, got n={self.n}, D={self.D}")


@dataclass
class TargetProcess:
    unitary: np.ndarray
    kind: str
    params: dict

    @property
    def num_qubits(self) -> int:
        return len(self.unitary).bit_length() - 1

    def provenance(self) -> dict:
        return {"kind": self.kind, **self.params}


def build_xxz_hamiltonian(p: XXZParams) -> np.ndarray:
    """Open-chain XXZ Hamiltonian in a longitudinal field, built bitwise.

    Diagonal: Delta * sum z_l z_{l+1} + h * sum z_l. Off-diagonal: the XX + YY
    hopping term maps |..01..> <-> |..10..> on a bond with amplitude 2J.
    """
    check_capacity(p.n, MAX_QUBITS)
    dim = 1 << p.n
    idx = np.arange(dim)
    z = 1 - 2 * ((idx[:, None] >> np.arange(p.n)) & 1)  # (dim, n) of +-1
    ham = np.zeros((dim, dim), dtype=complex)
    ham[idx, idx] = p.Delta * (z[:, :-1] * z[:, 1:]).sum(axis=1) + p.h * z.sum(axis=1)
    for site in range(p.n - 1):
        flip = idx ^ (0b11 << site)
        hop = z[:, site] != z[:, site + 1]
        ham[flip[hop], idx[hop]] += 2 * p.J
    return ham


def evolve_unitary(ham: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i H dt) through the Hermitian eigendecomposition."""
    try:
        evals, evecs = np.linalg.eigh(ham)
    except np.linalg.LinAlgError as err:
        raise ArithmeticError(f"eigendecomposition failed: {err}") from err
    return (evecs * np.exp(-1j * evals * dt)) @ evecs.conj().T


def xxz_target(p: XXZParams) -> TargetProcess:
    u = evolve_unitary(build_xxz_hamiltonian(p), p.dt)
    return TargetProcess(u, "xxz", asdict(p))


def build_random_circuit(p: RQCParams) -> list:
    """H wall, D rounds of (brick CZ layer, random T/SqrtX/SqrtY on every qubit), H wall.

    Choices come from ``numpy.random.Generator(PCG64(seed))`` so gate lists are
    identical across platforms for a given seed.
    """
    rng = np.random.Generator(np.random.PCG64(p.seed))
    gates = [GateSpec("H", (q,)) for q in range(p.n)]
    for layer in range(p.D):
        gates += [GateSpec("CZ", (q, q + 1)) for q in range(layer % 2, p.n - 1, 2)]
        picks = rng.integers(0, len(RANDOM_GATES), size=p.n)
        gates += [GateSpec(RANDOM_GATES[k], (q,)) for q, k in enumerate(picks)]
    gates += [GateSpec("H", (q,)) for q in range(p.n)]
    return gates


def rqc_target(p: RQCParams) -> TargetProcess:
    u = circuit_to_unitary(build_random_circuit(p), p.n)
    return TargetProcess(u, "rqc", asdict(p))

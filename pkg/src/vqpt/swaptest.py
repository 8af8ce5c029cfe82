"""Overlap estimation through SWAP-test statistics.

The ancilla statistics are computed from the statevectors instead of a
gate-level simulation of the SWAP-test circuit; the outcome distribution is
the same. In shot mode the ancilla counts are drawn from a binomial.

Complex overlaps c = <psi|phi> are recovered from two fidelities:
``a = |c|^2`` and ``b = 2 p0 f`` where ``p0 = (1 + Re c) / 2`` is the chance
of post-selecting the superposition ``xi ~ psi + phi`` and ``f = |<psi|xi>|^2``
is the SWAP-test fidelity against the normalized ``xi``. Then
``Re c = b - (a + 1) / 2`` and ``|Im c| = sqrt((a + 1) b - b^2 - (a - 1)^2 / 4)``.
The sign of ``Im c`` is not observable this way and is never guessed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

DEGENERATE_TOL = 1e-12


class DegenerateSuperposition(ValueError):
    """psi + phi vanishes, so post-selection on the superposition never succeeds."""


@dataclass(frozen=True)
class OverlapEstimate:
    a: float
    b: float
    c_re: float
    c_im_abs: float
    p0: float
    f: float
    shots: Optional[int] = None  # None means exact
    degenerate: bool = False


def _check_pair(psi, phi):
    psi = np.asarray(psi)
    phi = np.asarray(phi)
    if psi.shape != phi.shape:
        raise ValueError(f"dimension mismatch: {psi.shape} vs {phi.shape}")
    return psi, phi


def _check_shots(shots):
    if shots is not None and shots < 1:
        raise ValueError(f"shots must be >= 1 or None for exact, got {shots}")


def _row_overlaps(psi, phi):
    return np.einsum("...i,...i->...", psi.conj(), phi)


def swap_test_fidelities(psi, phi, shots=None, rng=None):
    """Vectorized SWAP test over the last axis.

    The ancilla reads 1 with probability (1 - F) / 2; the estimate is
    ``1 - 2 * ones / shots``, which may fall slightly outside [0, 1].
    """
    psi, phi = _check_pair(psi, phi)
    _check_shots(shots)
    exact = np.clip(np.abs(_row_overlaps(psi, phi)) ** 2, 0.0, 1.0)
    if shots is None:
        return exact
    ones = rng.binomial(shots, (1.0 - exact) / 2.0)
    return 1.0 - 2.0 * ones / shots


def fidelity(psi, phi, shots=None, rng=None) -> float:
    return float(swap_test_fidelities(psi, phi, shots, rng))


def superposition_state(psi, phi):
    """Post-selected state (psi + phi)/||psi + phi|| and its success probability."""
    psi, phi = _check_pair(psi, phi)
    total = psi + phi
    norm = np.linalg.norm(total)
    if norm <= DEGENERATE_TOL:
        raise DegenerateSuperposition("psi = -phi: post-selection probability is 0")
    p0 = float(np.clip((1.0 + np.vdot(psi, phi).real) / 2.0, 0.0, 1.0))
    return total / norm, p0


def reconstruct(a, b):
    """(Re c, |Im c|) from the two fidelities; the radicand is clamped at 0."""
    c_re = b - (a + 1.0) / 2.0
    radicand = (a + 1.0) * b - b * b - (a - 1.0) ** 2 / 4.0
    return c_re, np.sqrt(np.maximum(radicand, 0.0))


def overlap_observables(psi, phi, shots=None, rng=None):
    """Measured ``(a, p0, f)`` for each row pair; rows with psi = -phi get p0 = f = 0."""
    psi, phi = _check_pair(psi, phi)
    _check_shots(shots)
    a = swap_test_fidelities(psi, phi, shots, rng)
    c = _row_overlaps(psi, phi)
    p0 = np.clip((1.0 + c.real) / 2.0, 0.0, 1.0)
    total = psi + phi
    norm = np.linalg.norm(total, axis=-1)
    ok = norm > DEGENERATE_TOL
    xi = np.where(ok[..., None], total / np.where(ok, norm, 1.0)[..., None], 0.0)
    f = np.where(ok, swap_test_fidelities(psi, xi, shots, rng), 0.0)
    if shots is not None:
        successes = rng.binomial(shots, p0)
        p0 = successes / shots
    return a, p0, f


def overlap_re(psi, phi, shots=None, rng=None):
    """Re <psi|phi> per row, through the two-fidelity reconstruction."""
    a, p0, f = overlap_observables(psi, phi, shots, rng)
    return reconstruct(a, 2.0 * p0 * f)[0]


def generalized_overlap(psi, phi, shots=None, rng=None) -> OverlapEstimate:
    psi, phi = _check_pair(psi, phi)
    if psi.ndim != 1:
        raise ValueError("generalized_overlap takes single states; use overlap_re for batches")
    if np.linalg.norm(psi + phi) <= DEGENERATE_TOL:
        return OverlapEstimate(1.0, 0.0, -1.0, 0.0, 0.0, 0.0, shots, degenerate=True)
    a, p0, f = (float(x) for x in overlap_observables(psi, phi, shots, rng))
    b = 2.0 * p0 * f
    c_re, c_im_abs = reconstruct(a, b)
    return OverlapEstimate(a, b, float(c_re), float(c_im_abs), p0, f, shots)

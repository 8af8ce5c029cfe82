"""Batched statevector kernels.

States are stored as a C-contiguous ``(batch, 2**n)`` complex128 array; qubit
``q`` is bit ``q`` of the amplitude index (qubit 0 is least significant).

A circuit is compiled to a *program*: an int64 array of shape ``(G, 4)`` with
rows ``(kind, q0, q1, slot)`` plus a float64 array of fixed angles. ``slot`` is
the index into the parameter vector for trainable rotations, ``-1`` otherwise.

Two interchangeable backends are built from the same driver code: ``NUMBA``
(compiled loops, ``None`` when numba is unavailable) and ``NUMPY`` (reshape
based vectorization). ``BACKEND`` is the one selected by ``VQPT_DISABLE_NUMBA``.
"""
import cmath
import math
from types import SimpleNamespace

import numpy as np

from . import _jit

RY, RZ, H, T, SQRT_X, SQRT_Y, CZ = range(7)

_R2 = 1.0 / math.sqrt(2.0)
_T_PHASE = cmath.exp(0.25j * math.pi)
_PLUS = 0.5 + 0.5j
_MINUS = 0.5 - 0.5j


def gate_entries(kind, angle):
    """Row-major entries ``(m00, m01, m10, m11)`` of a single-qubit gate."""
    if kind == RY:
        c = math.cos(0.5 * angle)
        s = math.sin(0.5 * angle)
        return complex(c), complex(-s), complex(s), complex(c)
    if kind == RZ:
        e = cmath.exp(-0.5j * angle)
        return e, 0j, 0j, e.conjugate()
    if kind == H:
        return complex(_R2), complex(_R2), complex(_R2), complex(-_R2)
    if kind == T:
        return 1 + 0j, 0j, 0j, _T_PHASE
    if kind == SQRT_X:
        return _PLUS, _MINUS, _MINUS, _PLUS
    # SQRT_Y
    return _PLUS, -_PLUS, _PLUS, _PLUS


# -- loop kernels (compiled by numba) -----------------------------------------

def _apply_1q_loop(states, q, m00, m01, m10, m11):
    nb, dim = states.shape
    bit = 1 << q
    low = bit - 1
    for b in range(nb):
        for k in range(dim >> 1):
            i0 = ((k >> q) << (q + 1)) | (k & low)
            i1 = i0 | bit
            a0 = states[b, i0]
            a1 = states[b, i1]
            states[b, i0] = m00 * a0 + m01 * a1
            states[b, i1] = m10 * a0 + m11 * a1


def _apply_cz_loop(states, q0, q1):
    nb, dim = states.shape
    mask = (1 << q0) | (1 << q1)
    for b in range(nb):
        for i in range(dim):
            if i & mask == mask:
                states[b, i] = -states[b, i]


def _gen_z_loop(lam, phi, q):
    # Re sum <lam| (-i/2) Z_q |phi>
    nb, dim = phi.shape
    acc = 0.0
    for b in range(nb):
        for i in range(dim):
            w = (lam[b, i].conjugate() * phi[b, i]).imag
            if (i >> q) & 1:
                acc -= w
            else:
                acc += w
    return 0.5 * acc


def _gen_y_loop(lam, phi, q):
    # Re sum <lam| (-i/2) Y_q |phi>
    nb, dim = phi.shape
    bit = 1 << q
    low = bit - 1
    acc = 0.0
    for b in range(nb):
        for k in range(dim >> 1):
            i0 = ((k >> q) << (q + 1)) | (k & low)
            i1 = i0 | bit
            acc += (lam[b, i1].conjugate() * phi[b, i0]).real
            acc -= (lam[b, i0].conjugate() * phi[b, i1]).real
    return 0.5 * acc


def _row_vdot_loop(a, b):
    nb, dim = a.shape
    out = np.zeros(nb, dtype=np.complex128)
    for r in range(nb):
        acc = 0j
        for i in range(dim):
            acc += a[r, i].conjugate() * b[r, i]
        out[r] = acc
    return out


# -- vectorized numpy kernels -------------------------------------------------

def _apply_1q_numpy(states, q, m00, m01, m10, m11):
    nb, dim = states.shape
    v = states.reshape(nb, dim >> (q + 1), 2, 1 << q)
    a0 = v[:, :, 0, :].copy()
    a1 = v[:, :, 1, :].copy()
    v[:, :, 0, :] = m00 * a0 + m01 * a1
    v[:, :, 1, :] = m10 * a0 + m11 * a1


def _apply_cz_numpy(states, q0, q1):
    idx = np.arange(states.shape[1])
    states[:, ((idx >> q0) & (idx >> q1) & 1).astype(bool)] *= -1


def _gen_z_numpy(lam, phi, q):
    nb, dim = phi.shape
    w = (lam.conj() * phi).imag.reshape(nb, dim >> (q + 1), 2, 1 << q)
    return 0.5 * float(w[:, :, 0, :].sum() - w[:, :, 1, :].sum())


def _gen_y_numpy(lam, phi, q):
    nb, dim = phi.shape
    shape = (nb, dim >> (q + 1), 2, 1 << q)
    lv = lam.reshape(shape)
    pv = phi.reshape(shape)
    acc = np.vdot(lv[:, :, 1, :], pv[:, :, 0, :]).real - np.vdot(lv[:, :, 0, :], pv[:, :, 1, :]).real
    return 0.5 * float(acc)


def _row_vdot_numpy(a, b):
    return np.einsum("bi,bi->b", a.conj(), b)


# -- drivers ------------------------------------------------------------------

def _make_backend(name, jit, apply_1q, apply_cz, gen_z, gen_y, row_vdot):
    entries = jit(gate_entries)

    def run_program(states, ops, fixed, theta, inverse):
        n_gates = ops.shape[0]
        for t in range(n_gates):
            g = n_gates - 1 - t if inverse else t
            kind = ops[g, 0]
            if kind == CZ:
                apply_cz(states, ops[g, 1], ops[g, 2])
                continue
            slot = ops[g, 3]
            angle = theta[slot] if slot >= 0 else fixed[g]
            m00, m01, m10, m11 = entries(kind, angle)
            if inverse:
                m00, m01, m10, m11 = m00.conjugate(), m10.conjugate(), m01.conjugate(), m11.conjugate()
            apply_1q(states, ops[g, 1], m00, m01, m10, m11)

    run_program = jit(run_program)

    def overlap_grad(inputs, ideals, ops, fixed, theta, n_params):
        """Overlaps <ideal_b|C|in_b> and d/dtheta of sum_b Re <ideal_b|C|in_b>."""
        phi = inputs.copy()
        run_program(phi, ops, fixed, theta, False)
        overlaps = row_vdot(ideals, phi)
        lam = ideals.copy()
        grad = np.zeros(n_params)
        for t in range(ops.shape[0]):
            g = ops.shape[0] - 1 - t
            kind = ops[g, 0]
            q = ops[g, 1]
            if kind == CZ:
                apply_cz(phi, q, ops[g, 2])
                apply_cz(lam, q, ops[g, 2])
                continue
            slot = ops[g, 3]
            if slot >= 0:
                if kind == RZ:
                    grad[slot] += gen_z(lam, phi, q)
                elif kind == RY:
                    grad[slot] += gen_y(lam, phi, q)
            angle = theta[slot] if slot >= 0 else fixed[g]
            m00, m01, m10, m11 = entries(kind, angle)
            a00, a01, a10, a11 = m00.conjugate(), m10.conjugate(), m01.conjugate(), m11.conjugate()
            apply_1q(phi, q, a00, a01, a10, a11)
            apply_1q(lam, q, a00, a01, a10, a11)
        return overlaps, grad

    return SimpleNamespace(
        name=name,
        apply_1q=apply_1q,
        apply_cz=apply_cz,
        row_vdot=row_vdot,
        run_program=run_program,
        overlap_grad=jit(overlap_grad),
    )


def _identity(fn):
    return fn


NUMPY = _make_backend(
    "numpy", _identity,
    _apply_1q_numpy, _apply_cz_numpy, _gen_z_numpy, _gen_y_numpy, _row_vdot_numpy,
)

if _jit.numba is not None:
    _nj = _jit.numba.njit(cache=True, nogil=True)
    NUMBA = _make_backend(
        "numba", _jit.numba.njit(nogil=True),
        _nj(_apply_1q_loop), _nj(_apply_cz_loop), _nj(_gen_z_loop), _nj(_gen_y_loop),
        _nj(_row_vdot_loop),
    )
else:  # pragma: no cover
    NUMBA = None

BACKEND = NUMBA if _jit.USE_NUMBA else NUMPY


def run_program(states, ops, fixed, theta, inverse=False):
    """Apply a compiled program in place to a ``(batch, dim)`` state array."""
    BACKEND.run_program(states, ops, fixed, np.asarray(theta, dtype=np.float64), inverse)
    return states


def overlap_grad(inputs, ideals, ops, fixed, theta, n_params):
    """Return ``(overlaps, grad)`` where ``grad`` differentiates ``sum Re overlaps``."""
    return BACKEND.overlap_grad(inputs, ideals, ops, fixed, np.asarray(theta, dtype=np.float64), n_params)

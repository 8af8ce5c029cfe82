import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_state
from vqpt.swaptest import (
    DegenerateSuperposition, fidelity, generalized_overlap, overlap_observables, overlap_re,
    superposition_state,
)

ZERO = np.array([1, 0], dtype=complex)
ONE = np.array([0, 1], dtype=complex)


def test_fidelity_exact():
    assert fidelity(ZERO, ZERO) == pytest.approx(1)
    assert fidelity(ZERO, ONE) == pytest.approx(0)
    with pytest.raises(ValueError):
        fidelity(ZERO, np.ones(4) / 2)


def test_fidelity_shots_concentrates():
    # |<a|b>|^2 = 0.5; std of the estimate is sqrt(1 - 0.5^2)/sqrt(1e5) ~ 0.0027
    a = ZERO
    b = np.array([1, 1j]) / np.sqrt(2)
    rng = np.random.default_rng(1)
    estimates = np.array([fidelity(a, b, shots=100_000, rng=rng) for _ in range(200)])
    assert np.mean(abs(estimates - 0.5) < 0.01) > 0.99


def test_superposition_state(rng):
    psi = random_state(rng, 2)
    xi, p0 = superposition_state(psi, psi)
    assert p0 == pytest.approx(1)
    np.testing.assert_allclose(xi, psi)
    _, p0 = superposition_state(ZERO, ONE)
    assert p0 == pytest.approx(0.5)
    phi = random_state(rng, 2)
    _, p0 = superposition_state(psi, phi)
    assert abs(p0 - (1 + np.vdot(psi, phi).real) / 2) < 1e-12
    with pytest.raises(DegenerateSuperposition):
        superposition_state(psi, -psi)


def test_generalized_overlap_hand_values():
    est = generalized_overlap(ZERO, ONE)
    assert (est.a, est.b, est.c_re, est.c_im_abs) == pytest.approx((0, 0.5, 0, 0), abs=1e-12)
    est = generalized_overlap(ZERO, 1j * ZERO)
    assert (est.a, est.b, est.c_re, est.c_im_abs) == pytest.approx((1, 1, 0, 1), abs=1e-12)


def test_generalized_overlap_degenerate(rng):
    psi = random_state(rng, 3)
    est = generalized_overlap(psi, -psi)
    assert est.degenerate and est.c_re == -1 and est.c_im_abs == 0


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 4))
def test_exact_mode_identity(seed, n):
    rng = np.random.default_rng(seed)
    psi, phi = random_state(rng, n), random_state(rng, n)
    c = np.vdot(psi, phi)
    est = generalized_overlap(psi, phi)
    assert abs(est.c_re - c.real) <= 1e-10
    assert abs(est.c_im_abs - abs(c.imag)) <= 1e-10
    assert abs(est.c_re ** 2 + est.c_im_abs ** 2 - est.a) <= 1e-10
    assert est.b == pytest.approx(2 * est.p0 * est.f, abs=1e-15)
    assert 0 <= est.a <= 1 and 0 <= est.p0 <= 1


def test_shot_bookkeeping(rng):
    psi, phi = random_state(rng, 2), random_state(rng, 2)
    est = generalized_overlap(psi, phi, shots=1000, rng=rng)
    assert est.shots == 1000
    assert est.b == pytest.approx(2 * est.p0 * est.f)
    assert est.c_im_abs >= 0


def test_shot_error_shrinks(rng):
    pairs = [(random_state(rng, 3), random_state(rng, 3)) for _ in range(50)]
    errors = {}
    for shots in (1_000, 100_000):
        errs = [abs(generalized_overlap(p, q, shots, rng).c_re - np.vdot(p, q).real) for p, q in pairs]
        errors[shots] = np.sqrt(np.mean(np.square(errs)))
    # O(1/sqrt(shots)): a factor 10 expected between the two
    assert errors[100_000] < errors[1_000] / 4
    assert errors[1_000] < 0.1


def test_batched_reconstruction(rng):
    psis = np.array([random_state(rng, 3) for _ in range(5)])
    phis = np.array([random_state(rng, 3) for _ in range(5)])
    np.testing.assert_allclose(overlap_re(psis, phis), np.einsum("bi,bi->b", psis.conj(), phis).real, atol=1e-12)
    a, p0, f = overlap_observables(psis, -psis)
    np.testing.assert_allclose(p0, 0, atol=1e-15)
    np.testing.assert_allclose(f, 0)

"""Tests for the fixed 8-dimensional state/propagator algebra."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bicavity import linalg
from bicavity.propagators import u1_resonant, u2_resonant, u3_free, u4_probe_mode1
from bicavity.pulses import DEFAULT_DELTA, DEFAULT_OMEGA


def random_unitary(rng):
    z = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_basis_is_a_bijection():
    assert len(linalg.BASIS_LABELS) == 8
    assert len(set(linalg.BASIS_LABELS)) == 8
    for i, label in enumerate(linalg.BASIS_LABELS):
        assert linalg.BASIS_INDEX[label] == i


def test_basis_ordering():
    # the fixed ordering every matrix in the package relies on
    assert linalg.BASIS_LABELS[0] == ("e", 0, 0)
    assert linalg.BASIS_LABELS[1] == ("g", 1, 1)
    assert linalg.BASIS_LABELS[5] == ("g", 0, 1)
    assert linalg.BASIS_LABELS[7] == ("g", 1, 0)
    assert linalg.SINGLE_EXCITATION == (0, 5, 7)


def test_apply_identity_returns_state():
    s = linalg.basis_state(3)
    assert np.array_equal(linalg.apply(linalg.identity(), s), s)


def test_apply_permutation_swaps_basis_states():
    perm = linalg.identity()
    perm[[0, 7]] = perm[[7, 0]]
    out = linalg.apply(perm, linalg.basis_state(0))
    assert np.array_equal(out, linalg.basis_state(7))


def test_full_rabi_rotation_transfers_the_excitation():
    # half Rabi period: |e,0,0> -> -i |g,1,0>
    u = u1_resonant(math.pi / DEFAULT_OMEGA, DEFAULT_OMEGA)
    out = linalg.apply(u, linalg.basis_state(linalg.IDX_E_00))
    expected = -1j * linalg.basis_state(linalg.IDX_G_10)
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_compose_with_identity():
    rng = np.random.default_rng(7)
    u = random_unitary(rng)
    np.testing.assert_allclose(linalg.compose(linalg.identity(), u), u, atol=1e-14)


def test_compose_inverse_gives_identity():
    rng = np.random.default_rng(8)
    u = random_unitary(rng)
    np.testing.assert_allclose(
        linalg.compose(u.conj().T, u), np.eye(8), atol=1e-10
    )


def test_compose_ordering_later_factor_acts_second():
    u1 = u1_resonant(0.5 * math.pi / DEFAULT_OMEGA, DEFAULT_OMEGA)
    u2 = u2_resonant(math.pi / DEFAULT_OMEGA, DEFAULT_OMEGA, DEFAULT_DELTA)
    np.testing.assert_allclose(linalg.compose(u2, u1), u2 @ u1, atol=0)


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=25, deadline=None)
def test_compose_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_unitary(rng) for _ in range(3))
    left = linalg.compose(linalg.compose(a, b), c)
    right = linalg.compose(a, linalg.compose(b, c))
    np.testing.assert_allclose(left, right, atol=1e-12)


def test_unitarity_defect_identity_is_zero():
    assert linalg.unitarity_defect(linalg.identity()) == 0.0


def test_unitarity_defect_flags_broken_matrix():
    u = linalg.identity()
    u[0, 0] = 2.0
    assert linalg.unitarity_defect(u) > 0.0


@pytest.mark.parametrize(
    "builder",
    [
        lambda t: u1_resonant(t, DEFAULT_OMEGA),
        lambda t: u2_resonant(t, DEFAULT_OMEGA, DEFAULT_DELTA),
        lambda t: u3_free(t, DEFAULT_DELTA),
        lambda t: u4_probe_mode1(t, DEFAULT_OMEGA, DEFAULT_DELTA),
    ],
)
def test_analytic_propagators_unitary_on_grid(builder):
    t_max = 1.5 * math.pi / DEFAULT_OMEGA
    for t in np.linspace(0.0, t_max, 100):
        assert linalg.unitarity_defect(builder(t)) <= 1e-10


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=25, deadline=None)
def test_apply_preserves_norm(seed):
    rng = np.random.default_rng(seed)
    u = random_unitary(rng)
    s = rng.normal(size=8) + 1j * rng.normal(size=8)
    s /= np.linalg.norm(s)
    assert abs(linalg.norm(linalg.apply(u, s)) ** 2 - 1.0) <= 1e-10

"""Tests for the matrix substrate: joint diagonalization, Kronecker
factorization, and SVD, checked by construct-then-recover oracles."""

import numpy as np
import pytest

from kcforge import linalg
from kcforge.errors import NotProductFormError, NotSymmetricError, NotUnitaryError
from kcforge.gates import CNOT, PAULI_X, PAULI_Z
from kcforge.sampling import haar_unitary


def random_orthogonal(rng, n=4):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_symmetric_unitary(rng):
    """Oracle construction: Q0 D Q0^T with real orthogonal Q0 and
    unit-modulus diagonal D is symmetric and unitary."""
    q0 = random_orthogonal(rng)
    d = np.exp(1j * rng.uniform(-np.pi, np.pi, 4))
    return q0 @ np.diag(d) @ q0.T, d


class TestEigSymmetricUnitary:
    def test_identity(self):
        evals, q = linalg.eig_symmetric_unitary(np.eye(4, dtype=complex))
        np.testing.assert_allclose(evals, np.ones(4), atol=1e-12)
        assert linalg.frobenius(q.T @ q - np.eye(4)) < 1e-12

    def test_already_diagonal(self):
        s = np.diag([1, 1j, 1j, -1]).astype(complex)
        evals, q = linalg.eig_symmetric_unitary(s)
        np.testing.assert_allclose(sorted(evals, key=np.angle), sorted([1, 1j, 1j, -1], key=np.angle), atol=1e-12)
        # eigenvectors are a signed permutation of the standard basis
        assert np.allclose(np.abs(q), np.abs(q).round(), atol=1e-12)

    def test_construct_then_recover(self, rng):
        worst = 0.0
        for _ in range(400):
            s, d = random_symmetric_unitary(rng)
            evals, q = linalg.eig_symmetric_unitary(s)
            diag = q.T @ s @ q
            worst = max(worst, linalg.frobenius(diag - np.diag(np.diag(diag))))
            np.testing.assert_allclose(
                sorted(np.angle(evals)), sorted(np.angle(d)), atol=1e-9
            )
        assert worst < 1e-12

    def test_output_is_real_special_orthogonal(self, rng):
        for _ in range(100):
            s, _ = random_symmetric_unitary(rng)
            evals, q = linalg.eig_symmetric_unitary(s)
            assert np.max(np.abs(q.imag)) == 0.0  # returned as a real array
            assert linalg.frobenius(q.T @ q - np.eye(4)) < 1e-9
            assert np.linalg.det(q) == pytest.approx(1.0, abs=1e-9)
            assert np.max(np.abs(np.abs(evals) - 1)) < 1e-9

    def test_degenerate_pairs(self, rng):
        # repeated eigenvalues exercise the cluster handling
        q0 = random_orthogonal(rng)
        s = q0 @ np.diag([1j, 1j, -1j, -1j]) @ q0.T
        _, q = linalg.eig_symmetric_unitary(s)
        diag = q.T @ s @ q
        assert linalg.frobenius(diag - np.diag(np.diag(diag))) < 1e-12

    def test_rejects_asymmetric(self, rng):
        with pytest.raises(NotSymmetricError):
            linalg.eig_symmetric_unitary(haar_unitary(4, rng) + np.arange(16).reshape(4, 4))

    def test_rejects_nonunitary(self):
        with pytest.raises(NotUnitaryError):
            linalg.eig_symmetric_unitary(np.diag([1, 1, 1, 2.0]).astype(complex))


class TestKronFactor:
    def test_identity(self):
        a, b, phase = linalg.kron_factor_su2(np.eye(4, dtype=complex))
        assert linalg.frobenius(phase * np.kron(a, b) - np.eye(4)) < 1e-12

    def test_pauli_product(self):
        g = np.kron(PAULI_X, PAULI_Z)
        a, b, phase = linalg.kron_factor_su2(g)
        assert linalg.frobenius(phase * np.kron(a, b) - g) < 1e-12
        assert np.linalg.det(a) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.det(b) == pytest.approx(1.0, abs=1e-12)

    def test_construct_then_recover(self, rng):
        for _ in range(300):
            u, v = haar_unitary(2, rng), haar_unitary(2, rng)
            phase0 = np.exp(1j * rng.uniform(0, 2 * np.pi))
            g = phase0 * np.kron(u, v)
            a, b, phase = linalg.kron_factor_su2(g)
            assert linalg.frobenius(phase * np.kron(a, b) - g) < 1e-12

    def test_round_trip_on_special_unitaries(self, rng):
        # factorization inverts the product map up to phase
        for _ in range(50):
            u = haar_unitary(2, rng)
            u /= np.sqrt(np.linalg.det(u))
            v = haar_unitary(2, rng)
            v /= np.sqrt(np.linalg.det(v))
            a, b, phase = linalg.kron_factor_su2(np.kron(u, v))
            assert abs(abs(phase) - 1) < 1e-12
            assert min(
                linalg.frobenius(a - u), linalg.frobenius(a + u)
            ) < 1e-9

    def test_rejects_entangling_gate(self):
        with pytest.raises(NotProductFormError):
            linalg.kron_factor_su2(CNOT)


class TestSvd4:
    def test_zero_matrix(self):
        sv, _, _ = linalg.svd4(np.zeros((4, 4)))
        np.testing.assert_allclose(sv, np.zeros(4))

    def test_identity(self):
        sv, _, _ = linalg.svd4(np.eye(4))
        np.testing.assert_allclose(sv, np.ones(4))

    def test_construct_then_recover(self, rng):
        for _ in range(300):
            chosen = np.sort(rng.uniform(0, 3, 4))[::-1]
            m = haar_unitary(4, rng) @ np.diag(chosen) @ haar_unitary(4, rng)
            sv, u, vh = linalg.svd4(m)
            np.testing.assert_allclose(sv, chosen, atol=1e-12)
            assert linalg.frobenius(u @ np.diag(sv) @ vh - m) < 1e-12 * max(1, np.linalg.norm(m))


def test_predicates(rng):
    u = haar_unitary(4, rng)
    assert linalg.is_unitary(u)
    assert not linalg.is_unitary(2 * u)
    assert linalg.is_symmetric(u + u.T)
    assert linalg.is_hermitian(u + u.conj().T)
    with pytest.raises(ValueError):
        linalg.assert_finite(np.array([[np.nan, 0], [0, 1]]))


def test_nearest_unitary(rng):
    m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    p = linalg.nearest_unitary(m)
    assert linalg.is_unitary(p, 1e-12)

"""Tests for the induced channel, its unitality matrix, and witness states."""

import numpy as np
import pytest

from kcforge.channel import (
    QubitState,
    exists_unital_input,
    induced_kraus,
    is_random_unitary_channel,
    min_unitality_defect,
    unitality_matrix_brute,
    unitality_matrix_closed_form,
)
from kcforge.errors import InconsistentCriteriaError, InvalidBasisError
from kcforge.gates import (
    KET_MINUS,
    KET_PLUS,
    PAULI_X,
    SWAP,
    canonical_exponential,
    controlled_phase,
)
from kcforge.linalg import frobenius
from kcforge.sampling import haar_unitary, random_gate_in_class, random_qubit_vector


def random_state(rng):
    return QubitState.from_vector(random_qubit_vector(rng))


class TestInducedKraus:
    def test_identity_gate(self, rng):
        phi = random_state(rng)
        ch = induced_kraus(np.eye(4), phi)
        np.testing.assert_allclose(ch.kraus[0], phi.a * np.eye(2), atol=1e-12)
        np.testing.assert_allclose(ch.kraus[1], phi.b * np.eye(2), atol=1e-12)

    def test_controlled_phase_blocks(self, rng):
        theta = 1.3
        phi = random_state(rng)
        ch = induced_kraus(controlled_phase(theta), phi)
        np.testing.assert_allclose(ch.kraus[0], phi.a * np.eye(2), atol=1e-12)
        np.testing.assert_allclose(
            ch.kraus[1], phi.b * np.diag([1, np.exp(1j * theta)]), atol=1e-12
        )

    def test_xx_gate_in_unbiased_basis(self):
        alpha = 0.7
        ch = induced_kraus(
            canonical_exponential(alpha, 0, 0),
            QubitState.plus(),
            basis=(KET_PLUS, KET_MINUS),
        )
        expected = np.cos(alpha) * np.eye(2) + 1j * np.sin(alpha) * PAULI_X
        np.testing.assert_allclose(ch.kraus[0], expected, atol=1e-12)
        np.testing.assert_allclose(ch.kraus[1], np.zeros((2, 2)), atol=1e-12)

    def test_completeness_and_partial_trace_agreement(self, rng):
        u = haar_unitary(4, rng)
        phi = random_state(rng)
        basis_mat = haar_unitary(2, rng)
        ch = induced_kraus(u, phi, basis=(basis_mat[:, 0], basis_mat[:, 1]))
        assert ch.completeness_defect() < 1e-10
        # the Kraus sum equals the partial trace on a basis of Hermitian inputs
        hermitian_basis = [
            np.eye(2, dtype=complex),
            PAULI_X.astype(complex),
            np.array([[0, -1j], [1j, 0]]),
            np.diag([1.0, -1.0]).astype(complex),
        ]
        for rho in hermitian_basis:
            via_kraus = ch.apply(rho)
            rho_in = np.kron(rho, phi.density)
            via_trace = np.einsum(
                "ikjk->ij", (u @ rho_in @ u.conj().T).reshape(2, 2, 2, 2)
            )
            assert frobenius(via_kraus - via_trace) < 1e-10

    def test_rejects_bad_basis(self):
        with pytest.raises(InvalidBasisError):
            induced_kraus(np.eye(4), QubitState.zero(), basis=(KET_PLUS, KET_PLUS))


class TestUnitalityMatrix:
    def test_local_class_is_unital(self, rng):
        g = unitality_matrix_closed_form((0, 0, 0), random_state(rng))
        np.testing.assert_allclose(g.matrix, np.eye(2), atol=1e-12)

    def test_iswap_point_with_basis_state(self):
        # collapses A toward |0>: Gamma(I) = 2|0><0| (brute force confirms)
        weyl = (np.pi / 4, np.pi / 4, 0.23)
        state = QubitState.zero()
        closed = unitality_matrix_closed_form(weyl, state)
        brute = unitality_matrix_brute(canonical_exponential(*weyl), state)
        assert frobenius(closed.matrix - brute.matrix) < 1e-12
        np.testing.assert_allclose(closed.matrix, np.diag([2.0, 0.0]), atol=1e-12)

    def test_unbiased_state_kills_z_free_points(self, rng):
        for _ in range(20):
            ax, ay = rng.uniform(0, np.pi / 4, 2)
            g = unitality_matrix_closed_form((ax, ay, 0.0), QubitState.plus())
            np.testing.assert_allclose(g.matrix, np.eye(2), atol=1e-12)

    def test_identity_gate_brute(self, rng):
        g = unitality_matrix_brute(np.eye(4), random_state(rng))
        np.testing.assert_allclose(g.matrix, np.eye(2), atol=1e-12)

    def test_swap_routes_state_to_a(self):
        g = unitality_matrix_brute(SWAP, QubitState.zero())
        np.testing.assert_allclose(g.matrix, 2 * QubitState.zero().density, atol=1e-12)

    def test_formula_matches_brute_force(self, rng):
        worst = 0.0
        for _ in range(1000):
            angles = np.sort(rng.uniform(0, np.pi / 4, 3))[::-1]
            angles[2] *= rng.choice([-1.0, 1.0])
            phi = random_state(rng)
            closed = unitality_matrix_closed_form(tuple(angles), phi)
            brute = unitality_matrix_brute(canonical_exponential(*angles), phi)
            worst = max(worst, float(np.max(np.abs(closed.matrix - brute.matrix))))
        assert worst < 1e-12

    def test_trace_preservation(self, rng):
        for _ in range(100):
            angles = rng.uniform(0, np.pi / 4, 3)
            g = unitality_matrix_closed_form(tuple(angles), random_state(rng))
            assert g.g11 + g.g22 == pytest.approx(2.0, abs=1e-12)


class TestExistsUnitalInput:
    def test_three_axis_gate_has_none(self):
        decision, witness = exists_unital_input(canonical_exponential(0.5, 0.4, 0.3))
        assert decision is False and witness is None

    def test_two_axis_gate_witness(self):
        decision, witness = exists_unital_input(canonical_exponential(0.5, 0.4, 0.0))
        assert decision is True
        g = unitality_matrix_brute(canonical_exponential(0.5, 0.4, 0.0), witness)
        assert g.defect() < 1e-9

    def test_identity_uses_basis_state(self):
        decision, witness = exists_unital_input(np.eye(4))
        assert decision is True
        np.testing.assert_allclose(np.abs(witness.vector), [1, 0], atol=1e-9)

    def test_witness_survives_dressing(self, rng):
        for count in (0, 1, 2):
            u = random_gate_in_class(rng, count)
            decision, witness = exists_unital_input(u)
            assert decision is True
            assert unitality_matrix_brute(u, witness).defect() < 1e-9

    def test_three_axis_defect_floor(self, rng):
        for _ in range(5):
            u = random_gate_in_class(rng, 3, low=0.1, high=np.pi / 4 - 0.1)
            defect, _ = min_unitality_defect(u)
            assert defect > 1e-6

    def test_min_defect_vanishes_for_two_axis(self, rng):
        u = random_gate_in_class(rng, 2)
        defect, witness = min_unitality_defect(u)
        assert defect < 1e-9
        assert unitality_matrix_brute(u, witness).defect() < 1e-8


class TestRandomUnitaryChannel:
    def test_scalar_kraus(self, rng):
        ch = induced_kraus(np.eye(4), random_state(rng))
        assert is_random_unitary_channel(ch) is True

    def test_controlled_phase_kraus(self, rng):
        ch = induced_kraus(controlled_phase(0.9), random_state(rng))
        assert is_random_unitary_channel(ch) is True

    def test_swap_with_basis_state(self):
        ch = induced_kraus(SWAP, QubitState.zero())
        assert is_random_unitary_channel(ch) is False

    def test_inconsistent_representation_is_reported(self):
        # measure-X-and-forget is unital, but these projector Kraus operators
        # are not proportional to unitaries: the disagreement must surface
        from kcforge.channel import InducedChannel

        k0 = (np.eye(2) + PAULI_X) / 2
        k1 = (np.eye(2) - PAULI_X) / 2
        with pytest.raises(InconsistentCriteriaError):
            is_random_unitary_channel(InducedChannel((k0, k1)))

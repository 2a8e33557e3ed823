"""Tests for pure states, density matrices and their fidelity."""

import numpy as np
import pytest

from gate_fidelity_lab.channels import apply, depolarizing
from gate_fidelity_lab.errors import DimensionMismatchError, InvalidInputError
from gate_fidelity_lab.factory import random_density_matrix
from gate_fidelity_lab.states import (
    DensityMatrix,
    StateVector,
    as_state,
    eigendecompose,
    qubits_for_dimension,
    reconstruct,
    state_fidelity,
)


class TestStateVector:

    def test_basis_state(self):
        psi = StateVector.basis_state(2, 3)
        assert psi.n_qubits == 2
        np.testing.assert_allclose(psi.amplitudes, [0, 0, 0, 1])

    def test_rejects_unnormalized(self):
        with pytest.raises(InvalidInputError):
            StateVector([1, 1])

    def test_normalized(self):
        psi = StateVector.normalized([3, 4j])
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0)

    def test_normalized_rejects_zero(self):
        with pytest.raises(InvalidInputError):
            StateVector.normalized([0, 0])

    def test_rejects_non_power_of_two(self):
        with pytest.raises(InvalidInputError):
            StateVector.normalized([1, 1, 1])

    def test_amplitudes_are_read_only(self):
        psi = StateVector.basis_state(1, 0)
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0

    def test_overlap(self, plus_state):
        assert plus_state.overlap(StateVector.basis_state(1, 0)) == pytest.approx(1 / np.sqrt(2))

    def test_overlap_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            StateVector.basis_state(1, 0).overlap(StateVector.basis_state(2, 0))

    def test_evolve(self, plus_state):
        h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        assert StateVector.basis_state(1, 0).evolve(h) == plus_state

    def test_as_state_checks_qubits(self):
        assert as_state([1, 0]).n_qubits == 1
        with pytest.raises(DimensionMismatchError):
            as_state([1, 0], n_qubits=2)


class TestDensityMatrix:

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidInputError):
            DensityMatrix([[0.5, 0.5], [0.0, 0.5]])

    def test_rejects_wrong_trace(self):
        with pytest.raises(InvalidInputError):
            DensityMatrix(np.eye(2))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(InvalidInputError):
            DensityMatrix([[1.5, 0.0], [0.0, -0.5]])

    def test_purity(self):
        assert DensityMatrix.maximally_mixed(2).purity() == pytest.approx(0.25)
        assert StateVector.basis_state(1, 1).projector().purity() == pytest.approx(1.0)

    def test_qubits_for_dimension(self):
        assert qubits_for_dimension(8) == 3
        with pytest.raises(InvalidInputError):
            qubits_for_dimension(6)


class TestStateFidelity:

    @pytest.mark.parametrize("a, b, expected", [(0, 0, 1.0), (0, 1, 0.0)])
    def test_basis_states(self, a, b, expected):
        rho = StateVector.basis_state(1, a).projector()
        sigma = StateVector.basis_state(1, b).projector()
        assert state_fidelity(rho, sigma) == pytest.approx(expected)

    def test_against_maximally_mixed(self):
        rho = StateVector.basis_state(1, 0).projector()
        assert state_fidelity(rho, DensityMatrix.maximally_mixed(1)) == pytest.approx(0.5)

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            state_fidelity(DensityMatrix.maximally_mixed(1), DensityMatrix.maximally_mixed(2))


class TestEigendecompose:

    def test_maximally_mixed(self):
        values = [v for v, _ in eigendecompose(DensityMatrix.maximally_mixed(1))]
        assert values == pytest.approx([0.5, 0.5])

    def test_pure_plus_state(self, plus_state):
        (top, phi), (bottom, _) = eigendecompose(plus_state.projector())
        assert top == pytest.approx(1.0)
        assert bottom == pytest.approx(0.0, abs=1e-12)
        assert phi == plus_state

    def test_depolarized_zero(self):
        rho = apply(depolarizing(1, 0.2), StateVector.basis_state(1, 0).projector())
        values = [v for v, _ in eigendecompose(rho)]
        assert values == pytest.approx([0.9, 0.1])

    def test_reconstruct(self, rng):
        rho = random_density_matrix(2, rng)
        np.testing.assert_allclose(reconstruct(eigendecompose(rho)), rho.entries, atol=1e-12)

    def test_descending_order(self, rng):
        values = [v for v, _ in eigendecompose(random_density_matrix(3, rng))]
        assert values == sorted(values, reverse=True)

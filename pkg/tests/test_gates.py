"""Tests for named gates and config gate descriptors."""

import numpy as np
import pytest

from gate_fidelity_lab.errors import InvalidInputError
from gate_fidelity_lab.gates import (
    NAMED_GATES,
    SINGLE_QUBIT,
    build_gate,
    cnot,
    named_gate,
    qft,
    swap,
    toffoli,
)


def _is_unitary(u):
    return np.allclose(u.conj().T @ u, np.eye(u.shape[0]))


@pytest.mark.parametrize("name", list(NAMED_GATES))
def test_named_gates_are_unitary(name):
    n = max(NAMED_GATES[name][1], 3)
    u = named_gate(name, n)
    assert u.shape == (2 ** n, 2 ** n)
    assert _is_unitary(u)


class TestNamedGates:

    def test_case_insensitive(self):
        np.testing.assert_allclose(named_gate("cnot", 2), named_gate("CNOT", 2))

    def test_single_qubit_gates_are_tensor_powers(self):
        h = SINGLE_QUBIT["H"]
        np.testing.assert_allclose(named_gate("H", 2), np.kron(h, h))

    def test_cnot_control_is_qubit_zero(self):
        u = cnot(0, 1, 2)
        # |10> -> |11>
        assert u[3, 2] == 1
        assert u[0, 0] == 1

    def test_swap(self):
        u = swap(0, 1, 2)
        assert u[2, 1] == 1 and u[1, 2] == 1

    def test_toffoli(self):
        u = toffoli(0, 1, 2, 3)
        assert u[7, 6] == 1 and u[6, 7] == 1
        np.testing.assert_allclose(np.diag(u)[:6], 1)

    def test_qft_one_qubit_is_hadamard(self):
        np.testing.assert_allclose(qft(1), SINGLE_QUBIT["H"], atol=1e-12)

    def test_unknown(self):
        with pytest.raises(InvalidInputError, match="Unknown gate 'FOO'"):
            named_gate("FOO", 1)

    def test_arity(self):
        with pytest.raises(InvalidInputError, match="needs at least 2 qubits"):
            named_gate("CNOT", 1)


class TestBuildGate:

    def test_explicit_unitary(self):
        grid = [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
        np.testing.assert_allclose(build_gate({"unitary": grid}, 1), SINGLE_QUBIT["X"])

    def test_explicit_unitary_shape(self):
        grid = [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
        with pytest.raises(InvalidInputError, match="expected"):
            build_gate({"unitary": grid}, 2)

    def test_explicit_unitary_bad_pairs(self):
        with pytest.raises(InvalidInputError):
            build_gate({"unitary": [[1, 0], [0, 1]]}, 1)

    def test_random_unitary_is_seeded(self):
        a = build_gate({"random": "unitary", "seed": 3}, 2)
        b = build_gate({"random": "unitary", "seed": 3}, 2)
        np.testing.assert_allclose(a, b)
        assert _is_unitary(a)

    def test_random_clifford(self):
        from gate_fidelity_lab.channels import is_clifford
        assert is_clifford(build_gate({"random": "clifford", "seed": 1, "depth": 12}, 3))

    @pytest.mark.parametrize("descriptor", [42, {"name": "H"}])
    def test_rejects_unknown_descriptors(self, descriptor):
        with pytest.raises(InvalidInputError):
            build_gate(descriptor, 1)

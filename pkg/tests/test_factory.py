"""Tests for the random object factory.

Every factory must produce objects that pass the library's own
constructors (normalization, trace preservation, unitarity).
"""

import numpy as np
import pytest

from gate_fidelity_lab.channels import is_clifford
from gate_fidelity_lab.errors import InvalidInputError
from gate_fidelity_lab.factory import (
    random_channel,
    random_clifford_circuit,
    random_density_matrix,
    random_isometry_kraus,
    random_state,
    random_unitary,
)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_random_unitary_is_unitary(n, rng):
    u = random_unitary(n, rng)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(2 ** n), atol=1e-10)


def test_random_state_is_normalized(rng):
    assert np.linalg.norm(random_state(3, rng).amplitudes) == pytest.approx(1.0)


def test_random_density_matrix_rank(rng):
    rho = random_density_matrix(2, rng, rank=1)
    assert rho.purity() == pytest.approx(1.0)


def test_isometry_kraus_is_complete(rng):
    ops = random_isometry_kraus(2, rng, kraus=3)
    total = np.einsum("mji,mjk->ik", ops.conj(), ops)
    np.testing.assert_allclose(total, np.eye(4), atol=1e-10)


class TestRandomChannel:

    def test_zero_strength_is_identity(self, rng):
        channel = random_channel(1, rng, strength=0.0)
        np.testing.assert_allclose(channel.kraus_ops[0], np.eye(2))

    def test_full_strength_rank(self, rng):
        assert random_channel(2, rng, kraus=3, strength=1.0).rank == 3

    def test_same_seed_same_channel(self):
        a = random_channel(2, np.random.default_rng(9))
        b = random_channel(2, np.random.default_rng(9))
        np.testing.assert_allclose(a.kraus_ops, b.kraus_ops)

    @pytest.mark.parametrize("kwargs", [{"kraus": 0}, {"strength": 1.5}, {"strength": -0.1}])
    def test_rejects_bad_parameters(self, kwargs, rng):
        with pytest.raises(InvalidInputError):
            random_channel(1, rng, **kwargs)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_random_clifford_circuit(n, rng):
    for _ in range(5):
        assert is_clifford(random_clifford_circuit(n, rng))

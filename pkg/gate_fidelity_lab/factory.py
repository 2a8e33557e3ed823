"""Random test objects: unitaries, states, channels and stabilizer circuits.

Every factory takes an explicit ``numpy.random.Generator`` so callers
control reproducibility; nothing here touches global random state.  The
objects feed the property tests and the ``random`` gate and noise
descriptors of experiment configs.
"""

from typing import Optional

import numpy as np
import scipy.stats

from .channels import QuantumChannel
from .errors import InvalidInputError
from .gates import SINGLE_QUBIT, cnot, operator_on
from .states import DensityMatrix, StateVector


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary on ``n`` qubits."""
    return scipy.stats.unitary_group.rvs(1 << n, random_state=rng)


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state on ``n`` qubits."""
    dim = 1 << n
    return StateVector.normalized(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def random_density_matrix(n: int, rng: np.random.Generator, rank: Optional[int] = None) -> DensityMatrix:
    """Random mixed state G G^dagger / Tr from a d x rank Ginibre matrix."""
    dim = 1 << n
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_isometry_kraus(n: int, rng: np.random.Generator, kraus: int) -> np.ndarray:
    """``kraus`` operators A_m with sum A_m^dagger A_m = 1, cut from a random isometry."""
    dim = 1 << n
    g = rng.normal(size=(kraus * dim, dim)) + 1j * rng.normal(size=(kraus * dim, dim))
    q, r = np.linalg.qr(g)
    # fix the column phases so the isometry is Haar distributed
    q = q * (np.diag(r) / np.abs(np.diag(r)))[None, :]
    return q.reshape(kraus, dim, dim)


def random_channel(
    n: int,
    rng: np.random.Generator,
    kraus: int = 2,
    strength: float = 0.1,
) -> QuantumChannel:
    """Random CPTP map: sqrt(1-s) 1 together with sqrt(s) A_m from a random isometry.

    ``strength`` = 0 gives the identity channel and 1 a fully random channel
    with ``kraus`` Kraus operators.
    """
    if kraus < 1:
        raise InvalidInputError(f"A random channel needs at least one Kraus operator, got {kraus}")
    if not 0.0 <= strength <= 1.0:
        raise InvalidInputError(f"Channel strength must lie in [0, 1], got {strength}")
    dim = 1 << n
    ops = np.sqrt(strength) * random_isometry_kraus(n, rng, kraus)
    if strength < 1.0:
        ops = np.concatenate([np.sqrt(1.0 - strength) * np.eye(dim, dtype=complex)[None], ops])
    return QuantumChannel(ops, name=f"random(kraus={kraus}, strength={strength:g})")


def random_clifford_circuit(n: int, rng: np.random.Generator, depth: int = 0) -> np.ndarray:
    """Product of ``depth`` gates drawn uniformly from {H_q, S_q, CNOT(a, b)}."""
    depth = depth or 4 * n
    choices = [("H", q) for q in range(n)] + [("S", q) for q in range(n)]
    choices += [("CNOT", (a, b)) for a in range(n) for b in range(n) if a != b]
    u = np.eye(1 << n, dtype=complex)
    for pick in rng.integers(len(choices), size=depth):
        name, where = choices[int(pick)]
        if name == "CNOT":
            gate = cnot(where[0], where[1], n)
        else:
            gate = operator_on({where: SINGLE_QUBIT[name]}, n)
        u = gate @ u
    return u

"""Quantum channels as explicit Kraus sets, standard noise models, Clifford detection.

A ``QuantumChannel`` holds its Kraus operators as one read-only stack of
shape (m, d, d).  Applying it to a d x d operator costs O(m d^3) and never
builds a d^2 x d^2 superoperator.  A unitary is the single-Kraus case.

Noise descriptors from experiment configs (``{"depolarizing": 0.2}`` and
friends) are turned into channels by ``build_noise``; ``NOISE_MODELS`` lists
the accepted constructor names for the ``noise`` subcommand.
"""

import functools
import logging
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatchError, InvalidInputError, check_qubit_cap
from .pauli import PauliString, pauli_spectrum
from .states import DensityMatrix, qubits_for_dimension

logger = logging.getLogger(__name__)

TRACE_PRESERVATION_TOLERANCE = 1e-8
UNITARITY_TOLERANCE = 1e-8
CLIFFORD_TOLERANCE = 1e-8
CLIFFORD_QUBIT_CAP = 6

# Fully depolarizing needs all d^2 Pauli Kraus operators.
DEPOLARIZING_QUBIT_CAP = 6

# Kraus operators with squared Frobenius norm below this are dropped.
_PRUNE_TOLERANCE = 1e-14


class QuantumChannel:
    """A CPTP map given by Kraus operators K_m with sum K_m^dagger K_m = 1.

    Attributes:
        n_qubits:  Number of qubits.
        kraus_ops: Read-only complex array of shape (m, d, d).
        name:      Short description used in reports.
    """

    __slots__ = ("n_qubits", "kraus_ops", "name")

    def __init__(self, kraus_ops: Any, name: str = "channel"):
        ops = np.array(kraus_ops, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] == 0 or ops.shape[1] != ops.shape[2]:
            raise InvalidInputError(f"Kraus operators must be a nonempty stack of d x d grids, got shape {ops.shape}")
        self.n_qubits = qubits_for_dimension(ops.shape[1])
        total = np.einsum("mji,mjk->ik", ops.conj(), ops)
        deviation = float(np.max(np.abs(total - np.eye(ops.shape[1]))))
        if deviation > TRACE_PRESERVATION_TOLERANCE:
            raise InvalidInputError(
                f"Kraus set is not trace preserving (max deviation {deviation:.3g})"
            )
        ops.setflags(write=False)
        self.kraus_ops = ops
        self.name = name

    @property
    def dim(self) -> int:
        return self.kraus_ops.shape[1]

    @property
    def rank(self) -> int:
        return self.kraus_ops.shape[0]

    @property
    def is_unitary(self) -> bool:
        return self.rank == 1

    def __repr__(self) -> str:
        return f"QuantumChannel({self.name!r}, n_qubits={self.n_qubits}, kraus={self.rank})"


def _check_dim(channel: QuantumChannel, dim: int) -> None:
    if channel.dim != dim:
        raise DimensionMismatchError(
            f"Channel on {channel.n_qubits} qubits cannot act on dimension {dim}"
        )


def apply_operator(channel: QuantumChannel, operator: np.ndarray) -> np.ndarray:
    """Return sum_m K_m A K_m^dagger for any d x d grid A (not necessarily a state)."""
    a = np.asarray(operator, dtype=complex)
    _check_dim(channel, a.shape[0])
    ops = channel.kraus_ops
    return np.sum(ops @ a @ ops.conj().transpose(0, 2, 1), axis=0)


def apply_adjoint(channel: QuantumChannel, operator: np.ndarray) -> np.ndarray:
    """Heisenberg picture: sum_m K_m^dagger A K_m, so Tr[A D(rho)] = Tr[D^dagger(A) rho]."""
    a = np.asarray(operator, dtype=complex)
    _check_dim(channel, a.shape[0])
    ops = channel.kraus_ops
    return np.sum(ops.conj().transpose(0, 2, 1) @ a @ ops, axis=0)


def apply(channel: QuantumChannel, rho: DensityMatrix) -> DensityMatrix:
    """Return the output state of ``channel`` on ``rho``."""
    _check_dim(channel, rho.dim)
    return DensityMatrix(apply_operator(channel, rho.entries), check_positivity=False)


def _prune(ops: np.ndarray) -> np.ndarray:
    norms = np.sum(np.abs(ops) ** 2, axis=(1, 2))
    kept = ops[norms > _PRUNE_TOLERANCE]
    return kept if kept.shape[0] else ops[:1]


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidInputError(f"{name} must lie in [0, 1], got {value}")
    return value


def _product_kraus(local_ops: Sequence[np.ndarray], n: int) -> np.ndarray:
    """All n-fold tensor products of the single-qubit Kraus set ``local_ops``."""
    ops = [np.ones((1, 1), dtype=complex)]
    for _ in range(n):
        ops = [np.kron(acc, k) for acc in ops for k in local_ops]
    return np.array(ops)


def identity_channel(n: int) -> QuantumChannel:
    return QuantumChannel(np.eye(1 << n, dtype=complex), name="identity")


def unitary_channel(unitary: Any, name: str = "unitary") -> QuantumChannel:
    """Wrap a unitary grid as a single-Kraus channel."""
    u = check_unitary(unitary)
    return QuantumChannel(u, name=name)


def check_unitary(unitary: Any) -> np.ndarray:
    """Return ``unitary`` as a complex grid, raising unless U^dagger U = 1 within 1e-8."""
    u = np.array(unitary, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InvalidInputError(f"Unitary must be a square grid, got shape {u.shape}")
    qubits_for_dimension(u.shape[0])
    deviation = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
    if deviation > UNITARITY_TOLERANCE:
        raise InvalidInputError(f"Matrix is not unitary (max deviation {deviation:.3g})")
    return u


def depolarizing(n: int, p: float) -> QuantumChannel:
    """rho -> (1-p) rho + p 1/d, as d^2 Pauli Kraus operators."""
    p = _check_probability("Depolarizing probability", p)
    check_qubit_cap("Depolarizing channel", n, DEPOLARIZING_QUBIT_CAP)
    dim = 1 << n
    weights = np.full(dim * dim, p / (dim * dim))
    weights[0] += 1.0 - p
    ops = [
        np.sqrt(weights[k]) * PauliString.from_index(n, k).to_matrix()
        for k in range(dim * dim)
        if weights[k] > 0.0
    ]
    return QuantumChannel(np.array(ops), name=f"depolarizing(p={p:g})")


def dephasing(n: int, gamma: float) -> QuantumChannel:
    """Independent phase flips: each qubit gets Z with probability gamma/2."""
    gamma = _check_probability("Dephasing strength", gamma)
    local = [
        np.sqrt(1.0 - gamma / 2.0) * np.eye(2, dtype=complex),
        np.sqrt(gamma / 2.0) * np.diag([1.0, -1.0]).astype(complex),
    ]
    return QuantumChannel(_prune(_product_kraus(local, n)), name=f"dephasing(gamma={gamma:g})")


def amplitude_damping(n: int, gamma: float) -> QuantumChannel:
    """Independent energy relaxation |1> -> |0> with probability gamma on each qubit."""
    gamma = _check_probability("Damping strength", gamma)
    local = [
        np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex),
        np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex),
    ]
    return QuantumChannel(_prune(_product_kraus(local, n)), name=f"amplitude_damping(gamma={gamma:g})")


def coherent_overrotation(axis: Union[PauliString, str], angle: float) -> QuantumChannel:
    """The unitary exp(-i angle W / 2) about the Pauli string ``axis``."""
    w = axis if isinstance(axis, PauliString) else PauliString.parse(axis)
    if not np.isfinite(angle):
        raise InvalidInputError(f"Overrotation angle must be finite, got {angle}")
    u = np.cos(angle / 2.0) * np.eye(w.dim) - 1j * np.sin(angle / 2.0) * w.to_matrix()
    return QuantumChannel(u, name=f"overrotation({w.label}, {angle:g})")


def compose(first: QuantumChannel, second: QuantumChannel) -> QuantumChannel:
    """The channel that applies ``second`` after ``first``."""
    if first.dim != second.dim:
        raise DimensionMismatchError(
            f"Cannot compose channels on {first.n_qubits} and {second.n_qubits} qubits"
        )
    ops = np.einsum("jab,ibc->jiac", second.kraus_ops, first.kraus_ops)
    ops = ops.reshape(-1, first.dim, first.dim)
    return QuantumChannel(_prune(ops), name=f"{second.name} o {first.name}")


def compose_all(channels: Sequence[QuantumChannel]) -> QuantumChannel:
    """Apply ``channels`` in order (first element first)."""
    if not channels:
        raise InvalidInputError("Nothing to compose")
    return functools.reduce(compose, channels)


def is_clifford(unitary: Any) -> bool:
    """True iff U maps every X_q and Z_q to +-1 times a single Pauli string."""
    u = check_unitary(unitary)
    n = qubits_for_dimension(u.shape[0])
    check_qubit_cap("Clifford detection", n, CLIFFORD_QUBIT_CAP)
    dim = 1 << n
    for q in range(n):
        for letter in ("X", "Z"):
            image = u @ PauliString.single(n, q, letter).to_matrix() @ u.conj().T
            coefficients = pauli_spectrum(image) / dim
            k = int(np.argmax(np.abs(coefficients)))
            sign = coefficients[k]
            if abs(abs(sign.real) - 1.0) > CLIFFORD_TOLERANCE or abs(sign.imag) > CLIFFORD_TOLERANCE:
                return False
            target = np.sign(sign.real) * PauliString.from_index(n, k).to_matrix()
            if np.max(np.abs(image - target)) > CLIFFORD_TOLERANCE:
                return False
    return True


# ---------------------------------------------------------------------------
# Config-level noise descriptors
# ---------------------------------------------------------------------------

# Registry of noise constructors: name -> human-readable description
NOISE_MODELS: Dict[str, str] = {
    "depolarizing": "Global depolarizing rho -> (1-p) rho + p 1/d; parameter p in [0, 1]",
    "dephasing": "Independent Z flips with probability gamma/2 per qubit; parameter gamma in [0, 1]",
    "amplitude_damping": "Independent |1> -> |0> relaxation per qubit; parameter gamma in [0, 1]",
    "overrotation": "Coherent rotation exp(-i angle W/2); parameters {\"axis\": \"XZ\", \"angle\": theta}",
    "unitary_error": "An extra unitary after the gate; same forms as the gate key",
    "random": "Random CPTP map near the identity; parameters {\"seed\": int, \"kraus\": int, \"strength\": s}",
}


def build_noise(
    descriptor: Union[Mapping[str, Any], List[Mapping[str, Any]], None],
    n: int,
    gate_builder: Optional[Any] = None,
) -> QuantumChannel:
    """Turn a config ``noise`` value into one channel (ordered list -> composition).

    ``gate_builder`` resolves ``unitary_error`` payloads (it receives the
    payload and ``n`` and returns a unitary grid).
    """
    if descriptor is None:
        return identity_channel(n)
    items = descriptor if isinstance(descriptor, list) else [descriptor]
    channels = []
    for item in items:
        for name, params in item.items():
            channels.append(_noise_from_entry(name, params, n, gate_builder))
    if not channels:
        return identity_channel(n)
    return compose_all(channels)


def _noise_from_entry(name: str, params: Any, n: int, gate_builder: Optional[Any]) -> QuantumChannel:
    if name == "depolarizing":
        return depolarizing(n, params)
    if name == "dephasing":
        return dephasing(n, params)
    if name == "amplitude_damping":
        return amplitude_damping(n, params)
    if name == "overrotation":
        axis = PauliString.parse(params["axis"])
        if axis.n_qubits != n:
            raise DimensionMismatchError(f"Overrotation axis {axis.label} is not an {n}-qubit string")
        return coherent_overrotation(axis, float(params["angle"]))
    if name == "unitary_error":
        if gate_builder is None:
            raise InvalidInputError("unitary_error noise needs a gate builder")
        return unitary_channel(gate_builder(params, n), name="unitary_error")
    if name == "random":
        from .factory import random_channel
        rng = np.random.default_rng(int(params.get("seed", 0)))
        return random_channel(
            n, rng,
            kraus=int(params.get("kraus", 2)),
            strength=float(params.get("strength", 0.1)),
        )
    raise InvalidInputError(f"Unknown noise model '{name}'")

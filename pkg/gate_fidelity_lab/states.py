"""Pure states, density matrices, state fidelity and spectral decomposition.

States are dense: a ``StateVector`` holds the 2^n amplitudes of |Ψ⟩ in the
canonical basis (qubit 0 is the most significant bit of the basis index), a
``DensityMatrix`` holds the full d×d grid.  Both are immutable: the backing
numpy arrays are copied on construction and marked read-only.

Dense simulation is capped at ``MAX_QUBITS`` qubits.
"""

import logging
from typing import Any, List, Optional, Tuple, Union

import numpy as np

from .errors import DimensionMismatchError, InvalidInputError, check_qubit_cap

logger = logging.getLogger(__name__)

MAX_QUBITS = 10

NORM_TOLERANCE = 1e-8
HERMITIAN_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-8
POSITIVITY_TOLERANCE = 1e-9
FIDELITY_CLAMP_TOLERANCE = 1e-9


def qubits_for_dimension(dim: int) -> int:
    """Return n for d = 2^n, raising ``InvalidInputError`` for other sizes."""
    if dim < 2 or dim & (dim - 1):
        raise InvalidInputError(f"Dimension must be a power of two >= 2, got {dim}")
    n = dim.bit_length() - 1
    check_qubit_cap("Dense state representation", n, MAX_QUBITS)
    return n


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class StateVector:
    """A normalized pure state |Ψ⟩ on n qubits.

    Attributes:
        n_qubits:   Number of qubits n.
        amplitudes: Read-only complex array of length d = 2^n.
    """

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, amplitudes: Any):
        arr = np.array(amplitudes, dtype=complex).reshape(-1)
        self.n_qubits = qubits_for_dimension(arr.size)
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidInputError(f"State vector is not normalized (norm={norm:.12g})")
        self.amplitudes = _frozen(arr)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def basis_state(cls, n_qubits: int, index: int) -> "StateVector":
        """Canonical basis state |index⟩ on ``n_qubits`` qubits."""
        dim = 2 ** n_qubits
        if not 0 <= index < dim:
            raise InvalidInputError(f"Basis index {index} out of range for n={n_qubits}")
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def normalized(cls, amplitudes: Any) -> "StateVector":
        """Build a state from unnormalized amplitudes."""
        arr = np.array(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(arr)
        if norm == 0:
            raise InvalidInputError("Cannot normalize the zero vector")
        return cls(arr / norm)

    def projector(self) -> "DensityMatrix":
        """Return |Ψ⟩⟨Ψ| as a density matrix."""
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()),
                             check_positivity=False)

    def overlap(self, other: "StateVector") -> complex:
        """Return ⟨self|other⟩."""
        if other.n_qubits != self.n_qubits:
            raise DimensionMismatchError(
                f"Cannot overlap states on {self.n_qubits} and {other.n_qubits} qubits"
            )
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def evolve(self, unitary: np.ndarray) -> "StateVector":
        """Return U|Ψ⟩.  ``unitary`` must be a d×d grid (not re-checked here)."""
        u = np.asarray(unitary)
        if u.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"Unitary of shape {u.shape} does not act on dimension {self.dim}"
            )
        return StateVector(u @ self.amplitudes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.n_qubits == other.n_qubits and np.allclose(
            self.amplitudes, other.amplitudes, atol=NORM_TOLERANCE
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits}, amplitudes={self.amplitudes!r})"


class DensityMatrix:
    """A valid density matrix ρ on n qubits.

    Construction checks Hermiticity (10⁻¹⁰), unit trace (10⁻⁸) and, unless
    ``check_positivity`` is False, eigenvalues ≥ −10⁻⁹.  Internal producers
    whose outputs are positive by construction (projectors, CPTP maps applied
    to valid inputs) skip the O(d³) positivity check.
    """

    __slots__ = ("n_qubits", "entries")

    def __init__(self, entries: Any, check_positivity: bool = True):
        arr = np.array(entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidInputError(f"Density matrix must be square, got shape {arr.shape}")
        self.n_qubits = qubits_for_dimension(arr.shape[0])
        _check_hermitian(arr)
        trace = complex(np.trace(arr))
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise InvalidInputError(f"Density matrix trace is {trace.real:.12g}, expected 1")
        if check_positivity:
            smallest = float(np.linalg.eigvalsh(arr)[0])
            if smallest < -POSITIVITY_TOLERANCE:
                raise InvalidInputError(
                    f"Density matrix has negative eigenvalue {smallest:.3g}"
                )
        self.entries = _frozen(arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        dim = 2 ** n_qubits
        return cls(np.eye(dim, dtype=complex) / dim, check_positivity=False)

    def purity(self) -> float:
        """Return Tr[ρ²]."""
        return float(np.real(np.sum(self.entries * self.entries.T)))

    def __repr__(self) -> str:
        return f"DensityMatrix(n_qubits={self.n_qubits})"


def _check_hermitian(arr: np.ndarray) -> None:
    deviation = float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0
    if deviation > HERMITIAN_TOLERANCE:
        raise InvalidInputError(f"Matrix is not Hermitian (max deviation {deviation:.3g})")


def state_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Return F = Tr[ρσ] for two density matrices.

    The value is real for valid inputs; results within 10⁻⁹ outside [0, 1]
    are clamped onto the boundary.
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(
            f"Cannot compare density matrices of dimension {rho.dim} and {sigma.dim}"
        )
    value = complex(np.sum(rho.entries * sigma.entries.T))
    if abs(value.imag) > FIDELITY_CLAMP_TOLERANCE:
        raise InvalidInputError(f"Tr[ρσ] has imaginary part {value.imag:.3g}")
    fidelity = value.real
    if -FIDELITY_CLAMP_TOLERANCE <= fidelity < 0.0:
        fidelity = 0.0
    elif 1.0 < fidelity <= 1.0 + FIDELITY_CLAMP_TOLERANCE:
        fidelity = 1.0
    return fidelity


def phase_normalized(vector: np.ndarray, tolerance: float = 1e-9) -> np.ndarray:
    """Rotate the global phase so the first non-negligible amplitude is real positive."""
    nonzero = np.flatnonzero(np.abs(vector) > tolerance)
    if nonzero.size == 0:
        return vector
    lead = vector[nonzero[0]]
    return vector * (abs(lead) / lead)


def eigendecompose(
    rho: Union[DensityMatrix, np.ndarray],
) -> List[Tuple[float, StateVector]]:
    """Spectral decomposition ρ = Σ λ|φ⟩⟨φ| with λ descending.

    Eigenvectors are phase-normalized (first non-negligible amplitude real
    positive); degenerate eigenvalues are ordered by the position and then
    the real parts of their eigenvectors, so reports are deterministic.
    """
    if isinstance(rho, DensityMatrix):
        arr = rho.entries
    else:
        arr = np.asarray(rho, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidInputError(f"Expected a square matrix, got shape {arr.shape}")
        qubits_for_dimension(arr.shape[0])
        _check_hermitian(arr)
    values, vectors = np.linalg.eigh(arr)

    pairs = []
    for idx in range(values.size):
        vec = phase_normalized(vectors[:, idx])
        vec = vec / np.linalg.norm(vec)
        lead = int(np.flatnonzero(np.abs(vec) > 1e-9)[0])
        key = (-round(float(values[idx]), 10), lead,
               tuple(np.round(vec.real, 10)), tuple(np.round(vec.imag, 10)))
        pairs.append((key, float(values[idx]), vec))
    pairs.sort(key=lambda item: item[0])
    logger.debug("eigendecompose: d=%d, spectrum=%s", arr.shape[0],
                 [round(p[1], 12) for p in pairs])
    return [(value, StateVector(vec)) for _, value, vec in pairs]


def reconstruct(decomposition: List[Tuple[float, StateVector]]) -> np.ndarray:
    """Return Σ λ|φ⟩⟨φ| as a dense grid (inverse of ``eigendecompose``)."""
    dim = decomposition[0][1].dim
    out = np.zeros((dim, dim), dtype=complex)
    for value, state in decomposition:
        out += value * np.outer(state.amplitudes, state.amplitudes.conj())
    return out


def as_state(value: Union[StateVector, Any], n_qubits: Optional[int] = None) -> StateVector:
    """Coerce amplitudes to a ``StateVector`` and optionally check its qubit count."""
    state = value if isinstance(value, StateVector) else StateVector(value)
    if n_qubits is not None and state.n_qubits != n_qubits:
        raise DimensionMismatchError(
            f"Expected a state on {n_qubits} qubits, got {state.n_qubits}"
        )
    return state

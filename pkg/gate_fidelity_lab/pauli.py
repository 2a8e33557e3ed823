"""Exact algebra of n-qubit Pauli strings on x/z bitmasks.

A string is stored as two n-bit integers.  Qubit q lives at bit ``n-1-q``
of both masks, so qubit 0 is the most significant bit of a canonical basis
index and the leftmost letter of the text label.  Per qubit:

    (x, z) = (0, 0) -> 1    (1, 0) -> X    (0, 1) -> Z    (1, 1) -> Y

and the operator is W = i^{|x & z|} X^x Z^z, which is Hermitian with
eigenvalues ±1.  On a canonical basis state,

    W|b> = i^{|x & z|} (-1)^{|z & b|} |b ^ x>

so applying a string to a vector or trace-pairing it with a matrix costs
O(d) and never needs the dense 2^n x 2^n matrix.

Strings are enumerated by the index k = x * d + z, which puts the identity
at k = 0 and the Z strings at k = 1..d-1.
"""

import functools
from dataclasses import dataclass
from typing import Iterator, Tuple, Union

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    InvalidInputError,
    SelfCheckError,
    check_qubit_cap,
)
from .states import MAX_QUBITS, DensityMatrix, StateVector, qubits_for_dimension

# i^k for k = 0..3
PHASES = (1, 1j, -1, -1j)

_LETTERS = {(0, 0): "1", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {"1": (0, 0), "I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}

EXPECTATION_IMAG_TOLERANCE = 1e-10


def popcount(value: int) -> int:
    return bin(value).count("1")


def parity_array(values: np.ndarray) -> np.ndarray:
    """Bit parity of each non-negative integer in ``values`` (< 2^32), as 0/1."""
    v = np.asarray(values, dtype=np.int64).copy()
    for shift in (16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def popcount_array(values: np.ndarray) -> np.ndarray:
    """Population count of each non-negative integer in ``values`` (< 2^32)."""
    v = np.asarray(values, dtype=np.int64)
    count = np.zeros(v.shape, dtype=np.int64)
    for bit in range(32):
        count += (v >> bit) & 1
        if not np.any(v >> (bit + 1)):
            break
    return count


@dataclass(frozen=True)
class PauliString:
    """An n-qubit tensor product of {1, X, Y, Z}.

    Attributes:
        n_qubits: Number of qubits.
        x_mask:   X component, qubit q at bit n-1-q.
        z_mask:   Z component, same bit layout.
    """

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidInputError(f"n_qubits must be positive, got {self.n_qubits}")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise InvalidInputError(
                f"Masks ({self.x_mask}, {self.z_mask}) do not fit {self.n_qubits} qubits"
            )

    # -- construction --------------------------------------------------------

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_index(cls, n_qubits: int, index: int) -> "PauliString":
        dim = 1 << n_qubits
        if not 0 <= index < dim * dim:
            raise InvalidInputError(f"Pauli index {index} out of range for n={n_qubits}")
        return cls(n_qubits, index // dim, index % dim)

    @classmethod
    def parse(cls, label: str) -> "PauliString":
        """Parse a label such as ``"XZ1Y"`` (qubit 0 leftmost; ``I`` is accepted for 1)."""
        text = label.strip().upper()
        if not text:
            raise InvalidInputError("Empty Pauli label")
        n = len(text)
        x_mask = z_mask = 0
        for q, letter in enumerate(text):
            if letter not in _BITS:
                raise InvalidInputError(f"Invalid Pauli letter {letter!r} in {label!r}")
            x_bit, z_bit = _BITS[letter]
            x_mask |= x_bit << (n - 1 - q)
            z_mask |= z_bit << (n - 1 - q)
        return cls(n, x_mask, z_mask)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, letter: str) -> "PauliString":
        """The string with ``letter`` on ``qubit`` and identity elsewhere."""
        if not 0 <= qubit < n_qubits:
            raise InvalidInputError(f"Qubit {qubit} out of range for n={n_qubits}")
        x_bit, z_bit = _BITS[letter.upper()]
        shift = n_qubits - 1 - qubit
        return cls(n_qubits, x_bit << shift, z_bit << shift)

    # -- views ---------------------------------------------------------------

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def index(self) -> int:
        return self.x_mask * self.dim + self.z_mask

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def weight(self) -> int:
        """Number of non-identity letters."""
        return popcount(self.x_mask | self.z_mask)

    @property
    def label(self) -> str:
        n = self.n_qubits
        return "".join(
            _LETTERS[((self.x_mask >> (n - 1 - q)) & 1, (self.z_mask >> (n - 1 - q)) & 1)]
            for q in range(n)
        )

    def letter(self, qubit: int) -> str:
        shift = self.n_qubits - 1 - qubit
        return _LETTERS[((self.x_mask >> shift) & 1, (self.z_mask >> shift) & 1)]

    def __str__(self) -> str:
        return self.label

    # -- dense action --------------------------------------------------------

    def _coefficients(self) -> np.ndarray:
        basis = np.arange(self.dim, dtype=np.int64)
        signs = 1 - 2 * parity_array(basis & self.z_mask)
        return PHASES[popcount(self.x_mask & self.z_mask) % 4] * signs

    def apply(self, array: np.ndarray) -> np.ndarray:
        """Return W @ array for a length-d vector or a d x m grid."""
        arr = np.asarray(array)
        if arr.shape[0] != self.dim:
            raise DimensionMismatchError(
                f"Pauli string on {self.n_qubits} qubits cannot act on leading dimension {arr.shape[0]}"
            )
        coef = self._coefficients()
        if arr.ndim > 1:
            coef = coef.reshape((-1,) + (1,) * (arr.ndim - 1))
        out = np.empty(arr.shape, dtype=complex)
        out[np.arange(self.dim) ^ self.x_mask] = coef * arr
        return out

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n realization (tests and oracle only)."""
        check_qubit_cap("Dense Pauli matrix", self.n_qubits, MAX_QUBITS)
        cols = np.arange(self.dim)
        matrix = np.zeros((self.dim, self.dim), dtype=complex)
        matrix[cols ^ self.x_mask, cols] = self._coefficients()
        return matrix

    def trace_with(self, operator: np.ndarray) -> complex:
        """Return Tr[W A] for an arbitrary d x d grid A in O(d)."""
        a = np.asarray(operator)
        if a.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"Operator of shape {a.shape} does not match {self.n_qubits} qubits"
            )
        rows = np.arange(self.dim)
        return complex(np.sum(self._coefficients() * a[rows, rows ^ self.x_mask]))


def _check_same_size(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatchError(
            f"Pauli strings act on {a.n_qubits} and {b.n_qubits} qubits"
        )


def pauli_product(a: PauliString, b: PauliString) -> Tuple[PauliString, complex]:
    """Return (c, phase) with a·b = phase·c and phase in {+1, -1, +i, -i}."""
    _check_same_size(a, b)
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    exponent = (
        popcount(a.x_mask & a.z_mask)
        + popcount(b.x_mask & b.z_mask)
        - popcount(x & z)
        + 2 * popcount(a.z_mask & b.x_mask)
    ) % 4
    return PauliString(a.n_qubits, x, z), PHASES[exponent]


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic product of the two strings is even."""
    _check_same_size(a, b)
    return (popcount(a.x_mask & b.z_mask) + popcount(a.z_mask & b.x_mask)) % 2 == 0


def expectation(w: PauliString, psi: StateVector) -> float:
    """Return <psi|W|psi>."""
    if w.n_qubits != psi.n_qubits:
        raise DimensionMismatchError(
            f"Pauli string on {w.n_qubits} qubits, state on {psi.n_qubits}"
        )
    value = complex(np.vdot(psi.amplitudes, w.apply(psi.amplitudes)))
    if abs(value.imag) >= EXPECTATION_IMAG_TOLERANCE:
        raise SelfCheckError(f"<psi|W|psi> has imaginary part {value.imag:.3g}")
    return value.real


def expectation_dm(w: PauliString, rho: DensityMatrix) -> float:
    """Return Tr[W rho]."""
    if w.n_qubits != rho.n_qubits:
        raise DimensionMismatchError(
            f"Pauli string on {w.n_qubits} qubits, density matrix on {rho.n_qubits}"
        )
    value = w.trace_with(rho.entries)
    if abs(value.imag) >= EXPECTATION_IMAG_TOLERANCE:
        raise SelfCheckError(f"Tr[W rho] has imaginary part {value.imag:.3g}")
    return value.real


_LOCAL_EIGENVECTORS = {
    "1": (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
    "Z": (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
    "X": (np.array([1, 1], dtype=complex) / np.sqrt(2), np.array([1, -1], dtype=complex) / np.sqrt(2)),
    "Y": (np.array([1, 1j], dtype=complex) / np.sqrt(2), np.array([1, -1j], dtype=complex) / np.sqrt(2)),
}


def eigenstate(w: PauliString, pattern: int) -> Tuple[StateVector, int]:
    """Member ``pattern`` of the fixed product eigenbasis of ``w``.

    Bit n-1-q of ``pattern`` picks the local eigenvector on qubit q (0 for the
    +1 eigenvector, 1 for -1; identity letters use |0>, |1>).  The eigenvalue
    is the product of the local signs over non-identity letters.
    """
    if not 0 <= pattern < w.dim:
        raise InvalidInputError(f"Eigenstate pattern {pattern} out of range for n={w.n_qubits}")
    n = w.n_qubits
    factors = [
        _LOCAL_EIGENVECTORS[w.letter(q)][(pattern >> (n - 1 - q)) & 1] for q in range(n)
    ]
    amplitudes = functools.reduce(np.kron, factors)
    eigenvalue = 1 - 2 * (popcount(pattern & (w.x_mask | w.z_mask)) % 2)
    return StateVector(amplitudes), eigenvalue


def eigenbasis(w: PauliString) -> Tuple[np.ndarray, np.ndarray]:
    """All d product eigenstates of ``w`` as rows (row a is ``eigenstate(w, a)``) and their eigenvalues."""
    n = w.n_qubits
    locals_ = [np.array(_LOCAL_EIGENVECTORS[w.letter(q)]) for q in range(n)]
    rows = functools.reduce(np.kron, locals_)
    patterns = np.arange(w.dim, dtype=np.int64)
    eigenvalues = 1 - 2 * parity_array(patterns & (w.x_mask | w.z_mask))
    return rows, eigenvalues


def sample_eigenstate(w: PauliString, rng: np.random.Generator) -> Tuple[StateVector, int]:
    """Uniformly random member of the product eigenbasis of ``w`` with its eigenvalue."""
    return eigenstate(w, int(rng.integers(w.dim)))


def all_paulis(n_qubits: int) -> Iterator[PauliString]:
    """All 4^n strings in index order (identity first)."""
    dim = 1 << n_qubits
    for x in range(dim):
        for z in range(dim):
            yield PauliString(n_qubits, x, z)


@functools.lru_cache(maxsize=16)
def _spectrum_tables(dim: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    idx = np.arange(dim, dtype=np.int64)
    hadamard = scipy.linalg.hadamard(dim).astype(float)
    phase = np.asarray(PHASES)[popcount_array(idx[:, None] & idx[None, :]) % 4]
    xor = idx[:, None] ^ idx[None, :]
    for table in (hadamard, phase, xor):
        table.setflags(write=False)
    return hadamard, phase, xor


def pauli_spectrum(operator: np.ndarray) -> np.ndarray:
    """Return Tr[W_k A] for all d^2 strings, indexed by k = x*d + z.

    Works on a single d x d grid or a stack of shape (m, d, d); a stack
    yields shape (m, d^2).  The z-sum is a Sylvester-Hadamard transform, so
    the whole spectrum costs O(d^3) per operator.
    """
    a = np.asarray(operator, dtype=complex)
    single = a.ndim == 2
    if single:
        a = a[None]
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise InvalidInputError(f"Expected d x d grid(s), got shape {np.shape(operator)}")
    dim = a.shape[1]
    qubits_for_dimension(dim)
    hadamard, phase, xor = _spectrum_tables(dim)
    cols = np.arange(dim)
    # shifted[m, x, c] = A_m[c, c ^ x]
    shifted = a[:, cols[None, :], xor]
    spectrum = (shifted @ hadamard) * phase
    spectrum = spectrum.reshape(a.shape[0], dim * dim)
    return spectrum[0] if single else spectrum


def pure_state_spectrum(amplitudes: np.ndarray) -> np.ndarray:
    """Return <phi|W_k|phi> for every string, for one state or a stack of states (rows)."""
    phi = np.asarray(amplitudes, dtype=complex)
    single = phi.ndim == 1
    if single:
        phi = phi[None]
    dim = phi.shape[1]
    qubits_for_dimension(dim)
    hadamard, phase, xor = _spectrum_tables(dim)
    # shifted[m, x, c] = conj(phi_m[c ^ x]) * phi_m[c]
    shifted = phi[:, None, :] * phi[:, xor].conj()
    spectrum = (shifted @ hadamard) * phase
    spectrum = spectrum.reshape(phi.shape[0], dim * dim)
    return spectrum[0] if single else spectrum


def as_pauli(value: Union[PauliString, str], n_qubits: int = 0) -> PauliString:
    """Coerce a label to a ``PauliString``, checking the qubit count when given."""
    w = value if isinstance(value, PauliString) else PauliString.parse(value)
    if n_qubits and w.n_qubits != n_qubits:
        raise DimensionMismatchError(f"Expected a {n_qubits}-qubit string, got {w.label}")
    return w

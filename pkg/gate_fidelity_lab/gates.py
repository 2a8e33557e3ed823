"""Named target gates.

Single-qubit gates are applied to every qubit as a tensor power; two- and
three-qubit gates act on the leading qubits (0, 1 and 0, 1, 2) with the
identity elsewhere.  ``QFT`` is the quantum Fourier transform on all qubits.
"""

import functools
from typing import Any, Callable, Dict, Mapping, Tuple

import numpy as np

from .errors import InvalidInputError

_SQRT_HALF = 1.0 / np.sqrt(2.0)

SINGLE_QUBIT: Dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": _SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
}

_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def operator_on(local: Mapping[int, np.ndarray], n: int) -> np.ndarray:
    """Tensor product placing ``local[q]`` on qubit q (qubit 0 leftmost) and 1 elsewhere."""
    factors = [local.get(q, SINGLE_QUBIT["I"]) for q in range(n)]
    return functools.reduce(np.kron, factors)


def tensor_power(gate: np.ndarray, n: int) -> np.ndarray:
    return operator_on({q: gate for q in range(n)}, n)


def controlled(control: int, target: int, gate: np.ndarray, n: int) -> np.ndarray:
    """|0><0| on ``control`` plus |1><1| on ``control`` with ``gate`` on ``target``."""
    return operator_on({control: _P0}, n) + operator_on({control: _P1, target: gate}, n)


def cnot(control: int, target: int, n: int) -> np.ndarray:
    return controlled(control, target, SINGLE_QUBIT["X"], n)


def cz(a: int, b: int, n: int) -> np.ndarray:
    return controlled(a, b, SINGLE_QUBIT["Z"], n)


def swap(a: int, b: int, n: int) -> np.ndarray:
    return cnot(a, b, n) @ cnot(b, a, n) @ cnot(a, b, n)


def toffoli(c1: int, c2: int, target: int, n: int) -> np.ndarray:
    both = operator_on({c1: _P1, c2: _P1}, n)
    flipped = operator_on({c1: _P1, c2: _P1, target: SINGLE_QUBIT["X"]}, n)
    return np.eye(1 << n, dtype=complex) - both + flipped


def qft(n: int) -> np.ndarray:
    dim = 1 << n
    idx = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(idx, idx) / dim) / np.sqrt(dim)


# Registry of named gates: name -> (description, minimum qubit count, constructor)
NAMED_GATES: Dict[str, Tuple[str, int, Callable[[int], np.ndarray]]] = {
    "I": ("Identity on every qubit", 1, lambda n: tensor_power(SINGLE_QUBIT["I"], n)),
    "X": ("Pauli X on every qubit", 1, lambda n: tensor_power(SINGLE_QUBIT["X"], n)),
    "Y": ("Pauli Y on every qubit", 1, lambda n: tensor_power(SINGLE_QUBIT["Y"], n)),
    "Z": ("Pauli Z on every qubit", 1, lambda n: tensor_power(SINGLE_QUBIT["Z"], n)),
    "H": ("Hadamard on every qubit (Clifford)", 1, lambda n: tensor_power(SINGLE_QUBIT["H"], n)),
    "S": ("Phase gate diag(1, i) on every qubit (Clifford)", 1, lambda n: tensor_power(SINGLE_QUBIT["S"], n)),
    "T": ("pi/8 gate diag(1, e^{i pi/4}) on every qubit (not Clifford)", 1,
          lambda n: tensor_power(SINGLE_QUBIT["T"], n)),
    "CNOT": ("Controlled NOT, control qubit 0, target qubit 1 (Clifford)", 2, lambda n: cnot(0, 1, n)),
    "CZ": ("Controlled Z on qubits 0 and 1 (Clifford)", 2, lambda n: cz(0, 1, n)),
    "SWAP": ("Swap of qubits 0 and 1 (Clifford)", 2, lambda n: swap(0, 1, n)),
    "TOFFOLI": ("Doubly controlled NOT, controls 0 and 1, target 2 (not Clifford)", 3,
                lambda n: toffoli(0, 1, 2, n)),
    "QFT": ("Quantum Fourier transform on all qubits", 1, qft),
}


def named_gate(name: str, n: int) -> np.ndarray:
    """Return the d x d grid of the named gate on ``n`` qubits."""
    key = name.upper()
    if key not in NAMED_GATES:
        raise InvalidInputError(
            f"Unknown gate '{name}'. Available gates: {', '.join(NAMED_GATES)}"
        )
    description, min_qubits, constructor = NAMED_GATES[key]
    if n < min_qubits:
        raise InvalidInputError(f"Gate {key} needs at least {min_qubits} qubits, got n={n}")
    return constructor(n)


def unitary_from_pairs(grid: Any) -> np.ndarray:
    """Decode a nested grid of ``[re, im]`` pairs into a complex array."""
    try:
        arr = np.array(grid, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"Unitary entries must be [re, im] pairs: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise InvalidInputError(f"Unitary must be a grid of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def build_gate(descriptor: Any, n: int) -> np.ndarray:
    """Resolve a config ``gate`` value to a d x d grid.

    Accepts a gate name, ``{"unitary": [[[re, im], ...], ...]}`` or
    ``{"random": "unitary" | "clifford", "seed": int, "depth": int}``.
    """
    if isinstance(descriptor, str):
        return named_gate(descriptor, n)
    if not isinstance(descriptor, Mapping):
        raise InvalidInputError(f"Cannot interpret gate descriptor {descriptor!r}")
    if "unitary" in descriptor:
        u = unitary_from_pairs(descriptor["unitary"])
        if u.shape != (1 << n, 1 << n):
            raise InvalidInputError(f"Explicit unitary has shape {u.shape}, expected {(1 << n, 1 << n)}")
        return u
    if "random" in descriptor:
        from .factory import random_clifford_circuit, random_unitary
        rng = np.random.default_rng(int(descriptor.get("seed", 0)))
        if descriptor["random"] == "clifford":
            return random_clifford_circuit(n, rng, depth=int(descriptor.get("depth", 4 * n)))
        return random_unitary(n, rng)
    raise InvalidInputError(f"Gate descriptor needs a name, 'unitary' or 'random': {dict(descriptor)!r}")

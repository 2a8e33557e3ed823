"""Exact reference values by brute force.

Everything here is a direct dense evaluation of the defining sums, written
against the Kraus operators and dense Pauli matrices rather than the fast
spectra the estimators use.  The functions are meant for small n: they check
the estimators, they are not an alternative to them.
"""

import logging
import math
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .channels import QuantumChannel, check_unitary
from .errors import DimensionMismatchError, check_qubit_cap
from .mub import MubFamily, build_mub_family
from .pauli import PauliString
from .states import StateVector, qubits_for_dimension

logger = logging.getLogger(__name__)

CLASSICAL_ORACLE_QUBIT_CAP = 8
TWO_DESIGN_ORACLE_QUBIT_CAP = 6
ENTANGLEMENT_ORACLE_QUBIT_CAP = 6
STATE_MOMENTS_QUBIT_CAP = 3
PROCESS_MOMENTS_QUBIT_CAP = 2

# Pauli strings pushed through the channel at once by the entanglement-fidelity sum.
_PAULI_CHUNK = 64


def _check_pair(unitary: Any, channel: QuantumChannel) -> Tuple[np.ndarray, int]:
    u = check_unitary(unitary)
    if channel.dim != u.shape[0]:
        raise DimensionMismatchError(
            f"Unitary of dimension {u.shape[0]}, channel on {channel.n_qubits} qubits"
        )
    return u, qubits_for_dimension(u.shape[0])


def _pure_state_fidelities(u: np.ndarray, channel: QuantumChannel, grid: np.ndarray) -> np.ndarray:
    """<psi|U^dagger D(|psi><psi|) U|psi> for every column psi of ``grid``.

    With Kraus operators this is sum_m |<psi| U^dagger K_m |psi>|^2.
    """
    left = grid.conj().T @ u.conj().T
    overlaps = np.einsum("ia,mab,bi->mi", left, channel.kraus_ops, grid)
    return np.sum(np.abs(overlaps) ** 2, axis=0)


def exact_classical_fidelity(
    unitary: Any,
    channel: QuantumChannel,
    basis: Union[Sequence[StateVector], np.ndarray],
) -> float:
    """F_j = (1/d) sum_i Tr[U P_i U^dagger D(P_i)] over the basis projectors P_i."""
    u, n = _check_pair(unitary, channel)
    check_qubit_cap("Classical-fidelity oracle", n, CLASSICAL_ORACLE_QUBIT_CAP)
    if isinstance(basis, np.ndarray):
        grid = np.asarray(basis, dtype=complex)
    else:
        grid = np.column_stack([s.amplitudes for s in basis])
    if grid.shape != u.shape:
        raise DimensionMismatchError(f"Basis of shape {grid.shape} does not match dimension {u.shape[0]}")
    return math.fsum(_pure_state_fidelities(u, channel, grid).tolist()) / u.shape[0]


def exact_two_design_favg(unitary: Any, channel: QuantumChannel, family: Optional[MubFamily] = None) -> float:
    """F_av as the average output fidelity over all d(d+1) states of the MUB family."""
    u, n = _check_pair(unitary, channel)
    check_qubit_cap("Two-design oracle", n, TWO_DESIGN_ORACLE_QUBIT_CAP)
    family = family or build_mub_family(n)
    if family.n_qubits != n:
        raise DimensionMismatchError(f"MUB family on {family.n_qubits} qubits, unitary on {n}")
    values = []
    for grid in family.matrices:
        values.extend(_pure_state_fidelities(u, channel, grid).tolist())
    return math.fsum(values) / len(values)


def exact_entanglement_fidelity(unitary: Any, channel: QuantumChannel) -> float:
    """F_e = (1/d^3) sum_i Tr[(U W_i U^dagger)^dagger D(W_i)] over all d^2 Pauli strings."""
    u, n = _check_pair(unitary, channel)
    check_qubit_cap("Entanglement-fidelity oracle", n, ENTANGLEMENT_ORACLE_QUBIT_CAP)
    dim = u.shape[0]
    kraus = channel.kraus_ops
    kraus_dag = kraus.conj().transpose(0, 2, 1)
    terms = []
    for start in range(0, dim * dim, _PAULI_CHUNK):
        stack = np.array([
            PauliString.from_index(n, k).to_matrix()
            for k in range(start, min(start + _PAULI_CHUNK, dim * dim))
        ])
        ideal = u @ stack @ u.conj().T
        actual = np.einsum("mab,sbc,mcd->sad", kraus, stack, kraus_dag)
        terms.extend(np.einsum("sba,sba->s", ideal.conj(), actual).real.tolist())
    return math.fsum(terms) / dim ** 3


def entanglement_fidelity_kraus(unitary: Any, channel: QuantumChannel) -> float:
    """F_e = (1/d^2) sum_m |Tr[U^dagger K_m]|^2, valid at any n the channel fits in memory."""
    u, _ = _check_pair(unitary, channel)
    traces = np.einsum("ba,mba->m", u.conj(), channel.kraus_ops)
    return math.fsum((np.abs(traces) ** 2).tolist()) / u.shape[0] ** 2


def favg_from_fe(f_e: float, dim: int) -> float:
    """F_av = (d F_e + 1)/(d + 1)."""
    return (dim * f_e + 1.0) / (dim + 1.0)


def fe_from_favg(f_av: float, dim: int) -> float:
    return ((dim + 1.0) * f_av - 1.0) / dim


def exact_moments(dist: Any, channel: QuantumChannel) -> Tuple[float, float]:
    """Mean and variance of X = chi_D / chi_U over a relevance distribution.

    ``dist`` is an estimators ``RelevanceDistribution``; only its entries are
    read, and chi_D is recomputed here from dense matrices.
    """
    n = dist.n_qubits
    if channel.n_qubits != n:
        raise DimensionMismatchError(f"Distribution on {n} qubits, channel on {channel.n_qubits}")
    dim = 1 << n
    kraus = channel.kraus_ops
    kraus_dag = kraus.conj().transpose(0, 2, 1)
    outputs: Dict[int, np.ndarray] = {}
    if dist.input_states is None:
        check_qubit_cap("Process moments", n, PROCESS_MOMENTS_QUBIT_CAP)
    else:
        check_qubit_cap("State moments", n, STATE_MOMENTS_QUBIT_CAP)

    first, second = [], []
    for entry in range(len(dist)):
        i = int(dist.input_index[entry])
        if i not in outputs:
            if dist.input_states is None:
                source = PauliString.from_index(n, i).to_matrix()
            else:
                psi = np.asarray(dist.input_states[i])
                source = np.outer(psi, psi.conj())
            outputs[i] = np.einsum("mab,bc,mcd->ad", kraus, source, kraus_dag)
        w = PauliString.from_index(n, int(dist.pauli_index[entry])).to_matrix()
        chi_d = np.trace(w @ outputs[i]).real
        if dist.input_states is None:
            chi_d /= dim
        x = chi_d / float(dist.chi[entry])
        p = float(dist.probabilities[entry])
        first.append(p * x)
        second.append(p * x * x)
    mean = math.fsum(first)
    return mean, math.fsum(second) - mean * mean


def exact_fidelities(
    unitary: Any,
    channel: QuantumChannel,
    family: Optional[MubFamily] = None,
    bases: Tuple[int, int] = (0, 1),
) -> Dict[str, float]:
    """Every exact value the reports compare against, as far as the oracle caps allow.

    Keys: ``f_e`` and ``f_av`` always; ``f_av_two_design`` for n <= 6;
    ``f1``/``f2`` (the classical fidelities of ``bases``) and the Hofmann
    interval ``lower``/``upper`` for n <= 8.
    """
    u, n = _check_pair(unitary, channel)
    dim = u.shape[0]
    if n <= 3:
        f_e = exact_entanglement_fidelity(u, channel)
    else:
        f_e = entanglement_fidelity_kraus(u, channel)
    values = {"f_e": f_e, "f_av": favg_from_fe(f_e, dim)}
    if n <= TWO_DESIGN_ORACLE_QUBIT_CAP:
        family = family or build_mub_family(n)
        values["f_av_two_design"] = exact_two_design_favg(u, channel, family)
    if n <= CLASSICAL_ORACLE_QUBIT_CAP:
        family = family or build_mub_family(n)
        f1 = exact_classical_fidelity(u, channel, family.matrices[bases[0]])
        f2 = exact_classical_fidelity(u, channel, family.matrices[bases[1]])
        values["f1"], values["f2"] = f1, f2
        values["lower"] = favg_from_fe(max(0.0, f1 + f2 - 1.0), dim)
        values["upper"] = favg_from_fe(min(f1, f2), dim)
    logger.info("Exact fidelities for n=%d: F_av=%.9f", n, values["f_av"])
    return values

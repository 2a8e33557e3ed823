"""Monte Carlo estimation of gate fidelities.

Three protocols estimate how well a noisy evolution D realizes a target
unitary U:

- ``A``: input and measurement operators are Pauli strings (the
  channel-state isomorphism); estimates the entanglement fidelity F_e and
  converts it to F_av = (d F_e + 1)/(d + 1).
- ``B``: inputs are the d(d+1) states of the mutually unbiased bases, a
  state two-design; estimates F_av directly.
- ``C``: two classical fidelities F_1, F_2 over a pair of unbiased bases,
  which bound F_av from both sides.

Each protocol samples settings (input i, measurement W_k) from a relevance
distribution Pr(i, k) proportional to chi_U(i, k)^2, where chi_U is the ideal
expectation of W_k.  The Monte Carlo variable X = chi_D / chi_U then has mean
equal to the target fidelity and variance at most one.

Sample sizing: L = ceil(1/(eps^2 delta)) settings (Chebyshev) and
N_l = ceil(2 ln(2/delta) / (L eps^2 chi^2)) shots per setting (Hoeffding).
The shot formula uses eps^2; with it, the Hoeffding tail evaluates to
exactly delta.

Shots are simulated in aggregate: N_l Bernoulli outcomes are one binomial
draw, and protocol A spreads its shots uniformly over the eigenstates of the
input operator with a multinomial draw.  All randomness comes from
``RandomStreams`` substreams keyed by plan position, so results do not
depend on thread count or scheduling.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .channels import QuantumChannel, apply, apply_adjoint, apply_operator, check_unitary
from .errors import (
    DimensionMismatchError,
    InvalidInputError,
    SelfCheckError,
    check_qubit_cap,
)
from .mub import MubFamily, build_mub_family, classical_bases
from .pauli import (
    PauliString,
    eigenbasis,
    expectation_dm,
    pauli_spectrum,
    pure_state_spectrum,
)
from .rng import RandomStreams
from .states import MAX_QUBITS, StateVector, qubits_for_dimension

logger = logging.getLogger(__name__)

PROTOCOLS = ("A", "B", "C")

# Settings whose ideal expectation is below this are never drawn.
CHI_TOLERANCE = 1e-10
NORMALIZATION_TOLERANCE = 1e-9
PROBABILITY_TOLERANCE = 1e-8

# Dense enumeration limits of the relevance distributions.
PROCESS_QUBIT_CAP = 5
TWO_DESIGN_QUBIT_CAP = 6
CLASSICAL_QUBIT_CAP = 7

# Absolute slack that keeps ceil() from rounding 1000.0000000000001 up to 1001.
_CEIL_SLACK = 1e-9
_MAX_SHOTS = np.iinfo(np.int64).max

SHOTS_FINITE = "finite"
SHOTS_INFINITE = "infinite"
SAMPLING_MONTE_CARLO = "monte-carlo"
SAMPLING_EXHAUSTIVE = "exhaustive"


# ---------------------------------------------------------------------------
# Relevance distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RelevanceDistribution:
    """Sampling distribution Pr(i, k) over the settings of one protocol.

    Entries are listed in enumeration order (input-major, then Pauli index)
    and settings with |chi_U| <= 1e-10 are omitted.

    Attributes:
        protocol:         ``"A"``, ``"B"``, ``"C1"`` or ``"C2"``.
        n_qubits:         Number of qubits.
        event_space_size: Number of settings before pruning (T).
        input_labels:     Report label per input (Pauli label or ``basis[i]``).
        input_states:     Input amplitudes as rows (B, C); None for A.
        input_index:      Input of each entry.
        pauli_index:      Measurement string index k of each entry.
        probabilities:    Pr of each entry.
        chi:              Ideal characteristic function chi_U of each entry.
    """

    protocol: str
    n_qubits: int
    event_space_size: int
    input_labels: Tuple[str, ...]
    input_states: Optional[np.ndarray]
    input_index: np.ndarray
    pauli_index: np.ndarray
    probabilities: np.ndarray
    chi: np.ndarray

    def __len__(self) -> int:
        return int(self.probabilities.size)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def operator_inputs(self) -> bool:
        return self.input_states is None

    def total(self) -> float:
        return math.fsum(self.probabilities.tolist())

    def input_state(self, i: int) -> StateVector:
        if self.input_states is None:
            raise InvalidInputError("Protocol A inputs are Pauli operators, not states")
        return StateVector(self.input_states[i])

    def input_operator(self, i: int) -> PauliString:
        if self.input_states is not None:
            raise InvalidInputError(f"Protocol {self.protocol} inputs are states, not operators")
        return PauliString.from_index(self.n_qubits, i)

    def measurement(self, entry: int) -> PauliString:
        return PauliString.from_index(self.n_qubits, int(self.pauli_index[entry]))

    def support_per_input(self) -> Dict[int, int]:
        """Number of nonzero entries for every input that has any."""
        inputs, counts = np.unique(self.input_index, return_counts=True)
        return {int(i): int(c) for i, c in zip(inputs, counts)}


def _basis_matrix(basis: Union[Sequence[StateVector], np.ndarray], dim: int) -> np.ndarray:
    if isinstance(basis, np.ndarray):
        grid = np.asarray(basis, dtype=complex)
    else:
        grid = np.column_stack([s.amplitudes for s in basis])
    if grid.shape != (dim, dim):
        raise DimensionMismatchError(f"Basis of shape {grid.shape} does not match dimension {dim}")
    return grid


def _assemble(
    protocol: str,
    n: int,
    event_space_size: int,
    labels: Sequence[str],
    states: Optional[np.ndarray],
    chi_blocks: Sequence[Tuple[int, np.ndarray]],
    normalization: float,
) -> RelevanceDistribution:
    """Prune and normalize per-block chi grids (block offset, rows x d^2)."""
    inputs, paulis, chis = [], [], []
    for offset, block in chi_blocks:
        if np.max(np.abs(block.imag), initial=0.0) > 1e-8:
            raise SelfCheckError(f"Characteristic function of protocol {protocol} is not real")
        real = block.real
        rows, cols = np.nonzero(np.abs(real) > CHI_TOLERANCE)
        inputs.append(rows + offset)
        paulis.append(cols)
        chis.append(real[rows, cols])
    chi = np.concatenate(chis)
    probabilities = chi ** 2 / normalization
    for arr in (chi, probabilities):
        arr.setflags(write=False)
    dist = RelevanceDistribution(
        protocol=protocol,
        n_qubits=n,
        event_space_size=event_space_size,
        input_labels=tuple(labels),
        input_states=states,
        input_index=np.concatenate(inputs).astype(np.int64),
        pauli_index=np.concatenate(paulis).astype(np.int64),
        probabilities=probabilities,
        chi=chi,
    )
    total = dist.total()
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise SelfCheckError(f"Relevance distribution {protocol} sums to {total!r}")
    logger.debug(
        "Relevance distribution %s: n=%d, T=%d, support=%d",
        protocol, n, event_space_size, len(dist),
    )
    return dist


def relevance_classical(
    unitary: Any,
    basis: Union[Sequence[StateVector], np.ndarray],
    protocol: str = "C1",
    basis_label: str = "Z",
) -> RelevanceDistribution:
    """Pr^j(i, k) = chi^j_U(i, k)^2 / d^2 over one orthonormal basis."""
    u = check_unitary(unitary)
    dim = u.shape[0]
    n = qubits_for_dimension(dim)
    check_qubit_cap("Classical-fidelity distribution", n, CLASSICAL_QUBIT_CAP)
    grid = _basis_matrix(basis, dim)
    states = grid.T.copy()
    states.setflags(write=False)
    chi = pure_state_spectrum(states @ u.T)
    labels = [f"{basis_label}[{i}]" for i in range(dim)]
    return _assemble(protocol, n, dim ** 3, labels, states, [(0, chi)], float(dim * dim))


def relevance_two_design(unitary: Any, family: Optional[MubFamily] = None) -> RelevanceDistribution:
    """Pr(i, k) = chi_U(i, k)^2 / (d^2 (d+1)) over all d(d+1) MUB states."""
    u = check_unitary(unitary)
    dim = u.shape[0]
    n = qubits_for_dimension(dim)
    check_qubit_cap("Two-design distribution", n, TWO_DESIGN_QUBIT_CAP)
    family = family or build_mub_family(n)
    if family.n_qubits != n:
        raise DimensionMismatchError(f"MUB family on {family.n_qubits} qubits, unitary on {n}")
    blocks = []
    labels: List[str] = []
    for j, grid in enumerate(family.matrices):
        blocks.append((j * dim, pure_state_spectrum(grid.T @ u.T)))
        labels.extend(f"{family.labels[j]}[{i}]" for i in range(dim))
    states = family.all_states()
    states.setflags(write=False)
    return _assemble(
        "B", n, dim * (dim + 1) * dim * dim, labels, states, blocks, float(dim * dim * (dim + 1)),
    )


def relevance_process(unitary: Any) -> RelevanceDistribution:
    """Pr(i, k) = chi_U(i, k)^2 / d^2 with chi_U(i, k) = Tr[W_k U W_i U^dagger] / d."""
    u = check_unitary(unitary)
    dim = u.shape[0]
    n = qubits_for_dimension(dim)
    check_qubit_cap("Process distribution", n, PROCESS_QUBIT_CAP)
    u_dag = u.conj().T
    blocks = []
    for x in range(dim):
        images = np.array([u @ PauliString(n, x, z).apply(u_dag) for z in range(dim)])
        blocks.append((x * dim, pauli_spectrum(images) / dim))
    labels = [PauliString.from_index(n, i).label for i in range(dim * dim)]
    return _assemble("A", n, dim ** 4, labels, None, blocks, float(dim * dim))


# ---------------------------------------------------------------------------
# Sample sizing
# ---------------------------------------------------------------------------

def _check_accuracy(epsilon: float, delta: float) -> None:
    if not 0.0 < epsilon <= 1.0:
        raise InvalidInputError(f"epsilon must lie in (0, 1], got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise InvalidInputError(f"delta must lie in (0, 1), got {delta}")


def _tolerant_ceil(value: float) -> int:
    return math.ceil(value - _CEIL_SLACK)


def chebyshev_L(epsilon: float, delta: float) -> int:
    """Number of settings L = ceil(1/(eps^2 delta))."""
    _check_accuracy(epsilon, delta)
    return max(1, _tolerant_ceil(1.0 / (epsilon * epsilon * delta)))


def hoeffding_shots(chi: float, L: int, epsilon: float, delta: float) -> int:
    """Shots N_l = ceil(2 ln(2/delta) / (L eps^2 chi^2)), at least 1."""
    _check_accuracy(epsilon, delta)
    if L < 1:
        raise InvalidInputError(f"L must be at least 1, got {L}")
    if chi == 0.0 or not abs(chi) <= 1.0 + 1e-9:
        raise InvalidInputError(f"|chi| must lie in (0, 1], got {chi}")
    shots = max(1, _tolerant_ceil(2.0 * math.log(2.0 / delta) / (L * epsilon ** 2 * chi ** 2)))
    if shots > _MAX_SHOTS:
        raise InvalidInputError(f"Shot count {shots} for chi={chi:g} exceeds the 64-bit range")
    return shots


def _shot_counts(chi: np.ndarray, L: int, epsilon: float, delta: float) -> np.ndarray:
    raw = 2.0 * math.log(2.0 / delta) / (L * epsilon ** 2 * chi ** 2)
    raw = np.ceil(raw - _CEIL_SLACK)
    if np.any(raw > float(_MAX_SHOTS) / 2):
        raise InvalidInputError("A shot count exceeds the 64-bit range; |chi| is too small")
    return np.maximum(1, raw).astype(np.int64)


# ---------------------------------------------------------------------------
# Plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SamplePlan:
    """L settings drawn i.i.d. from a relevance distribution.

    ``entries[l]`` indexes the distribution; the other arrays are that
    entry's input, measurement, chi_U and the shot count N_l.
    """

    protocol: str
    epsilon: float
    delta: float
    L: int
    entries: np.ndarray
    input_index: np.ndarray
    pauli_index: np.ndarray
    chi: np.ndarray
    shots: np.ndarray

    @property
    def total_shots(self) -> int:
        return sum(int(s) for s in self.shots)

    def records(self):
        """Yield (l, i_l, k_l, chi_U, N_l) per plan position."""
        for l in range(self.L):
            yield (l, int(self.input_index[l]), int(self.pauli_index[l]),
                   float(self.chi[l]), int(self.shots[l]))


def draw_plan(
    dist: RelevanceDistribution,
    epsilon: float,
    delta: float,
    rng: Union[RandomStreams, np.random.Generator, int],
    L: Optional[int] = None,
) -> SamplePlan:
    """Draw L settings with replacement by inverse CDF over the entries sorted by (input, measurement)."""
    if len(dist) == 0:
        raise InvalidInputError(f"Relevance distribution {dist.protocol} is empty")
    L = chebyshev_L(epsilon, delta) if L is None else int(L)
    if L < 1:
        raise InvalidInputError(f"L must be at least 1, got {L}")
    if isinstance(rng, np.random.Generator):
        uniforms = rng.random(L)
    else:
        streams = rng if isinstance(rng, RandomStreams) else RandomStreams(int(rng))
        uniforms = streams.plan_uniforms(dist.protocol, L)
    # support sorted by (input, measurement); lexsort is stable for ties
    order = np.lexsort((dist.pauli_index, dist.input_index))
    cdf = np.cumsum(dist.probabilities[order])
    slots = np.searchsorted(cdf, uniforms * cdf[-1], side="right")
    entries = order[np.minimum(slots, len(dist) - 1)]
    chi = dist.chi[entries]
    plan = SamplePlan(
        protocol=dist.protocol,
        epsilon=float(epsilon),
        delta=float(delta),
        L=L,
        entries=entries,
        input_index=dist.input_index[entries],
        pauli_index=dist.pauli_index[entries],
        chi=chi,
        shots=_shot_counts(chi, L, epsilon, delta),
    )
    logger.info("Plan %s: L=%d, total shots=%d", dist.protocol, L, plan.total_shots)
    return plan


# ---------------------------------------------------------------------------
# Shots
# ---------------------------------------------------------------------------

def _plus_probability(expectation: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    p = (1.0 + np.asarray(expectation, dtype=float)) / 2.0
    if np.any(p < -PROBABILITY_TOLERANCE) or np.any(p > 1.0 + PROBABILITY_TOLERANCE):
        raise SelfCheckError(f"Outcome probability {p} outside [0, 1]; the channel is broken")
    p = np.clip(p, 0.0, 1.0)
    return float(p) if p.ndim == 0 else p


def simulate_shot(
    channel: QuantumChannel,
    state: StateVector,
    w: PauliString,
    rng: np.random.Generator,
) -> int:
    """One +-1 outcome of measuring ``w`` on D(|state><state|)."""
    if w.is_identity:
        return 1
    rho = state.projector()
    p = _plus_probability(expectation_dm(w, apply(channel, rho)))
    return 1 if rng.random() < p else -1


def simulate_shots(
    channel: QuantumChannel,
    state: StateVector,
    w: PauliString,
    shots: int,
    rng: np.random.Generator,
) -> int:
    """Sum of ``shots`` outcomes of ``simulate_shot``, drawn as one binomial."""
    if shots < 1:
        raise InvalidInputError(f"Shot count must be positive, got {shots}")
    if w.is_identity:
        return int(shots)
    out = apply_operator(channel, np.outer(state.amplitudes, state.amplitudes.conj()))
    return _sum_outcomes(w, w.trace_with(out).real, shots, rng)


def _sum_outcomes(w: PauliString, expectation: float, shots: int, rng: np.random.Generator) -> int:
    if w.is_identity:
        return int(shots)
    return 2 * int(rng.binomial(shots, _plus_probability(expectation))) - int(shots)


class _SettingEvaluator:
    """Evaluates X for groups of plan positions that share one channel application.

    States (B, C) are grouped by input and use D(|psi><psi|); operators (A)
    are grouped by measurement and use the Heisenberg image D^dagger(W_k).
    """

    def __init__(self, dist: RelevanceDistribution, channel: QuantumChannel,
                 streams: Optional[RandomStreams], infinite: bool):
        self.dist = dist
        self.channel = channel
        self.streams = streams
        self.infinite = infinite
        self.n = dist.n_qubits

    def group_key(self, input_index: int, pauli_index: int) -> int:
        return pauli_index if self.dist.operator_inputs else input_index

    def evaluate(self, key: int, items: List[Tuple[int, int, int, float, int]]) -> List[Tuple[int, float]]:
        """items: (position, input, pauli, chi_U, shots) -> [(position, X)]."""
        if self.dist.operator_inputs:
            return self._evaluate_operator_group(key, items)
        return self._evaluate_state_group(key, items)

    def _evaluate_state_group(self, i, items):
        psi = self.dist.input_states[i]
        out = apply_operator(self.channel, np.outer(psi, psi.conj()))
        results = []
        for position, _, k, chi, shots in items:
            w = PauliString.from_index(self.n, k)
            expectation = w.trace_with(out).real
            if self.infinite:
                results.append((position, expectation / chi))
                continue
            rng = self.streams.shots(self.dist.protocol, position)
            total = _sum_outcomes(w, expectation, shots, rng)
            results.append((position, total / (shots * chi)))
        return results

    def _evaluate_operator_group(self, k, items):
        w_k = PauliString.from_index(self.n, k)
        heisenberg = apply_adjoint(self.channel, w_k.to_matrix())
        dim = self.dist.dim
        results = []
        for position, i, _, chi, shots in items:
            w_i = PauliString.from_index(self.n, i)
            if self.infinite:
                chi_d = w_i.trace_with(heisenberg).real / dim
                results.append((position, chi_d / chi))
                continue
            rows, eigenvalues = eigenbasis(w_i)
            per_state = np.einsum("ai,ij,aj->a", rows.conj(), heisenberg, rows).real
            rng = self.streams.shots(self.dist.protocol, position)
            counts = rng.multinomial(shots, np.full(dim, 1.0 / dim))
            if w_k.is_identity:
                plus = counts
            else:
                plus = rng.binomial(counts, _plus_probability(per_state))
            total = int(np.sum(eigenvalues * (2 * plus - counts)))
            results.append((position, total / (shots * chi)))
        return results


def _run_groups(evaluator: _SettingEvaluator, items, threads: int) -> np.ndarray:
    groups: Dict[int, list] = {}
    for item in items:
        groups.setdefault(evaluator.group_key(item[1], item[2]), []).append(item)
    keys = sorted(groups)
    if threads > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outputs = list(pool.map(lambda key: evaluator.evaluate(key, groups[key]), keys))
    else:
        outputs = [evaluator.evaluate(key, groups[key]) for key in keys]
    values = np.empty(len(items))
    for output in outputs:
        for position, x in output:
            values[position] = x
    return values


# ---------------------------------------------------------------------------
# Estimation
# ---------------------------------------------------------------------------

@dataclass
class PlanResult:
    """Outcome of one relevance distribution: a drawn plan or an exhaustive sum."""

    tag: str
    estimate: float
    x_values: np.ndarray
    total_shots: int
    plan: Optional[SamplePlan] = None
    weights: Optional[np.ndarray] = None

    @property
    def L(self) -> int:
        return self.plan.L if self.plan is not None else int(self.x_values.size)


@dataclass
class EstimateReport:
    """Estimated fidelities of one protocol run.

    ``f_av`` is the headline average fidelity: converted from F_e for A,
    direct for B and the midpoint of the bound interval for C.  Raw values
    are never clamped; ``metadata`` carries clamped copies and range flags.
    """

    protocol: str
    n_qubits: int
    epsilon: float
    delta: float
    shots_mode: str
    sampling: str
    runs: List[PlanResult]
    f_av: float
    f_e: Optional[float] = None
    f1: Optional[float] = None
    f2: Optional[float] = None
    lower: Optional[float] = None
    upper: Optional[float] = None
    exact: Dict[str, float] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def estimate(self) -> float:
        """The protocol's raw F_L: F_e for A, F_av for B, F_1 for C."""
        return self.runs[0].estimate

    @property
    def total_shots(self) -> int:
        return sum(run.total_shots for run in self.runs)

    @property
    def L(self) -> int:
        return sum(run.L for run in self.runs)


def favg_from_fe_estimate(f_e: float, dim: int) -> float:
    return (dim * f_e + 1.0) / (dim + 1.0)


def hofmann_bounds(f1: float, f2: float, dim: int) -> Tuple[float, float]:
    """Bounds on F_av from two classical fidelities over unbiased bases.

    F_e lies in [max(0, F1 + F2 - 1), min(F1, F2)] and maps to F_av through
    (d F_e + 1)/(d + 1).  Inputs outside [0, 1] (estimates can overshoot)
    are clipped for the formula and logged, not rejected.
    """
    clipped = []
    for name, value in (("F1", f1), ("F2", f2)):
        if value < 0.0 or value > 1.0:
            logger.warning("Classical fidelity %s=%.6g lies outside [0, 1]; clipped for the bounds", name, value)
        clipped.append(min(1.0, max(0.0, float(value))))
    c1, c2 = clipped
    lower_fe = max(0.0, c1 + c2 - 1.0)
    upper_fe = min(c1, c2)
    return favg_from_fe_estimate(lower_fe, dim), favg_from_fe_estimate(upper_fe, dim)


def _execute(
    dist: RelevanceDistribution,
    channel: QuantumChannel,
    epsilon: float,
    delta: float,
    streams: RandomStreams,
    shots_mode: str,
    sampling: str,
    threads: int,
    L: Optional[int] = None,
) -> PlanResult:
    if sampling == SAMPLING_EXHAUSTIVE:
        evaluator = _SettingEvaluator(dist, channel, None, infinite=True)
        items = [
            (e, int(dist.input_index[e]), int(dist.pauli_index[e]), float(dist.chi[e]), 0)
            for e in range(len(dist))
        ]
        x_values = _run_groups(evaluator, items, threads)
        weights = dist.probabilities
        estimate = math.fsum((weights * x_values).tolist())
        return PlanResult(dist.protocol, estimate, x_values, 0, weights=weights)

    plan = draw_plan(dist, epsilon, delta, streams, L=L)
    evaluator = _SettingEvaluator(dist, channel, streams, infinite=shots_mode == SHOTS_INFINITE)
    x_values = _run_groups(evaluator, list(plan.records()), threads)
    estimate = math.fsum(x_values.tolist()) / plan.L
    return PlanResult(dist.protocol, estimate, x_values, plan.total_shots, plan=plan)


def _range_flags(name: str, value: float, metadata: Dict[str, Any]) -> None:
    metadata[f"{name}_clamped"] = min(1.0, max(0.0, value))
    metadata[f"{name}_out_of_range"] = not 0.0 <= value <= 1.0


def estimate(
    protocol: str,
    unitary: Any,
    channel: QuantumChannel,
    epsilon: float,
    delta: float,
    rng: Union[RandomStreams, int],
    family: Optional[MubFamily] = None,
    shots: str = SHOTS_FINITE,
    sampling: str = SAMPLING_MONTE_CARLO,
    threads: int = 1,
    bases: Optional[Tuple[int, int]] = None,
    distributions: Optional[Sequence[RelevanceDistribution]] = None,
    L: Optional[int] = None,
) -> EstimateReport:
    """Run one protocol end to end and report its estimates.

    Args:
        protocol:      ``"A"``, ``"B"`` or ``"C"``.
        unitary:       Target unitary U.
        channel:       Actual evolution D (noise included), on the same qubits.
        rng:           ``RandomStreams`` or an integer seed.
        family:        MUB family (built on demand for B and C).
        shots:         ``"finite"`` simulates N_l shots; ``"infinite"`` uses exact
                       expectations.
        sampling:      ``"monte-carlo"`` draws a plan; ``"exhaustive"`` sums over
                       every entry with weight Pr (exact expectations, no shots).
        threads:       Worker threads for setting evaluation.
        bases:         Family indices of the two classical-fidelity bases (C).
        distributions: Prebuilt relevance distributions to reuse.
        L:             Override of the Chebyshev sample count.
    """
    protocol = protocol.upper()
    if protocol not in PROTOCOLS:
        raise InvalidInputError(f"Unknown protocol '{protocol}'. Expected one of {', '.join(PROTOCOLS)}")
    if shots not in (SHOTS_FINITE, SHOTS_INFINITE):
        raise InvalidInputError(f"Unknown shots mode '{shots}'")
    if sampling not in (SAMPLING_MONTE_CARLO, SAMPLING_EXHAUSTIVE):
        raise InvalidInputError(f"Unknown sampling mode '{sampling}'")
    _check_accuracy(epsilon, delta)
    u = check_unitary(unitary)
    dim = u.shape[0]
    n = qubits_for_dimension(dim)
    if channel.n_qubits != n:
        raise DimensionMismatchError(f"Unitary on {n} qubits, channel on {channel.n_qubits}")
    check_qubit_cap("Estimation", n, MAX_QUBITS)
    streams = rng if isinstance(rng, RandomStreams) else RandomStreams(int(rng))

    if distributions is None:
        distributions = relevance_distributions(protocol, u, family=family, bases=bases)
    runs = [
        _execute(dist, channel, epsilon, delta, streams, shots, sampling, threads, L=L)
        for dist in distributions
    ]
    if sampling == SAMPLING_EXHAUSTIVE:
        shots = SHOTS_INFINITE

    report = EstimateReport(
        protocol=protocol, n_qubits=n, epsilon=float(epsilon), delta=float(delta),
        shots_mode=shots, sampling=sampling, runs=runs, f_av=float("nan"),
    )
    if protocol == "A":
        report.f_e = runs[0].estimate
        report.f_av = favg_from_fe_estimate(report.f_e, dim)
        _range_flags("f_e", report.f_e, report.metadata)
    elif protocol == "B":
        report.f_av = runs[0].estimate
    else:
        report.f1, report.f2 = runs[0].estimate, runs[1].estimate
        report.lower, report.upper = hofmann_bounds(report.f1, report.f2, dim)
        report.f_av = (report.lower + report.upper) / 2.0
        _range_flags("f1", report.f1, report.metadata)
        _range_flags("f2", report.f2, report.metadata)
    _range_flags("f_av", report.f_av, report.metadata)
    logger.info(
        "Protocol %s: F_av=%.6f, L=%d, shots=%d", protocol, report.f_av, report.L, report.total_shots,
    )
    return report


def relevance_distributions(
    protocol: str,
    unitary: Any,
    family: Optional[MubFamily] = None,
    bases: Optional[Tuple[int, int]] = None,
) -> List[RelevanceDistribution]:
    """The relevance distribution(s) a protocol samples from (two for C)."""
    protocol = protocol.upper()
    u = check_unitary(unitary)
    n = qubits_for_dimension(u.shape[0])
    if protocol == "A":
        return [relevance_process(u)]
    family = family or build_mub_family(n)
    if protocol == "B":
        return [relevance_two_design(u, family)]
    if protocol == "C":
        first, second = bases if bases is not None else (0, 1)
        classical_bases(family, (first, second))
        return [
            relevance_classical(u, family.matrices[first], "C1", family.labels[first]),
            relevance_classical(u, family.matrices[second], "C2", family.labels[second]),
        ]
    raise InvalidInputError(f"Unknown protocol '{protocol}'")

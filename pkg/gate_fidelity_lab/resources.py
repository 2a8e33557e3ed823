"""Resource accounting for the three protocols.

Counts are exact Python integers (6^20 does not fit in 64 bits), the
experiment bound is a float.  The classical cost is reported as an
asymptotic label plus the proportional value of that label at n, never as a
measured time.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from .errors import InvalidInputError
from .estimators import PROTOCOLS, chebyshev_L, hoeffding_shots

# Asymptotic classical cost labels per protocol
C_CLASS_LABELS = {"A": "n^2*2^(4n)", "B": "n^2*2^(4n)", "C": "n^2*2^(3n)"}
CLIFFORD_C_CLASS_LABEL = "1"

MAX_TABLE_QUBITS = 64


@dataclass(frozen=True)
class ResourceTable:
    """One row of the resource table for (protocol, n)."""

    protocol: str
    n: int
    clifford: bool
    n_input: int
    n_meas: int
    n_setting: int
    n_exp_bound: float
    c_class_label: str
    c_class_value: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _check_protocol(protocol: str) -> str:
    tag = protocol.upper()
    if tag not in PROTOCOLS:
        raise InvalidInputError(f"Unknown protocol '{protocol}'. Expected one of {', '.join(PROTOCOLS)}")
    return tag


def input_count(protocol: str, n: int) -> int:
    d = 2 ** n
    return {"A": 6 ** n, "B": d * (d + 1), "C": 2 * d}[_check_protocol(protocol)]


def measurement_count(n: int, clifford: bool = False) -> int:
    return 2 ** n if clifford else 4 ** n


def experiment_bound(n: int, epsilon: float, delta: float, clifford: bool = False) -> float:
    """Upper bound on the expected number of experiments.

    1 + 1/(eps^2 delta) + 2 d ln(2/delta)/eps^2 for general gates; Clifford
    gates drop the factor d.
    """
    chebyshev_L(epsilon, delta)
    scale = 1 if clifford else 2 ** n
    return 1.0 + 1.0 / (epsilon ** 2 * delta) + 2.0 * scale * math.log(2.0 / delta) / epsilon ** 2


def resource_table(protocol: str, n: int, epsilon: float, delta: float, clifford: bool = False) -> ResourceTable:
    tag = _check_protocol(protocol)
    if not 1 <= n <= MAX_TABLE_QUBITS:
        raise InvalidInputError(f"n must lie in [1, {MAX_TABLE_QUBITS}], got {n}")
    n_input = input_count(tag, n)
    n_meas = measurement_count(n, clifford)
    if clifford:
        label, value = CLIFFORD_C_CLASS_LABEL, 1
    else:
        label = C_CLASS_LABELS[tag]
        value = n * n * 2 ** ((3 if tag == "C" else 4) * n)
    return ResourceTable(
        protocol=tag,
        n=n,
        clifford=clifford,
        n_input=n_input,
        n_meas=n_meas,
        n_setting=n_input * n_meas,
        n_exp_bound=experiment_bound(n, epsilon, delta, clifford),
        c_class_label=label,
        c_class_value=value,
    )


def resource_rows(
    protocols: Iterable[str],
    n_values: Iterable[int],
    epsilon: float,
    delta: float,
    clifford: bool = False,
) -> List[ResourceTable]:
    """Rows ordered by protocol, then n."""
    n_list = list(n_values)
    return [resource_table(p, n, epsilon, delta, clifford) for p in protocols for n in n_list]


@dataclass(frozen=True)
class ExpectedShots:
    """Exact expectation of the shot counts for a concrete distribution.

    Attributes:
        L:           Number of settings.
        per_setting: sum_k Pr(k) N_l(k).
        total:       L * per_setting.
        bound:       The closed-form experiment bound for the same (n, eps, delta).
    """

    L: int
    per_setting: float
    total: float
    bound: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def expected_shots(dist: Any, L: int, epsilon: float, delta: float, clifford: bool = False) -> ExpectedShots:
    """<N_l> and <N_exp> = L <N_l> over a relevance distribution."""
    counts = _distinct_counts(np.abs(np.asarray(dist.chi)), L, epsilon, delta)
    per_setting = math.fsum((np.asarray(dist.probabilities) * counts).tolist())
    return ExpectedShots(
        L=L,
        per_setting=per_setting,
        total=L * per_setting,
        bound=experiment_bound(dist.n_qubits, epsilon, delta, clifford),
    )


def _distinct_counts(chi: np.ndarray, L: int, epsilon: float, delta: float) -> np.ndarray:
    # |chi| takes few distinct values; evaluate the shot formula once per value.
    values, inverse = np.unique(chi, return_inverse=True)
    counts = np.array([hoeffding_shots(float(v), L, epsilon, delta) for v in values], dtype=float)
    return counts[inverse]


def render_rows(rows: Sequence[ResourceTable]) -> List[List[str]]:
    """Table cells (header first) for terminal output."""
    header = ["protocol", "n", "N_input", "N_meas", "N_setting", "N_exp bound", "C_class"]
    body = [
        [
            r.protocol, str(r.n), str(r.n_input), str(r.n_meas), str(r.n_setting),
            f"{r.n_exp_bound:.1f}", r.c_class_label,
        ]
        for r in rows
    ]
    return [header] + body

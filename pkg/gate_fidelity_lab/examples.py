"""Curated experiment config catalog.

Each entry has the following fields:
  id              Unique slug, used by ``gate-fidelity-lab examples <id>``
  name            Short human-readable name
  description     One-sentence description
  valid           True if the config should pass validation
  exit_code       Exit status ``run`` returns for the config
  config          The experiment config dict
  expected        (internal) values the run must reproduce, e.g. exact F_av.
                  Used by the test suite.
  expected_errors (internal) substrings that must appear in the validation
                  errors when valid=False.  Used by the test suite.
"""

from typing import Any, Dict, List

EXAMPLES: List[Dict[str, Any]] = [
    # ------------------------------------------------------------------
    # Estimation runs
    # ------------------------------------------------------------------
    {
        "id": "hadamard-depolarizing-bounds",
        "name": "Hadamard under depolarizing noise, classical bounds",
        "description": (
            "Protocol C on a one-qubit Hadamard followed by 20% depolarizing noise. "
            "The two classical fidelities bound F_av = 0.9 from both sides."
        ),
        "valid": True,
        "exit_code": 0,
        "config": {
            "n": 1, "gate": "H", "noise": {"depolarizing": 0.2}, "protocol": "C",
            "epsilon": 0.1, "delta": 0.1, "seed": 7, "oracle": True,
        },
        "expected": {"exact_f_av": 0.9, "exact_lower": 0.8666666666666667, "exact_upper": 0.9333333333333333},
    },
    {
        "id": "ideal-hadamard-all-protocols",
        "name": "Noiseless Hadamard, all protocols",
        "description": "With p = 0 every shot is deterministic and all three protocols report 1.",
        "valid": True,
        "exit_code": 0,
        "config": {
            "n": 1, "gate": "H", "noise": {"depolarizing": 0.0}, "protocol": ["A", "B", "C"],
            "epsilon": 0.1, "delta": 0.1, "seed": 7, "oracle": True,
        },
        "expected": {"exact_f_av": 1.0, "f_av": {"A": 1.0, "B": 1.0, "C": 1.0}},
    },
    {
        "id": "cnot-exhaustive",
        "name": "CNOT with dephasing and damping, full enumeration",
        "description": (
            "Sums over the whole event space with exact expectations; every estimate "
            "must equal the oracle to 1e-9."
        ),
        "valid": True,
        "exit_code": 0,
        "config": {
            "n": 2, "gate": "CNOT",
            "noise": [{"dephasing": 0.1}, {"amplitude_damping": 0.05}],
            "protocol": ["A", "B", "C"], "sampling": "exhaustive", "oracle": True, "seed": 1,
        },
        "expected": {},
    },
    {
        "id": "random-unitary-random-channel",
        "name": "Haar-random two-qubit gate under a random channel",
        "description": "Protocol B on a generic, non-Clifford gate with a random Kraus channel.",
        "valid": True,
        "exit_code": 0,
        "config": {
            "n": 2, "gate": {"random": "unitary", "seed": 3},
            "noise": {"random": {"seed": 5, "kraus": 2, "strength": 0.1}},
            "protocol": "B", "epsilon": 0.1, "delta": 0.1, "seed": 11, "oracle": True,
        },
        "expected": {},
    },
    {
        "id": "qft-overrotation-infinite-shots",
        "name": "QFT with a coherent overrotation, exact expectations",
        "description": (
            "Infinite-shot mode isolates the sampling error of the settings from "
            "measurement noise."
        ),
        "valid": True,
        "exit_code": 0,
        "config": {
            "n": 2, "gate": "QFT", "noise": {"overrotation": {"axis": "XZ", "angle": 0.2}},
            "protocol": "A", "shots": "infinite", "epsilon": 0.1, "delta": 0.1, "seed": 2,
            "oracle": True,
        },
        "expected": {},
    },
    {
        "id": "resources-table",
        "name": "Resource table, n = 1..5",
        "description": "Setting counts and experiment bounds for all protocols.",
        "valid": True,
        "exit_code": 0,
        "config": {"mode": "resources", "protocols": ["A", "B", "C"], "n_range": [1, 5]},
        "expected": {"rows": 15},
    },
    {
        "id": "t-gate-distribution-dump",
        "name": "Relevance distributions of the T gate",
        "description": "Writes every nonzero setting of protocols A, B and C for a non-Clifford gate.",
        "valid": True,
        "exit_code": 0,
        "config": {"n": 1, "gate": "T", "protocol": ["A", "B", "C"], "mode": "distribution-dump"},
        "expected": {},
    },
    # ------------------------------------------------------------------
    # Rejected configs
    # ------------------------------------------------------------------
    {
        "id": "invalid-unknown-gate",
        "name": "Unknown gate name (invalid)",
        "description": "Gate names must come from the named-gate registry.",
        "valid": False,
        "exit_code": 1,
        "config": {"n": 1, "gate": "FOO", "protocol": "B"},
        "expected_errors": ["Unknown gate 'FOO'"],
    },
    {
        "id": "invalid-cnot-one-qubit",
        "name": "Two-qubit gate on one qubit (invalid)",
        "description": "CNOT acts on qubits 0 and 1 and needs n >= 2.",
        "valid": False,
        "exit_code": 1,
        "config": {"n": 1, "gate": "CNOT"},
        "expected_errors": ["needs at least 2 qubits"],
    },
    {
        "id": "invalid-epsilon",
        "name": "Zero accuracy (invalid)",
        "description": "epsilon must lie in (0, 1].",
        "valid": False,
        "exit_code": 1,
        "config": {"n": 1, "gate": "H", "epsilon": 0},
        "expected_errors": ["epsilon"],
    },
    {
        "id": "invalid-unknown-key",
        "name": "Misspelled key (invalid)",
        "description": "Unknown top-level keys are rejected rather than ignored.",
        "valid": False,
        "exit_code": 1,
        "config": {"n": 1, "gate": "H", "protcol": "B"},
        "expected_errors": ["protcol"],
    },
    {
        "id": "infeasible-process-six-qubits",
        "name": "Protocol A on six qubits (infeasible)",
        "description": "Dense enumeration of the 2^(4n) operator pairs is capped at n = 5.",
        "valid": False,
        "exit_code": 2,
        "config": {"n": 6, "gate": "H", "protocol": "A"},
        "expected_errors": ["Protocol A supports at most 5 qubits"],
    },
]

# Public fields shown by the ``examples`` command (expected values are test-only)
_PUBLIC_FIELDS = {"id", "name", "description", "valid", "exit_code", "config"}


def get_public_examples() -> List[Dict[str, Any]]:
    """Return examples with only the public fields."""
    return [{k: v for k, v in e.items() if k in _PUBLIC_FIELDS} for e in EXAMPLES]


def get_example(example_id: str) -> Dict[str, Any]:
    for example in EXAMPLES:
        if example["id"] == example_id:
            return example
    raise KeyError(example_id)

"""Exception hierarchy.

Every error raised on purpose by the library derives from
``FidelityLabError``.  The CLI maps the subclasses onto exit codes:
``ConfigError`` → 1, ``InfeasibleSizeError`` → 2, ``SelfCheckError`` → 3.
"""

from typing import List, Optional


class FidelityLabError(Exception):
    """Root of all library errors."""


class DimensionMismatchError(FidelityLabError, ValueError):
    """Operands live on different qubit counts or Hilbert-space dimensions."""


class InvalidInputError(FidelityLabError, ValueError):
    """An input violates its type invariants or a parameter is out of range.

    Raised for non-normalized states, non-Hermitian or non-unit-trace density
    matrices, non-unitary grids, non-trace-preserving Kraus sets and
    out-of-range accuracy / confidence / noise parameters.
    """


class InfeasibleSizeError(FidelityLabError, ValueError):
    """The requested qubit count exceeds a dense-simulation cap."""

    def __init__(self, what: str, n_qubits: int, cap: int):
        self.what = what
        self.n_qubits = n_qubits
        self.cap = cap
        super().__init__(f"{what} supports at most {cap} qubits, got n={n_qubits}")


class SelfCheckError(FidelityLabError, RuntimeError):
    """An internal consistency check failed (not a user error)."""


class ConfigError(FidelityLabError, ValueError):
    """An experiment config failed validation.

    Attributes:
        errors:     The ``ValidationError`` entries reported by ``ConfigValidator``.
        infeasible: True when at least one entry is a size-cap violation rather
                    than a malformed document.
    """

    def __init__(self, errors: List["object"], infeasible: bool = False,
                 message: Optional[str] = None):
        self.errors = errors
        self.infeasible = infeasible
        if message is None:
            message = f"{len(errors)} config error(s): " + "; ".join(str(e) for e in errors)
        super().__init__(message)


def check_qubit_cap(what: str, n_qubits: int, cap: int) -> None:
    """Raise ``InfeasibleSizeError`` when ``n_qubits`` exceeds ``cap``."""
    if n_qubits > cap:
        raise InfeasibleSizeError(what, n_qubits, cap)

"""Consistency checks recorded next to the estimates of a run.

Each check returns one ``CheckResult``.  Statistical checks only WARN when
violated by a sampled estimate, because the guarantees allow a failure rate
of delta; in exhaustive infinite-shot mode there is no randomness left and
the same violation is a FAIL.
"""

import math
from typing import Any, Dict, Optional

from ..estimators import NORMALIZATION_TOLERANCE, RelevanceDistribution
from ..mub import FULL_OVERLAP_CHECK_QUBITS, MubFamily, mub_violations

PHASE_SETUP = "Setup"
PHASE_ORACLE = "Oracle"
PHASE_ESTIMATION = "Estimation"
PHASE_CHECKS = "Checks"

# Exhaustive infinite-shot sums must reproduce exact values to this precision.
EXACT_TOLERANCE = 1e-9


class CheckResult:
    """A single check outcome.

    Attributes:
        name:    Short description (e.g. ``B: |F_av - exact| <= eps``).
        status:  One of PASS, FAIL, WARN, SKIP.
        message: Optional detail about the outcome.
        phase:   Report section the result is listed under.
    """

    PASS = "pass"
    FAIL = "fail"
    WARN = "warn"
    SKIP = "skip"

    def __init__(self, name: str, status: str, message: str = "", phase: str = PHASE_CHECKS):
        self.name = name
        self.status = status
        self.message = message
        self.phase = phase

    def __repr__(self) -> str:
        return f"CheckResult({self.name!r}, {self.status!r})"

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to dict for JSON output.  Omits an empty message."""
        d: Dict[str, Any] = {"name": self.name, "status": self.status, "phase": self.phase}
        if self.message:
            d["message"] = self.message
        return d


def check_mub_family(family: MubFamily) -> CheckResult:
    overlaps = family.n_qubits <= FULL_OVERLAP_CHECK_QUBITS
    name = f"MUB family n={family.n_qubits} ({family.size} bases)"
    problems = mub_violations(family, overlaps=overlaps)
    if problems:
        return CheckResult(name, CheckResult.FAIL, "; ".join(problems[:3]), phase=PHASE_SETUP)
    detail = "overlaps verified" if overlaps else "class structure verified"
    return CheckResult(name, CheckResult.PASS, detail, phase=PHASE_SETUP)


def check_normalization(dist: RelevanceDistribution) -> CheckResult:
    total = dist.total()
    name = f"{dist.protocol}: relevance distribution sums to 1"
    status = CheckResult.PASS if abs(total - 1.0) <= NORMALIZATION_TOLERANCE else CheckResult.FAIL
    return CheckResult(name, status, f"sum={total:.12f}, support={len(dist)}", phase=PHASE_SETUP)


def check_accuracy(
    label: str,
    estimate: float,
    exact: Optional[float],
    epsilon: float,
    deterministic: bool,
) -> CheckResult:
    """|estimate - exact| within eps (within 1e-9 when nothing was sampled)."""
    tolerance = EXACT_TOLERANCE if deterministic else epsilon
    name = f"{label}: |estimate - exact| <= {tolerance:g}"
    if exact is None:
        return CheckResult(name, CheckResult.SKIP, "no exact value at this size")
    error = abs(estimate - exact)
    message = f"estimate={estimate:.6f}, exact={exact:.6f}, error={error:.3g}"
    if error <= tolerance:
        return CheckResult(name, CheckResult.PASS, message)
    return CheckResult(name, CheckResult.FAIL if deterministic else CheckResult.WARN, message)


def check_bracket(
    lower: float,
    upper: float,
    exact: Optional[float],
    epsilon: float,
    deterministic: bool,
) -> CheckResult:
    """The bound interval (widened by 2 eps unless deterministic) contains the exact F_av."""
    slack = EXACT_TOLERANCE if deterministic else 2.0 * epsilon
    name = "C: bound interval contains exact F_av"
    if exact is None:
        return CheckResult(name, CheckResult.SKIP, "no exact value at this size")
    message = f"[{lower:.6f}, {upper:.6f}] vs exact {exact:.6f}"
    if not deterministic:
        message += f" (widened by {slack:g})"
    if lower - slack <= exact <= upper + slack:
        return CheckResult(name, CheckResult.PASS, message)
    return CheckResult(name, CheckResult.FAIL if deterministic else CheckResult.WARN, message)


def check_shot_budget(tag: str, realized: int, bound: float, L: int, kind: str = "closed-form") -> CheckResult:
    """Realized shots within ceil(bound) + L."""
    limit = math.ceil(bound) + L
    name = f"{tag}: realized shots within {kind} budget"
    message = f"realized={realized}, limit={limit}"
    status = CheckResult.PASS if realized <= limit else CheckResult.WARN
    return CheckResult(name, status, message)

"""Runs one experiment config end to end.

``execute()`` is the pure part: it builds the gate, the noisy channel and
the protocols' relevance distributions, runs the estimators and the oracle,
and returns the report dict with its checks.  ``run_experiment()`` wraps it
with validation, file output and exit codes:

- 0: success (statistical checks may WARN)
- 1: malformed config
- 2: size beyond a simulation cap
- 3: an internal self-check failed, or a deterministic check FAILed
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import click

from .. import __version__
from ..channels import CLIFFORD_QUBIT_CAP, build_noise, compose, is_clifford, unitary_channel
from ..config import config_hash, protocol_list, validated, with_defaults
from ..errors import ConfigError, FidelityLabError, InfeasibleSizeError, SelfCheckError
from ..estimators import (
    SAMPLING_EXHAUSTIVE,
    EstimateReport,
    RelevanceDistribution,
    estimate,
    relevance_distributions,
)
from ..gates import build_gate
from ..mub import build_mub_family
from ..oracle import CLASSICAL_ORACLE_QUBIT_CAP, exact_fidelities
from ..pauli import PauliString
from ..resources import expected_shots, render_rows, resource_rows
from ..rng import RandomStreams
from .checks import (
    CheckResult,
    check_accuracy,
    check_bracket,
    check_mub_family,
    check_normalization,
    check_shot_budget,
)
from .report import (
    DISTRIBUTION_FILE,
    REPORT_FILE,
    REPORT_SCHEMA_VERSION,
    SETTINGS_FILE,
    dumps,
    print_distribution_summary,
    print_resource_table,
    print_results,
    summarize,
    write_json,
    write_settings_csv,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_INFEASIBLE = 2
EXIT_SELF_CHECK = 3


@dataclass
class RunOutcome:
    """Everything one run produced.

    Attributes:
        report:       The ``report.json`` document.
        checks:       Check results in report order.
        settings:     Per-setting CSV rows (estimate mode).
        distribution: The ``distribution.json`` document (distribution-dump mode).
        table:        Rendered resource table cells (resources mode).
    """

    report: Dict[str, Any]
    checks: List[CheckResult] = field(default_factory=list)
    settings: List[List[Any]] = field(default_factory=list)
    distribution: Optional[Dict[str, Any]] = None
    table: Optional[List[List[str]]] = None

    @property
    def exit_code(self) -> int:
        failed = any(c.status == CheckResult.FAIL for c in self.checks)
        return EXIT_SELF_CHECK if failed else EXIT_OK


def _gate_name(descriptor: Any) -> str:
    if isinstance(descriptor, str):
        return descriptor.upper()
    if "unitary" in descriptor:
        return "explicit unitary"
    return f"random {descriptor['random']} (seed={descriptor.get('seed', 0)})"


def _base_report(doc: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "schema": REPORT_SCHEMA_VERSION,
        "version": __version__,
        "mode": doc["mode"],
        "config": doc,
        "config_hash": config_hash(doc),
        "seed": doc["seed"],
    }


def execute(data: Mapping[str, Any], threads: int = 1) -> RunOutcome:
    """Run a validated config document (defaults are filled in here)."""
    doc = with_defaults(data)
    if doc["mode"] == "resources":
        return _execute_resources(doc)
    if doc["mode"] == "distribution-dump":
        return _execute_dump(doc)
    return _execute_estimates(doc, threads)


def _execute_resources(doc: Dict[str, Any]) -> RunOutcome:
    low, high = doc["n_range"]
    protocols = doc.get("protocols") or protocol_list(doc["protocol"])
    rows = resource_rows(protocols, range(low, high + 1), doc["epsilon"], doc["delta"], doc["clifford"])
    report = _base_report(doc)
    report["rows"] = [row.to_dict() for row in rows]
    return RunOutcome(report=report, table=render_rows(rows))


def _setup(doc: Dict[str, Any]):
    n = doc["n"]
    unitary = build_gate(doc["gate"], n)
    noise = build_noise(doc["noise"], n, gate_builder=build_gate)
    channel = compose(unitary_channel(unitary, name=_gate_name(doc["gate"])), noise)
    return n, unitary, noise, channel


def _bases(doc: Dict[str, Any]):
    bases = doc.get("bases")
    return (bases[0], bases[1]) if bases else (0, 1)


def _execute_dump(doc: Dict[str, Any]) -> RunOutcome:
    n, unitary, noise, _ = _setup(doc)
    family = build_mub_family(n)
    checks = [check_mub_family(family)]
    dump = _base_report(doc)
    dump["distributions"] = {}
    for tag in protocol_list(doc["protocol"]):
        for dist in relevance_distributions(tag, unitary, family=family, bases=_bases(doc)):
            checks.append(check_normalization(dist))
            dump["distributions"][dist.protocol] = _dump_distribution(dist)
    report = _base_report(doc)
    report["n"] = n
    report["distributions"] = {
        tag: {"event_space_size": d["event_space_size"], "support": len(d["entries"])}
        for tag, d in dump["distributions"].items()
    }
    report["checks"] = [c.to_dict() for c in checks]
    report["summary"] = summarize(checks)
    return RunOutcome(report=report, checks=checks, distribution=dump)


def _dump_distribution(dist: RelevanceDistribution) -> Dict[str, Any]:
    entries = [
        {
            "input": dist.input_labels[int(dist.input_index[e])],
            "measurement": dist.measurement(e).label,
            "chi": float(dist.chi[e]),
            "probability": float(dist.probabilities[e]),
        }
        for e in range(len(dist))
    ]
    return {"event_space_size": dist.event_space_size, "total": dist.total(), "entries": entries}


def _execute_estimates(doc: Dict[str, Any], threads: int) -> RunOutcome:
    n, unitary, noise, channel = _setup(doc)
    protocols = protocol_list(doc["protocol"])
    clifford = is_clifford(unitary) if n <= CLIFFORD_QUBIT_CAP else None
    bases = _bases(doc)
    checks: List[CheckResult] = []

    family = None
    if any(tag in ("B", "C") for tag in protocols) or (doc["oracle"] and n <= CLASSICAL_ORACLE_QUBIT_CAP):
        family = build_mub_family(n)
        checks.append(check_mub_family(family))

    exact = exact_fidelities(unitary, channel, family=family, bases=bases) if doc["oracle"] else None

    streams = RandomStreams(doc["seed"])
    estimates: Dict[str, Any] = {}
    settings: List[List[Any]] = []
    for tag in protocols:
        dists = relevance_distributions(tag, unitary, family=family, bases=bases)
        checks.extend(check_normalization(d) for d in dists)
        result = estimate(
            tag, unitary, channel, doc["epsilon"], doc["delta"], streams,
            family=family, shots=doc["shots"], sampling=doc["sampling"],
            threads=threads, bases=bases, distributions=dists,
        )
        estimates[tag] = _estimate_dict(result, dists, bool(clifford))
        settings.extend(_settings_rows(result, dists))
        checks.extend(_budget_checks(result, estimates[tag]))
        if exact is not None:
            checks.extend(_oracle_checks(result, exact))

    report = _base_report(doc)
    report.update({
        "n": n,
        "gate": {"name": _gate_name(doc["gate"]), "clifford": clifford},
        "channel": noise.name,
        "estimates": estimates,
        "checks": [c.to_dict() for c in checks],
        "summary": summarize(checks),
    })
    if exact is not None:
        report["exact"] = exact
    return RunOutcome(report=report, checks=checks, settings=settings)


def _estimate_dict(result: EstimateReport, dists: Sequence[RelevanceDistribution], clifford: bool) -> Dict[str, Any]:
    runs = []
    for run, dist in zip(result.runs, dists):
        entry = {
            "tag": run.tag,
            "estimate": run.estimate,
            "L": run.L,
            "shots": run.total_shots,
            "event_space_size": dist.event_space_size,
            "support": len(dist),
        }
        if run.plan is not None:
            entry["distinct_settings"] = len(set(run.plan.entries.tolist()))
            entry["expected_shots"] = expected_shots(
                dist, run.plan.L, result.epsilon, result.delta, clifford=clifford,
            ).to_dict()
        runs.append(entry)
    return {
        "protocol": result.protocol,
        "f_av": result.f_av,
        "f_e": result.f_e,
        "f1": result.f1,
        "f2": result.f2,
        "lower": result.lower,
        "upper": result.upper,
        "L": result.L,
        "total_shots": result.total_shots,
        "epsilon": result.epsilon,
        "delta": result.delta,
        "shots_mode": result.shots_mode,
        "sampling": result.sampling,
        "metadata": result.metadata,
        "runs": runs,
    }


def _settings_rows(result: EstimateReport, dists: Sequence[RelevanceDistribution]) -> List[List[Any]]:
    rows = []
    for run, dist in zip(result.runs, dists):
        n = dist.n_qubits
        if run.plan is not None:
            records = run.plan.records()
        else:
            records = (
                (e, int(dist.input_index[e]), int(dist.pauli_index[e]), float(dist.chi[e]), 0)
                for e in range(len(dist))
            )
        for l, i, k, chi, shots in records:
            rows.append([
                run.tag, l, dist.input_labels[i], PauliString.from_index(n, k).label,
                chi, shots, float(run.x_values[l]),
            ])
    return rows


def _budget_checks(result: EstimateReport, summary: Dict[str, Any]) -> List[CheckResult]:
    if result.sampling == SAMPLING_EXHAUSTIVE:
        return []
    checks = []
    for run in summary["runs"]:
        expected = run["expected_shots"]
        if result.protocol == "A":
            checks.append(check_shot_budget(run["tag"], run["shots"], expected["total"], run["L"], "expected"))
        else:
            checks.append(check_shot_budget(run["tag"], run["shots"], expected["bound"], run["L"]))
    return checks


def _oracle_checks(result: EstimateReport, exact: Dict[str, float]) -> List[CheckResult]:
    deterministic = result.sampling == SAMPLING_EXHAUSTIVE
    eps = result.epsilon
    tag = result.protocol
    if tag == "A":
        return [
            check_accuracy("A: F_e", result.f_e, exact.get("f_e"), eps, deterministic),
            check_accuracy("A: F_av", result.f_av, exact.get("f_av"), eps, deterministic),
        ]
    if tag == "B":
        return [check_accuracy("B: F_av", result.f_av, exact.get("f_av"), eps, deterministic)]
    return [
        check_accuracy("C: F1", result.f1, exact.get("f1"), eps, deterministic),
        check_accuracy("C: F2", result.f2, exact.get("f2"), eps, deterministic),
        check_bracket(result.lower, result.upper, exact.get("f_av"), eps, deterministic),
    ]


def _report_errors(errors: Sequence[Any], json_output: bool, code: int) -> int:
    if json_output:
        click.echo(dumps({"exit_code": code, "errors": [e.to_dict() for e in errors]}), nl=False)
    else:
        click.echo(f"Found {len(errors)} config error(s):", err=True)
        for error in errors:
            click.echo(f"  {error}", err=True)
    return code


def _report_failure(message: str, json_output: bool, code: int) -> int:
    if json_output:
        click.echo(dumps({"exit_code": code, "errors": [{"message": message}]}), nl=False)
    else:
        click.echo(f"Error: {message}", err=True)
    return code


def run_experiment(
    data: Mapping[str, Any],
    overrides: Optional[Mapping[str, Any]] = None,
    out_dir: Optional[Union[str, Path]] = None,
    threads: int = 1,
    json_output: bool = False,
) -> int:
    """Validate, execute and report one config.  Returns the exit code.

    Args:
        data:        Parsed config document.
        overrides:   Command-line values (``seed``, ``mode``) merged before validation.
        out_dir:     Directory for ``report.json`` and friends; nothing is written when None.
        threads:     Worker threads for setting evaluation; never changes results.
        json_output: Print the report JSON instead of the terminal summary.
    """
    try:
        doc = validated(data, overrides)
    except ConfigError as exc:
        return _report_errors(exc.errors, json_output, EXIT_INFEASIBLE if exc.infeasible else EXIT_MALFORMED)

    try:
        outcome = execute(doc, threads=threads)
    except InfeasibleSizeError as exc:
        return _report_failure(str(exc), json_output, EXIT_INFEASIBLE)
    except SelfCheckError as exc:
        logger.error("Self-check failed: %s", exc)
        return _report_failure(str(exc), json_output, EXIT_SELF_CHECK)
    except FidelityLabError as exc:
        return _report_failure(str(exc), json_output, EXIT_MALFORMED)

    if out_dir is not None:
        _write_outputs(Path(out_dir), outcome, with_defaults(doc))

    if json_output:
        click.echo(dumps(outcome.report), nl=False)
    elif outcome.table is not None:
        print_resource_table(outcome.table)
    elif outcome.distribution is not None:
        print_distribution_summary(outcome.distribution)
    else:
        print_results(outcome.report, outcome.checks)
    return outcome.exit_code


def _write_outputs(out: Path, outcome: RunOutcome, doc: Dict[str, Any]) -> None:
    write_json(out / REPORT_FILE, outcome.report)
    if outcome.distribution is not None:
        write_json(out / DISTRIBUTION_FILE, outcome.distribution)
    if doc["mode"] == "estimate" and doc["csv"]:
        write_settings_csv(out / SETTINGS_FILE, outcome.settings)
    logger.info("Wrote reports to %s", out)

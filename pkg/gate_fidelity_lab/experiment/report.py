"""Formats run results for the terminal and writes the report files.

Terminal output is grouped by phase (Setup, Oracle, Estimation, Checks)
with a summary line of check counts.  File output is ``report.json``
(versioned with ``"schema": 1``, keys sorted, no timestamps, so identical
runs produce identical bytes), ``settings.csv`` with one row per executed
setting, and ``distribution.json`` in distribution-dump mode.
"""

import csv
import json
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

import click

from .checks import PHASE_CHECKS, PHASE_ESTIMATION, PHASE_ORACLE, PHASE_SETUP, CheckResult

REPORT_SCHEMA_VERSION = 1
REPORT_FILE = "report.json"
SETTINGS_FILE = "settings.csv"
DISTRIBUTION_FILE = "distribution.json"

SETTINGS_COLUMNS = ["protocol", "l", "input", "measurement", "chi_ideal", "shots", "x_estimate"]


def _colorize(text: str, color: str) -> str:
    """Apply ANSI color codes.  Returns plain text when stdout is not a TTY."""
    colors = {
        "red": "\033[91m",
        "green": "\033[92m",
        "yellow": "\033[93m",
        "bold": "\033[1m",
        "dim": "\033[2m",
        "reset": "\033[0m",
    }
    if not sys.stdout.isatty():
        return text
    return f"{colors.get(color, '')}{text}{colors['reset']}"


# Maps CheckResult status to (display label, ANSI color)
_STATUS_SYMBOLS = {
    CheckResult.PASS: ("PASS", "bold"),
    CheckResult.FAIL: ("FAIL", "red"),
    CheckResult.WARN: ("WARN", "yellow"),
    CheckResult.SKIP: ("SKIP", "dim"),
}


def summarize(checks: Sequence[CheckResult]) -> Dict[str, int]:
    return {
        "total": len(checks),
        "passed": sum(1 for c in checks if c.status == CheckResult.PASS),
        "failed": sum(1 for c in checks if c.status == CheckResult.FAIL),
        "warnings": sum(1 for c in checks if c.status == CheckResult.WARN),
        "skipped": sum(1 for c in checks if c.status == CheckResult.SKIP),
    }


def _fmt(value: Any) -> str:
    return "n/a" if value is None else f"{value:.6f}"


def _print_checks(checks: Iterable[CheckResult], phase: str) -> None:
    selected = [c for c in checks if c.phase == phase]
    if not selected:
        return
    _print_phase(phase)
    for check in selected:
        symbol, color = _STATUS_SYMBOLS.get(check.status, ("????", "dim"))
        click.echo(f"  [{_colorize(symbol, color)}] {check.name}")
        if check.message:
            click.echo(f"         {_colorize(check.message, 'dim')}")


def _print_phase(title: str) -> None:
    click.echo()
    click.echo(_colorize(f"  {title}", "bold"))
    click.echo(_colorize("  " + "-" * 40, "dim"))


def print_results(report: Dict[str, Any], checks: Sequence[CheckResult]) -> None:
    """Render an estimate-mode report grouped by phase."""
    click.echo()
    click.echo(_colorize("Gate Fidelity Experiment", "bold"))
    click.echo(_colorize("=" * 50, "dim"))
    meta = [
        f"gate-fidelity-lab {report['version']}",
        f"n={report['n']}",
        f"seed={report['seed']}",
        f"config {report['config_hash'][:12]}",
    ]
    click.echo(_colorize("  " + "  |  ".join(meta), "dim"))
    click.echo(_colorize(f"  gate: {report['gate']['name']}  channel: {report['channel']}", "dim"))

    _print_checks(checks, PHASE_SETUP)

    exact = report.get("exact")
    if exact:
        _print_phase(PHASE_ORACLE)
        for key in sorted(exact):
            click.echo(f"  {key:<16} {exact[key]:.9f}")

    _print_phase(PHASE_ESTIMATION)
    for tag in sorted(report["estimates"]):
        est = report["estimates"][tag]
        line = f"  {tag}: F_av = {_fmt(est['f_av'])}"
        if est.get("f_e") is not None:
            line += f"   F_e = {_fmt(est['f_e'])}"
        if est.get("f1") is not None:
            line += f"   F1 = {_fmt(est['f1'])}   F2 = {_fmt(est['f2'])}"
            line += f"   bounds [{_fmt(est['lower'])}, {_fmt(est['upper'])}]"
        click.echo(line)
        click.echo(_colorize(
            f"         L={est['L']}, shots={est['total_shots']}, "
            f"{est['sampling']}, {est['shots_mode']} shots",
            "dim",
        ))

    _print_checks(checks, PHASE_CHECKS)
    _print_footer(summarize(checks))


def _print_footer(summary: Dict[str, int]) -> None:
    click.echo()
    click.echo(_colorize("=" * 50, "dim"))
    parts = []
    if summary["passed"]:
        parts.append(_colorize(f"{summary['passed']} passed", "bold"))
    if summary["failed"]:
        parts.append(_colorize(f"{summary['failed']} failed", "red"))
    if summary["warnings"]:
        parts.append(_colorize(f"{summary['warnings']} warnings", "yellow"))
    if summary["skipped"]:
        parts.append(_colorize(f"{summary['skipped']} skipped", "dim"))
    parts.append(f"{summary['total']} checks")
    click.echo("  " + ", ".join(parts))
    click.echo()


def print_resource_table(cells: List[List[str]]) -> None:
    """Left-aligned columns; first row is the header."""
    widths = [max(len(row[i]) for row in cells) for i in range(len(cells[0]))]
    click.echo()
    for index, row in enumerate(cells):
        text = "  " + "  ".join(cell.rjust(w) if index and i else cell.ljust(w)
                                for i, (cell, w) in enumerate(zip(row, widths)))
        click.echo(_colorize(text, "bold") if index == 0 else text)
    click.echo()


def print_distribution_summary(dump: Dict[str, Any]) -> None:
    _print_phase("Relevance distributions")
    for tag in sorted(dump["distributions"]):
        dist = dump["distributions"][tag]
        click.echo(f"  {tag}: T={dist['event_space_size']}, support={len(dist['entries'])}")
    click.echo()


def dumps(report: Dict[str, Any]) -> str:
    """Canonical JSON text of a report (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def write_json(path: Path, report: Dict[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report), encoding="utf-8")
    return path


def write_settings_csv(path: Path, rows: Iterable[Sequence[Any]]) -> Path:
    """Write per-setting records under ``SETTINGS_COLUMNS``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SETTINGS_COLUMNS)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path

"""Validates and runs the example config catalog.

Every example marked valid=True must pass validation and run with its
listed exit code; the values under ``expected`` must be reproduced.
Every example marked valid=False must fail, and each expected_error
substring must appear in at least one returned error message.
"""

import json

import pytest

from gate_fidelity_lab.config import ConfigValidator
from gate_fidelity_lab.examples import EXAMPLES, get_example, get_public_examples
from gate_fidelity_lab.experiment.runner import run_experiment


@pytest.mark.parametrize("example", EXAMPLES, ids=[e["id"] for e in EXAMPLES])
def test_example_validates_correctly(example):
    validator = ConfigValidator()
    is_valid, errors = validator.validate(example["config"])

    if example["valid"]:
        assert is_valid, (
            f"Example '{example['id']}' is marked valid=True but failed validation:\n"
            + "\n".join(f"  - {e}" for e in errors)
        )
    else:
        assert not is_valid, (
            f"Example '{example['id']}' is marked valid=False but passed validation"
        )
        error_messages = " | ".join(str(e) for e in errors)
        for expected in example.get("expected_errors", []):
            assert expected.lower() in error_messages.lower(), (
                f"Example '{example['id']}': expected error substring '{expected}' "
                f"not found in: {error_messages}"
            )
        assert validator.infeasible == (example["exit_code"] == 2)


@pytest.mark.parametrize("example", EXAMPLES, ids=[e["id"] for e in EXAMPLES])
def test_example_runs_with_exit_code(example, capsys):
    code = run_experiment(example["config"], json_output=True)
    assert code == example["exit_code"]
    output = json.loads(capsys.readouterr().out)
    if not example["valid"]:
        assert output["exit_code"] == example["exit_code"]
        return

    expected = example.get("expected", {})
    if "exact_f_av" in expected:
        assert output["exact"]["f_av"] == pytest.approx(expected["exact_f_av"], abs=1e-12)
    if "exact_lower" in expected:
        assert output["exact"]["lower"] == pytest.approx(expected["exact_lower"], abs=1e-12)
        assert output["exact"]["upper"] == pytest.approx(expected["exact_upper"], abs=1e-12)
    for tag, value in expected.get("f_av", {}).items():
        assert output["estimates"][tag]["f_av"] == pytest.approx(value)
    if "rows" in expected:
        assert len(output["rows"]) == expected["rows"]


def test_exhaustive_example_passes_every_check(capsys):
    example = get_example("cnot-exhaustive")
    assert run_experiment(example["config"], json_output=True) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["summary"]["failed"] == 0
    assert report["summary"]["warnings"] == 0
    statuses = {c["status"] for c in report["checks"]}
    assert statuses == {"pass"}


def test_ids_are_unique():
    ids = [e["id"] for e in EXAMPLES]
    assert len(ids) == len(set(ids))


def test_public_examples_hide_expectations():
    for example in get_public_examples():
        assert "expected" not in example
        assert "expected_errors" not in example
        assert set(example) == {"id", "name", "description", "valid", "exit_code", "config"}


def test_get_example_unknown():
    with pytest.raises(KeyError):
        get_example("no-such-example")

"""Experiment config loading and validation.

A config is one JSON document.  Validation runs in two passes: the
structural pass checks it against ``schemas.CONFIG_SCHEMA`` with
``jsonschema``; the semantic pass checks what a schema cannot express
(gate arity against n, unitary shape, simulation caps).  Every problem is
collected as a ``ValidationError`` whose ``kind`` says whether the document
is malformed or merely too large to simulate.
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import jsonschema

from .channels import DEPOLARIZING_QUBIT_CAP, check_unitary
from .errors import ConfigError, FidelityLabError
from .estimators import CLASSICAL_QUBIT_CAP, PROCESS_QUBIT_CAP, TWO_DESIGN_QUBIT_CAP
from .gates import NAMED_GATES, build_gate
from .oracle import CLASSICAL_ORACLE_QUBIT_CAP
from .resources import MAX_TABLE_QUBITS
from .schemas import CONFIG_DEFAULTS, CONFIG_SCHEMA
from .states import MAX_QUBITS

MALFORMED = "malformed"
INFEASIBLE = "infeasible"

PROTOCOL_QUBIT_CAPS = {"A": PROCESS_QUBIT_CAP, "B": TWO_DESIGN_QUBIT_CAP, "C": CLASSICAL_QUBIT_CAP}
DUMP_QUBIT_CAP = 3


class ValidationError:
    """One config problem with its JSON path."""

    def __init__(self, message: str, path: str = "", kind: str = MALFORMED):
        self.message = message
        self.path = path
        self.kind = kind

    def __str__(self):
        loc = f" at {self.path}" if self.path else ""
        return f"{self.message}{loc}"

    def __repr__(self):
        return f"ValidationError({self.message!r}, path={self.path!r}, kind={self.kind!r})"

    def to_dict(self):
        d = {"message": self.message, "kind": self.kind}
        if self.path:
            d["path"] = self.path
        return d


def _json_path(parts) -> str:
    path = ""
    for part in parts:
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return path


def protocol_list(value: Union[str, List[str], None]) -> List[str]:
    if value is None:
        return []
    return [value] if isinstance(value, str) else list(value)


class ConfigValidator:
    """Validates experiment config documents."""

    def __init__(self):
        self.errors: List[ValidationError] = []
        self._schema_validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)

    def validate(self, data: Any) -> Tuple[bool, List[ValidationError]]:
        """
        Validate a config document.

        Args:
            data: Parsed JSON document

        Returns:
            Tuple of (is_valid, list_of_errors)
        """
        self.errors = []
        schema_errors = sorted(self._schema_validator.iter_errors(data), key=lambda e: list(e.absolute_path))
        for err in schema_errors:
            self.errors.append(ValidationError(err.message, _json_path(err.absolute_path)))
        if self.errors:
            return False, self.errors

        doc = with_defaults(data)
        if doc["mode"] == "resources":
            self._validate_resources(doc)
        else:
            self._validate_experiment(doc)
        return len(self.errors) == 0, self.errors

    @property
    def infeasible(self) -> bool:
        """True when every collected error is a size-cap violation."""
        return bool(self.errors) and all(e.kind == INFEASIBLE for e in self.errors)

    def _error(self, message: str, path: str, kind: str = MALFORMED) -> None:
        self.errors.append(ValidationError(message, path, kind))

    def _validate_resources(self, doc: Dict[str, Any]) -> None:
        low, high = doc["n_range"]
        if low > high:
            self._error(f"n_range is empty: {low} > {high}", "n_range")
        if high > MAX_TABLE_QUBITS:
            self._error(f"Resource tables go up to n={MAX_TABLE_QUBITS}", "n_range[1]", INFEASIBLE)

    def _validate_experiment(self, doc: Dict[str, Any]) -> None:
        n = doc["n"]
        if n > MAX_QUBITS:
            self._error(f"Dense simulation supports at most {MAX_QUBITS} qubits, got n={n}", "n", INFEASIBLE)
            return
        self._validate_gate(doc["gate"], n, "gate")
        self._validate_noise(doc.get("noise"), n)

        for tag in protocol_list(doc["protocol"]):
            cap = PROTOCOL_QUBIT_CAPS[tag]
            if n > cap:
                self._error(f"Protocol {tag} supports at most {cap} qubits, got n={n}", "protocol", INFEASIBLE)
        if doc["mode"] == "distribution-dump" and n > DUMP_QUBIT_CAP:
            self._error(f"distribution-dump supports at most {DUMP_QUBIT_CAP} qubits, got n={n}", "mode", INFEASIBLE)
        if doc["oracle"] and n > CLASSICAL_ORACLE_QUBIT_CAP:
            self._error(f"The oracle supports at most {CLASSICAL_ORACLE_QUBIT_CAP} qubits, got n={n}",
                        "oracle", INFEASIBLE)

        bases = doc.get("bases")
        if bases is not None:
            size = (1 << n) + 1
            for idx, j in enumerate(bases):
                if j >= size:
                    self._error(f"Basis index {j} out of range for {size} bases", f"bases[{idx}]")
            if bases[0] == bases[1]:
                self._error("The classical-fidelity bases must be distinct", "bases")

    def _validate_gate(self, gate: Any, n: int, path: str) -> None:
        if isinstance(gate, str):
            key = gate.upper()
            if key not in NAMED_GATES:
                self._error(f"Unknown gate '{gate}'. Available gates: {', '.join(NAMED_GATES)}", path)
            elif n < NAMED_GATES[key][1]:
                self._error(f"Gate {key} needs at least {NAMED_GATES[key][1]} qubits, got n={n}", path)
            return
        if "unitary" in gate:
            try:
                check_unitary(build_gate(gate, n))
            except FidelityLabError as exc:
                self._error(str(exc), f"{path}.unitary")

    def _validate_noise(self, noise: Any, n: int) -> None:
        entries = noise if isinstance(noise, list) else ([noise] if noise else [])
        for idx, entry in enumerate(entries):
            base = f"noise[{idx}]" if isinstance(noise, list) else "noise"
            for name, params in entry.items():
                if name == "depolarizing" and n > DEPOLARIZING_QUBIT_CAP:
                    self._error(f"Depolarizing noise supports at most {DEPOLARIZING_QUBIT_CAP} qubits, got n={n}",
                                f"{base}.{name}", INFEASIBLE)
                elif name == "overrotation":
                    axis = params["axis"]
                    if len(axis) != n:
                        self._error(f"Overrotation axis '{axis}' is not an {n}-qubit string", f"{base}.{name}.axis")
                elif name == "unitary_error":
                    self._validate_gate(params, n, f"{base}.{name}")


def with_defaults(data: Mapping[str, Any]) -> Dict[str, Any]:
    """The document with ``CONFIG_DEFAULTS`` filled in for absent keys."""
    doc = dict(CONFIG_DEFAULTS)
    doc.update(data)
    return doc


def merge_overrides(data: Mapping[str, Any], **overrides: Any) -> Dict[str, Any]:
    """Apply command-line overrides; ``None`` values leave the document untouched."""
    doc = dict(data)
    for key, value in overrides.items():
        if value is not None:
            doc[key] = value
    return doc


def config_hash(data: Mapping[str, Any]) -> str:
    """SHA-256 of the document serialized with sorted keys and compact separators."""
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_config(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a config file, raising ``ConfigError`` when it is not a JSON object."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([ValidationError(f"Cannot read config: {exc}")]) from exc
    return parse_config(text)


def parse_config(text: str) -> Dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([ValidationError(f"Invalid JSON: {exc.msg}", f"line {exc.lineno}")]) from exc
    if not isinstance(data, dict):
        raise ConfigError([ValidationError("Config must be a JSON object")])
    return data


def validated(data: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """Merge overrides, validate, and return the effective document (defaults not filled in).

    Raises:
        ConfigError: with ``infeasible`` set when only size caps were violated.
    """
    doc = merge_overrides(data, **(overrides or {}))
    validator = ConfigValidator()
    is_valid, errors = validator.validate(doc)
    if not is_valid:
        raise ConfigError(errors, infeasible=validator.infeasible)
    return doc

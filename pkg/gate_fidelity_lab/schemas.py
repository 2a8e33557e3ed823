"""JSON Schema (draft 2020-12) of experiment configs."""

PROTOCOL_NAMES = ["A", "B", "C"]
MODES = ["estimate", "resources", "distribution-dump"]
SHOT_MODES = ["finite", "infinite"]
SAMPLING_MODES = ["monte-carlo", "exhaustive"]

_PROBABILITY = {"type": "number", "minimum": 0, "maximum": 1}

# [re, im] pairs, one row per list
_UNITARY_GRID = {
    "type": "array",
    "minItems": 2,
    "items": {
        "type": "array",
        "minItems": 2,
        "items": {
            "type": "array",
            "prefixItems": [{"type": "number"}, {"type": "number"}],
            "minItems": 2,
            "maxItems": 2,
        },
    },
}

GATE_SCHEMA = {
    "oneOf": [
        {"type": "string", "minLength": 1},
        {
            "type": "object",
            "properties": {"unitary": _UNITARY_GRID},
            "required": ["unitary"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "random": {"enum": ["unitary", "clifford"]},
                "seed": {"type": "integer", "minimum": 0},
                "depth": {"type": "integer", "minimum": 0},
            },
            "required": ["random"],
            "additionalProperties": False,
        },
    ]
}

NOISE_ENTRY_SCHEMA = {
    "type": "object",
    "minProperties": 1,
    "maxProperties": 1,
    "properties": {
        "depolarizing": _PROBABILITY,
        "dephasing": _PROBABILITY,
        "amplitude_damping": _PROBABILITY,
        "overrotation": {
            "type": "object",
            "properties": {
                "axis": {"type": "string", "pattern": "^[1IXYZ]+$"},
                "angle": {"type": "number"},
            },
            "required": ["axis", "angle"],
            "additionalProperties": False,
        },
        "unitary_error": GATE_SCHEMA,
        "random": {
            "type": "object",
            "properties": {
                "seed": {"type": "integer", "minimum": 0},
                "kraus": {"type": "integer", "minimum": 1, "maximum": 16},
                "strength": _PROBABILITY,
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

_PROTOCOL = {"enum": PROTOCOL_NAMES}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "https://gate-fidelity-lab/config.schema.json",
    "title": "Gate fidelity experiment",
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "gate": GATE_SCHEMA,
        "noise": {
            "oneOf": [
                {"type": "null"},
                NOISE_ENTRY_SCHEMA,
                {"type": "array", "items": NOISE_ENTRY_SCHEMA},
            ]
        },
        "protocol": {
            "oneOf": [
                _PROTOCOL,
                {"type": "array", "items": _PROTOCOL, "minItems": 1, "uniqueItems": True},
            ]
        },
        "protocols": {"type": "array", "items": _PROTOCOL, "minItems": 1, "uniqueItems": True},
        "epsilon": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "delta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "oracle": {"type": "boolean"},
        "mode": {"enum": MODES},
        "shots": {"enum": SHOT_MODES},
        "sampling": {"enum": SAMPLING_MODES},
        "bases": {
            "type": "array",
            "items": {"type": "integer", "minimum": 0},
            "minItems": 2,
            "maxItems": 2,
        },
        "clifford": {"type": "boolean"},
        "n_range": {
            "type": "array",
            "items": {"type": "integer", "minimum": 1},
            "minItems": 2,
            "maxItems": 2,
        },
        "csv": {"type": "boolean"},
    },
    "additionalProperties": False,
    "allOf": [
        {
            "if": {
                "properties": {"mode": {"enum": ["estimate", "distribution-dump"]}},
            },
            "then": {"required": ["n", "gate"]},
        },
        {
            "if": {"required": ["mode"], "properties": {"mode": {"const": "resources"}}},
            "then": {"required": ["n_range"]},
        },
    ],
}

# Defaults filled in before a run (mode-independent keys only)
CONFIG_DEFAULTS = {
    "mode": "estimate",
    "noise": None,
    "protocol": "B",
    "epsilon": 0.1,
    "delta": 0.1,
    "seed": 0,
    "oracle": False,
    "shots": "finite",
    "sampling": "monte-carlo",
    "clifford": False,
    "csv": True,
}

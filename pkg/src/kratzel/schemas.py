"""JSON schemas of the CLI outputs (draft 2020-12)."""

_number = {"type": ["number", "null"]}

EVAL_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["rho", "nu", "u", "value", "log_value", "log_error", "method", "converged"],
    "properties": {
        "rho": {"type": "number"},
        "nu": {"type": "number"},
        "u": {"type": "number", "exclusiveMinimum": 0},
        "value": _number,
        "log_value": {"type": "number"},
        "log_error": _number,
        "method": {"enum": ["direct-quadrature", "laplace-form", "bessel-closed-form", "asymptotic-large-u"]},
        "converged": {"type": "boolean"},
    },
    "additionalProperties": False,
}

TABLE_ROW_SCHEMA = {
    "type": "object",
    "required": ["u", "value", "log_value", "log_error", "method"],
    "properties": {
        "u": {"type": "number"},
        "value": _number,
        "log_value": {"type": "number"},
        "log_error": _number,
        "method": {"type": "string"},
    },
    "additionalProperties": False,
}

TABLE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "array",
    "items": TABLE_ROW_SCHEMA,
}

SCAN_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["report", "rows"],
    "properties": {
        "report": {
            "type": "object",
            "required": ["rho", "nu", "lower_bound", "strictly_increasing", "bound_holds",
                         "phi_first", "phi_last", "counterexamples", "exploratory"],
            "properties": {
                "rho": {"type": "number"},
                "nu": {"type": "number"},
                "lower_bound": {"type": "number"},
                "strictly_increasing": {"type": "boolean"},
                "bound_holds": {"type": "boolean"},
                "phi_first": {"type": "number"},
                "phi_last": {"type": "number"},
                "counterexamples": {"type": "array"},
                "exploratory": {"const": True},
            },
        },
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["u", "phi", "lower_bound", "margin"],
                "properties": {k: {"type": "number"} for k in ("u", "phi", "lower_bound", "margin")},
                "additionalProperties": False,
            },
        },
    },
}

VERIFY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["selector", "passed", "reports"],
    "properties": {
        "selector": {"type": "string"},
        "passed": {"type": "boolean"},
        "reports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "points_tested", "passed", "min_margin", "exploratory", "violations",
                             "errors"],
                "properties": {
                    "name": {"type": "string"},
                    "points_tested": {"type": "integer", "minimum": 0},
                    "passed": {"type": "boolean"},
                    "min_margin": _number,
                    "exploratory": {"type": "boolean"},
                    "violations": {"type": "array"},
                    "errors": {"type": "array"},
                },
            },
        },
    },
}

DET_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["rho", "nu", "u", "n", "value", "log_abs_value", "condition_estimate", "trustworthy"],
    "properties": {
        "rho": {"type": "number"},
        "nu": {"type": "number"},
        "u": {"type": "number"},
        "n": {"type": "integer", "minimum": 1},
        "value": _number,
        "log_abs_value": _number,
        "condition_estimate": _number,
        "trustworthy": {"type": "boolean"},
    },
    "additionalProperties": False,
}

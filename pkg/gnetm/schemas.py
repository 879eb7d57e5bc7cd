# Copyright 2024 The gnetm-toolkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Module containing JSON schemas used by the toolkit."""

_PAIR = {
    "type": "array",
    "items": {"type": "integer", "minimum": 2},
    "minItems": 2,
    "maxItems": 2,
}

# Serialized machine RunReport.
RUN_REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "start": {"type": "integer", "minimum": 4},
        "limit": {"type": "integer", "minimum": 4},
        "controller": {"enum": ["basis1", "basis2", "basis3"]},
        "cells": {"type": "integer", "minimum": 0},
        "failures": {"type": "array", "items": {"type": "integer"}},
        "halted": {"type": "boolean"},
        "elapsed_ms": {"type": "number", "minimum": 0},
    },
    "required": ["start", "limit", "controller", "cells", "failures", "halted", "elapsed_ms"],
    "additionalProperties": False,
}

# One deletion audit per even number.
DELETION_AUDIT_SCHEMA = {
    "type": "object",
    "properties": {
        "ne": {"type": "integer", "minimum": 6, "multipleOf": 2},
        "rows_required_for_elimination": {"type": "integer", "minimum": 3},
        "interval_low_primes": {"type": "integer", "minimum": 0},
        "interval_high_primes": {"type": "integer", "minimum": 0},
        "mismatch_count_formula": {"type": "number"},
        "surviving_prime_pairs": {"type": "integer", "minimum": 0},
        "mismatch_count_exact": {"type": "integer", "minimum": 0},
        "formula_negative": {"type": "boolean"},
        "contradiction": {"type": "boolean"},
    },
    "required": [
        "ne",
        "rows_required_for_elimination",
        "interval_low_primes",
        "interval_high_primes",
        "mismatch_count_formula",
        "surviving_prime_pairs",
    ],
}

PARTITION_SET_SCHEMA = {
    "type": "object",
    "properties": {
        "ne": {"type": "integer", "minimum": 4},
        "pairs": {"type": "array", "items": _PAIR},
        "phi": {"type": "integer", "minimum": 0},
    },
    "required": ["ne", "pairs", "phi"],
}

PRIME_TABLE_SCHEMA = {
    "type": "object",
    "properties": {
        "limit": {"type": "integer", "minimum": 0},
        "count": {"type": "integer", "minimum": 0},
        "primes": {"type": "array", "items": {"type": "integer", "minimum": 2}},
    },
    "required": ["limit", "count", "primes"],
}

CONGRUENCE_SYSTEM_SCHEMA = {
    "type": "object",
    "properties": {
        "ne": {"type": "integer", "minimum": 4},
        "kind": {"enum": ["odd-complete", "prime-extended"]},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "modulus": {"type": "integer", "minimum": 1},
                    "residue": {"type": "integer", "minimum": 1},
                    "residue_is_prime": {"type": ["boolean", "null"]},
                },
                "required": ["modulus", "residue"],
            },
        },
    },
    "required": ["ne", "kind", "rows"],
}

SELECTION_SCHEMA = {
    "type": "object",
    "properties": {
        "ne": {"type": "integer"},
        "theta": {"type": "number"},
        "r": {"type": "integer", "minimum": 1},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "predicted": {"type": "number", "minimum": 0, "maximum": 1},
        "observed": {"type": "number", "minimum": 0, "maximum": 1},
    },
    "required": ["ne", "r", "trials", "predicted", "observed"],
}

# YAML configuration file accepted by `--config`.
CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "logging": {"type": "object"},
        "threads": {"type": ["integer", "null"], "minimum": 1},
        "guards": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 1},
        },
    },
    "additionalProperties": False,
}

PHI_RECORD_SCHEMA = {
    "type": "object",
    "properties": {
        "ne": {"type": "integer", "minimum": 4, "multipleOf": 2},
        "phi": {"type": "integer", "minimum": 0},
    },
    "required": ["ne", "phi"],
    "additionalProperties": False,
}

TABLE1_ROW_SCHEMA = {
    "type": "object",
    "properties": {
        "ne": {"type": "integer", "minimum": 4},
        "r": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
        "phi_computed": {"type": ["integer", "null"], "minimum": 0},
        "phi_paper": {"type": ["integer", "null"], "minimum": 0},
        "agree": {"type": ["boolean", "null"]},
    },
    "required": ["ne", "r", "phi_computed", "phi_paper", "agree"],
}

CRT_SCHEMA = {
    "type": "object",
    "properties": {
        "rows": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
            "minItems": 1,
        },
        "solution": {"type": "integer", "minimum": 0},
        "modulus": {"type": "integer", "minimum": 1},
    },
    "required": ["rows", "solution", "modulus"],
}

MATRIX_SCHEMA = {
    "type": "object",
    "properties": {
        "ne": {"type": "integer", "minimum": 4},
        "kind": {"enum": ["full", "regular", "max-antidiagonal", "prime"]},
        "labels": {"type": "array", "items": {"type": "integer"}},
        "cells": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
    },
    "required": ["ne", "kind", "labels", "cells"],
}

BENCH_SCHEMA = {
    "type": "object",
    "properties": {
        "task": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "elapsed_ms": {"type": "number", "minimum": 0},
        "throughput": {"type": "number", "minimum": 0},
    },
    "required": ["task", "n", "elapsed_ms", "throughput"],
}

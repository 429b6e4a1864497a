"""
Machine-readable verification reports.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Sequence

import numpy as np
from jsonschema import Draft202012Validator

from ..core.errors import ValidationError

logger = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1

CHECK_SCHEMA = {
    "type": "object",
    "required": ["name", "lhs", "rhs", "se", "n", "pass", "relation", "exact"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "lhs": {"type": "number"},
        "rhs": {"type": "number"},
        "se": {"type": "number", "minimum": 0},
        "n": {"type": "integer", "minimum": 0},
        "pass": {"type": "boolean"},
        "relation": {"enum": ["<=", ">="]},
        "exact": {"type": "boolean"},
        "margin": {"type": "number"},
        "details": {"type": "object"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "passed", "checks"],
    "properties": {
        "schema_version": {"const": REPORT_SCHEMA_VERSION},
        "passed": {"type": "boolean"},
        "checks": {"type": "array", "items": CHECK_SCHEMA},
        "meta": {"type": "object"},
    },
}


def _plain(value):
    """Convert numpy scalars and arrays into JSON-friendly Python values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass
class CheckReport:
    """Outcome of one numerical check.

    `relation` says which way the inequality goes: '<=' means the check
    passes when lhs is at most rhs plus the statistical margin, '>=' the
    reverse.
    """
    name: str
    lhs: float
    rhs: float
    se: float
    n: int
    passed: bool
    relation: str = '<='
    exact: bool = False
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs if self.relation == '<=' else self.lhs - self.rhs

    def to_dict(self) -> Dict[str, Any]:
        return _plain({
            "name": self.name,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "se": float(self.se),
            "n": int(self.n),
            "pass": bool(self.passed),
            "relation": self.relation,
            "exact": bool(self.exact),
            "margin": float(self.margin),
            "details": self.details,
        })


def validate_report(doc: Dict[str, Any]) -> Dict[str, Any]:
    errors = sorted(Draft202012Validator(REPORT_SCHEMA).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        where = "/".join(str(p) for p in errors[0].path) or "<root>"
        raise ValidationError(f"verification report invalid at {where}: {errors[0].message}")
    return doc


def build_report(checks: Sequence[CheckReport], **meta) -> Dict[str, Any]:
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "passed": all(c.passed for c in checks),
        "checks": [c.to_dict() for c in checks],
        "meta": _plain(meta),
    }
    return validate_report(doc)


def write_report(checks: Sequence[CheckReport], path, **meta) -> Dict[str, Any]:
    doc = build_report(checks, **meta)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(doc, f, indent=2, sort_keys=True)
    logger.info("Verification report written to %s (%s)", path, "PASS" if doc["passed"] else "FAIL")
    return doc


def load_report(path) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        return validate_report(json.load(f))

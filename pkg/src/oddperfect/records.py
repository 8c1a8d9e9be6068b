"""Line-delimited JSON records emitted by ``--format records``.

Every line is one JSON object with a ``type`` field; keys are sorted so
identical inputs give byte-identical output.  ``parse_record`` validates a
line against the schema for its type.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator
from typing import Any

import jsonschema

from .criteria import FilterVerdict, ParityCertificate, ResidueMatrix, ShapeSpec
from .errors import DomainError
from .euler_form import EulerFormReport, LemmaVerification
from .factor import Classification
from .search import PipelineStats, ScanReport, ShapeResult

_INT = {"type": "integer"}
_NAT = {"type": "integer", "minimum": 0}
_SYMBOL = {"type": "integer", "enum": [-1, 0, 1]}
_STR = {"type": "string"}

_VERDICT = {
    "type": "object",
    "required": ["criterion", "outcome", "undecided"],
    "properties": {
        "criterion": _STR,
        "outcome": {"enum": ["reject", "pass", "inconclusive"]},
        "witness": {"type": "object"},
        "reason": _STR,
        "undecided": {"type": "boolean"},
    },
}


def _obj(required: dict[str, Any], optional: dict[str, Any] | None = None) -> dict:
    props = {"type": {"type": "string"}, **required, **(optional or {})}
    return {
        "type": "object",
        "required": ["type", *required],
        "properties": props,
        "additionalProperties": False,
    }


SCHEMAS: dict[str, dict] = {
    "classification": _obj(
        {"n": _NAT, "kind": {"enum": ["deficient", "perfect", "abundant"]},
         "sigma": _NAT, "aliquot_sum": _NAT}
    ),
    "sigma": _obj({"n": _NAT, "factorization": _STR, "sigma": _NAT}),
    "factorization": _obj(
        {"n": _NAT, "factorization": _STR, "complete": {"type": "boolean"}},
        {"cofactor": _NAT},
    ),
    "divisors": _obj(
        {"n": _NAT, "factorization": _STR, "formula_count": _NAT},
        {"enumerated_count": _NAT, "agree": {"type": "boolean"}},
    ),
    "symbol": _obj(
        {"symbol": {"enum": ["legendre", "jacobi"]}, "a": _INT, "modulus": _NAT, "value": _SYMBOL}
    ),
    "reciprocity": _obj(
        {"p1": _NAT, "p2": _NAT, "p2_over_p1": _SYMBOL, "p1_over_p2": _SYMBOL,
         "both_3_mod_4": {"type": "boolean"}}
    ),
    "euler_form": _obj(
        {
            "factorization": _STR,
            "overall": {"type": "boolean"},
            "checks": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["lemma", "status", "witness"],
                    "properties": {
                        "lemma": {"enum": ["L0", "L2", "L3", "L4", "L5", "L6"]},
                        "status": {"enum": ["satisfied", "violated"]},
                        "witness": _STR,
                    },
                },
            },
        }
    ),
    "verdict": _obj(
        {"shape": _STR, "criterion": _STR,
         "outcome": _VERDICT["properties"]["outcome"], "undecided": {"type": "boolean"}},
        {"witness": {"type": "object"}, "reason": _STR},
    ),
    "certificate": _obj({"shape": _STR, "entries": {"type": "array"}}),
    "residue_matrix": _obj(
        {"primes": {"type": "array", "items": _NAT},
         "entries": {"type": "array", "items": {"type": "array", "items": _SYMBOL}}}
    ),
    "perfect": _obj({"n": _NAT, "odd": {"type": "boolean"}}),
    "scan": _obj(
        {
            "start": _NAT,
            "end": _NAT,
            "odd_only": {"type": "boolean"},
            "perfect_found": {"type": "array", "items": _NAT},
            "odd_perfect_found": {"type": "array", "items": _NAT},
            "scanned": _NAT,
            "elapsed": {"type": "number"},
            "throughput": {"type": "number"},
        }
    ),
    "shape": _obj({"shape": _STR}),
    "shape_result": _obj(
        {
            "shape": _STR,
            "status": {"enum": ["rejected", "inconclusive", "survivor"]},
            "rejected_by": {"type": ["string", "null"]},
            "verdicts": {"type": "array", "items": _VERDICT},
        }
    ),
    "pipeline": _obj(
        {
            "criteria": {"type": "array", "items": _STR},
            "shapes_in": _NAT,
            "rejected_by": {"type": "object", "additionalProperties": _NAT},
            "inconclusive": _NAT,
            "survivor_count": _NAT,
            "survivors": {"type": "array", "items": _STR},
        }
    ),
    "lemma_verification": _obj(
        {
            "lemma": _STR,
            "bound": _NAT,
            "domain": _STR,
            "trials": _NAT,
            "failures": {"type": "array"},
            "passed": {"type": "boolean"},
        }
    ),
}


def dumps(record: dict[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def parse_record(line: str) -> dict[str, Any]:
    """Decode one record line and validate it against its type's schema."""
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DomainError(f"not a JSON record: {exc}") from None
    if not isinstance(record, dict) or record.get("type") not in SCHEMAS:
        raise DomainError(f"unknown record type in {line.strip()[:80]!r}")
    try:
        jsonschema.validate(record, SCHEMAS[record["type"]])
    except jsonschema.ValidationError as exc:
        raise DomainError(f"invalid {record['type']} record: {exc.message}") from None
    return record


def read_records(lines: Iterable[str]) -> Iterator[dict[str, Any]]:
    for line in lines:
        if line.strip():
            yield parse_record(line)


def _jsonable(obj):
    # Witness dicts use int keys (primes); JSON needs strings.
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def classification_record(c: Classification) -> dict:
    return {"type": "classification", "n": c.n, "kind": c.kind.value,
            "sigma": c.sigma, "aliquot_sum": c.aliquot_sum}


def euler_form_record(r: EulerFormReport) -> dict:
    return {
        "type": "euler_form",
        "factorization": r.factorization,
        "overall": r.overall,
        "checks": [
            {"lemma": c.lemma, "status": c.status.value, "witness": c.witness} for c in r.checks
        ],
    }


def verdict_dict(v: FilterVerdict) -> dict:
    d: dict[str, Any] = {"criterion": v.criterion, "outcome": v.outcome.value,
                         "undecided": v.undecided}
    if v.witness is not None:
        d["witness"] = _jsonable(v.witness)
    if v.reason is not None:
        d["reason"] = v.reason
    return d


def verdict_record(shape: ShapeSpec, v: FilterVerdict) -> dict:
    return {"type": "verdict", "shape": str(shape), **verdict_dict(v)}


def certificate_record(c: ParityCertificate) -> dict:
    return {"type": "certificate", **_jsonable(c.to_dict())}


def matrix_record(m: ResidueMatrix) -> dict:
    return {"type": "residue_matrix", **m.to_dict()}


def scan_records(r: ScanReport) -> list[dict]:
    out = [{"type": "perfect", "n": n, "odd": n % 2 == 1} for n in r.perfect_found]
    out.append(
        {
            "type": "scan",
            "start": r.start,
            "end": r.end,
            "odd_only": r.odd_only,
            "perfect_found": r.perfect_found,
            "odd_perfect_found": r.odd_perfect_found,
            "scanned": r.scanned,
            "elapsed": round(r.elapsed, 6),
            "throughput": round(r.throughput, 1),
        }
    )
    return out


def shape_record(s: ShapeSpec) -> dict:
    return {"type": "shape", "shape": str(s)}


def shape_result_record(r: ShapeResult) -> dict:
    return {
        "type": "shape_result",
        "shape": str(r.shape),
        "status": r.status,
        "rejected_by": r.rejected_by,
        "verdicts": [verdict_dict(v) for v in r.verdicts],
    }


def pipeline_record(s: PipelineStats) -> dict:
    # Timing is left out so that repeated runs are byte-identical.
    return {
        "type": "pipeline",
        "criteria": list(s.criteria),
        "shapes_in": s.shapes_in,
        "rejected_by": dict(s.rejected_by),
        "inconclusive": s.inconclusive,
        "survivor_count": s.survivor_count,
        "survivors": [str(x) for x in s.survivors],
    }


def lemma_record(r: LemmaVerification) -> dict:
    return {
        "type": "lemma_verification",
        "lemma": r.lemma,
        "bound": r.bound,
        "domain": r.domain,
        "trials": r.trials,
        "failures": _jsonable(r.failures),
        "passed": r.passed,
    }

"""Model file parsing and attribution report rendering.

Model files are strict JSON documents with exactly these fields:

    {
      "name": "optional display name",
      "state_matrix": [[...], ...],      n x n numbers
      "sensors": [{"name": "...", "row": [...]}, ...],
      "horizon_samples": 10
    }

Unknown fields are rejected everywhere so that fixture files stay
unambiguous ground truth. Parse failures are reported in three distinct
stages, each with a location: JSON syntax, document schema, and model
validation.

Reports come in two renderings: a human table whose columns are
Sensor | Value Function | Standalone Value | Shapley Value, and a JSON
document with a fixed key layout and full-precision numbers so byte-level
diffing of outputs is meaningful.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .model import LtiModel, Sensor, validate_model
from .shapley import AttributionResult, AxiomReport

__all__ = [
    "ModelDocument",
    "ModelDocumentError",
    "PerSensorReport",
    "ReportDocument",
    "build_report",
    "parse_model",
    "parse_model_document",
    "render_json",
    "render_model_document",
    "render_table",
]

_DOCUMENT_FIELDS = {"name", "state_matrix", "sensors", "horizon_samples"}
_REQUIRED_FIELDS = {"state_matrix", "sensors", "horizon_samples"}
_SENSOR_FIELDS = {"name", "row"}


class ModelDocumentError(ValueError):
    """A model file was rejected; ``kind`` is syntax, schema, or validation."""

    def __init__(self, kind: str, message: str, location: str | None = None):
        self.kind = kind
        self.location = location
        where = f" at {location}" if location else ""
        super().__init__(f"model document {kind} error{where}: {message}")


@dataclass(frozen=True)
class ModelDocument:
    """A parsed model file: the validated model plus its display name."""

    name: str | None
    model: LtiModel


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _schema_error(message: str, location: str) -> ModelDocumentError:
    return ModelDocumentError("schema", message, location)


def _number_row(value: Any, location: str) -> list[float]:
    if not isinstance(value, list) or not value:
        raise _schema_error("expected a non-empty array of numbers", location)
    for j, entry in enumerate(value):
        if not _is_number(entry):
            raise _schema_error(
                f"expected a number, got {entry!r}", f"{location}[{j}]"
            )
    return [float(entry) for entry in value]


def parse_model_document(text: str) -> ModelDocument:
    """Parse and validate a strict-JSON model document."""

    def reject_constant(token: str):
        raise ModelDocumentError(
            "syntax", f"non-standard JSON constant {token!r} is not allowed"
        )

    try:
        data = json.loads(text, parse_constant=reject_constant)
    except json.JSONDecodeError as err:
        raise ModelDocumentError(
            "syntax", err.msg, f"line {err.lineno} column {err.colno}"
        ) from None

    if not isinstance(data, dict):
        raise _schema_error("expected a JSON object", "document")
    unknown = set(data) - _DOCUMENT_FIELDS
    if unknown:
        raise _schema_error(
            f"unknown field(s): {', '.join(sorted(unknown))}", "document"
        )
    missing = _REQUIRED_FIELDS - set(data)
    if missing:
        raise _schema_error(
            f"missing required field(s): {', '.join(sorted(missing))}", "document"
        )

    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise _schema_error("expected a string", "name")

    raw_matrix = data["state_matrix"]
    if not isinstance(raw_matrix, list) or not raw_matrix:
        raise _schema_error("expected a non-empty array of rows", "state_matrix")
    matrix = [
        _number_row(row, f"state_matrix[{i}]") for i, row in enumerate(raw_matrix)
    ]
    width = len(matrix[0])
    for i, row in enumerate(matrix):
        if len(row) != width:
            raise _schema_error(
                f"ragged matrix: row has {len(row)} entries, expected {width}",
                f"state_matrix[{i}]",
            )

    raw_sensors = data["sensors"]
    if not isinstance(raw_sensors, list):
        raise _schema_error("expected an array of sensor objects", "sensors")
    sensors = []
    for i, raw in enumerate(raw_sensors):
        location = f"sensors[{i}]"
        if not isinstance(raw, dict):
            raise _schema_error("expected a sensor object", location)
        unknown = set(raw) - _SENSOR_FIELDS
        if unknown:
            raise _schema_error(
                f"unknown field(s): {', '.join(sorted(unknown))}", location
            )
        if _SENSOR_FIELDS - set(raw):
            raise _schema_error(
                f"missing required field(s): "
                f"{', '.join(sorted(_SENSOR_FIELDS - set(raw)))}",
                location,
            )
        if not isinstance(raw["name"], str) or not raw["name"]:
            raise _schema_error("expected a non-empty string", f"{location}.name")
        sensors.append(
            Sensor(raw["name"], _number_row(raw["row"], f"{location}.row"))
        )

    horizon = data["horizon_samples"]
    if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 1:
        raise _schema_error(
            f"expected a positive integer, got {horizon!r}", "horizon_samples"
        )

    model = LtiModel(matrix, tuple(sensors), horizon)
    result = validate_model(model)
    if not result.ok:
        raise ModelDocumentError("validation", "; ".join(result.violations))
    return ModelDocument(name, model)


def parse_model(text: str) -> LtiModel:
    """Parse a strict-JSON model document, returning just the model."""
    return parse_model_document(text).model


def render_model_document(doc: ModelDocument) -> str:
    """Serialize a model document to the strict JSON format, round-trip exact."""
    payload: dict[str, Any] = {}
    if doc.name is not None:
        payload["name"] = doc.name
    payload["state_matrix"] = [
        [float(x) for x in row] for row in doc.model.state_matrix
    ]
    payload["sensors"] = [
        {"name": s.name, "row": [float(x) for x in s.row]}
        for s in doc.model.sensors
    ]
    payload["horizon_samples"] = int(doc.model.horizon_samples)
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


@dataclass(frozen=True)
class PerSensorReport:
    """One report row; ``share_of_total`` is omitted when the grand value is 0."""

    name: str
    standalone: float
    shapley: float
    share_of_total: float | None


@dataclass(frozen=True)
class ReportDocument:
    """Complete attribution report for one model and metric."""

    model_name: str
    metric: str
    horizon_samples: int
    method: dict[str, Any]
    observable: bool
    grand_value: float
    efficiency_residual: float
    per_sensor: tuple[PerSensorReport, ...]
    axiom_report: AxiomReport | None


def build_report(
    model_name: str,
    result: AttributionResult,
    observable: bool,
    axiom_report: AxiomReport | None,
) -> ReportDocument:
    """Assemble the report document from an attribution result."""
    method: dict[str, Any] = {"kind": result.method.kind}
    if result.method.kind != "exact":
        method["num_permutations"] = result.method.num_permutations
        method["seed"] = result.method.seed
    grand = result.grand_value
    per_sensor = tuple(
        PerSensorReport(
            name=s.name,
            standalone=s.standalone,
            shapley=s.shapley,
            share_of_total=s.shapley / grand if grand > 0 else None,
        )
        for s in result.sensors
    )
    return ReportDocument(
        model_name=model_name,
        metric=result.metric.cli_name,
        horizon_samples=result.horizon_samples,
        method=method,
        observable=observable,
        grand_value=grand,
        efficiency_residual=result.efficiency_residual,
        per_sensor=per_sensor,
        axiom_report=axiom_report,
    )


def _axioms_to_dict(axioms: AxiomReport | None) -> dict[str, Any] | None:
    if axioms is None:
        return None
    return {
        "efficiency": {
            "residual": axioms.efficiency.residual,
            "tolerance": axioms.efficiency.tolerance,
            "passed": axioms.efficiency.passed,
        },
        "symmetric_pairs": [
            {
                "sensors": [pair.first, pair.second],
                "shapley_gap": pair.shapley_gap,
                "passed": pair.passed,
            }
            for pair in axioms.symmetric_pairs
        ],
        "dummy_sensors": [
            {
                "name": dummy.name,
                "shapley_magnitude": dummy.shapley_magnitude,
                "passed": dummy.passed,
            }
            for dummy in axioms.dummy_sensors
        ],
        "exhaustive": axioms.exhaustive,
        "passed": axioms.passed,
    }


def render_json(report: ReportDocument) -> str:
    """Schema-stable JSON rendering: fixed key order, full-precision floats.

    Numbers are emitted in Python's shortest exact round-trip form, so every
    significant digit of the underlying double survives into the file.
    """
    per_sensor = []
    for row in report.per_sensor:
        entry: dict[str, Any] = {
            "name": row.name,
            "standalone": row.standalone,
            "shapley": row.shapley,
        }
        if row.share_of_total is not None:
            entry["share_of_total"] = row.share_of_total
        per_sensor.append(entry)
    payload = {
        "model_name": report.model_name,
        "metric": report.metric,
        "horizon_samples": report.horizon_samples,
        "method": report.method,
        "observable": report.observable,
        "grand_value": report.grand_value,
        "efficiency_residual": report.efficiency_residual,
        "per_sensor": per_sensor,
        "axiom_report": _axioms_to_dict(report.axiom_report),
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _fmt(value: float) -> str:
    return f"{value:.10g}"


def render_table(report: ReportDocument) -> str:
    """Human-readable table mirroring the standalone/Shapley column layout."""
    header = ("Sensor", "Value Function", "Standalone Value", "Shapley Value")
    rows = [
        (row.name, report.metric, _fmt(row.standalone), _fmt(row.shapley))
        for row in report.per_sensor
    ]
    widths = [
        max(len(header[c]), *(len(r[c]) for r in rows)) for c in range(len(header))
    ]

    def line(cells) -> str:
        return "  ".join(cell.ljust(w) for cell, w in zip(cells, widths)).rstrip()

    method = report.method["kind"]
    if method != "exact":
        method += (
            f" ({report.method['num_permutations']} permutations, "
            f"seed {report.method['seed']})"
        )
    out = [
        f"model: {report.model_name}    metric: {report.metric}    "
        f"horizon samples: {report.horizon_samples}    method: {method}",
        "",
        line(header),
        line(tuple("-" * w for w in widths)),
    ]
    out.extend(line(r) for r in rows)
    out.append("")
    out.append(f"grand value:         {_fmt(report.grand_value)}")
    out.append(f"efficiency residual: {_fmt(report.efficiency_residual)}")
    out.append(f"fully observable:    {'yes' if report.observable else 'no'}")
    axioms = report.axiom_report
    if axioms is not None:
        pairs = (
            "; ".join(f"({p.first}, {p.second})" for p in axioms.symmetric_pairs)
            or "none"
        )
        dummies = ", ".join(d.name for d in axioms.dummy_sensors) or "none"
        out.append(
            f"axioms:              {'pass' if axioms.passed else 'FAIL'} "
            f"(symmetric pairs: {pairs}; dummy sensors: {dummies})"
        )
    return "\n".join(out) + "\n"

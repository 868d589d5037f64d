"""Standalone reader for the newline-delimited JSON trace format."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List

SUPPORTED_SCHEMA_VERSION = 1

_RECORD_FIELDS = ("step", "t", "ego", "others", "action", "cost")
_VEHICLE_FIELDS = ("x", "y", "heading", "length", "width")


class TraceParseError(ValueError):
    """Raised when a trace file does not match the supported schema."""


@dataclass
class Trace:
    """Parsed trace: header metadata plus one dict per step record."""

    scenario: str
    seed: int
    t1: float
    outcome: str
    road: Dict[str, Any]
    records: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.records)


def _check_vehicle(vehicle: Dict[str, Any], index: int, path: str) -> None:
    for key in _VEHICLE_FIELDS:
        if key not in vehicle:
            raise TraceParseError(
                f"{path}: record {index}: vehicle missing field {key!r}"
            )


def load_trace(path: str) -> Trace:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise TraceParseError(f"{path}: empty trace file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise TraceParseError(f"{path}: malformed header: {exc}") from exc
    if not isinstance(header, dict) or header.get("kind") != "trace-header":
        raise TraceParseError(f"{path}: first line is not a trace header")
    version = header.get("schema_version")
    if version != SUPPORTED_SCHEMA_VERSION:
        raise TraceParseError(
            f"{path}: schema version {version!r} is not supported "
            f"(this renderer reads version {SUPPORTED_SCHEMA_VERSION})"
        )
    records: List[Dict[str, Any]] = []
    for i, line in enumerate(lines[1:]):
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceParseError(f"{path}: malformed record {i}: {exc}") from exc
        if not isinstance(raw, dict):
            raise TraceParseError(f"{path}: record {i} is not an object")
        for key in _RECORD_FIELDS:
            if key not in raw:
                raise TraceParseError(f"{path}: record {i} missing field {key!r}")
        _check_vehicle(raw["ego"], i, path)
        for other in raw["others"]:
            _check_vehicle(other, i, path)
        records.append(raw)
    declared = header.get("steps")
    if declared != len(records):
        raise TraceParseError(
            f"{path}: header declares {declared!r} records, found {len(records)}"
        )
    return Trace(
        scenario=header.get("scenario", ""),
        seed=int(header.get("seed", 0)),
        t1=float(header.get("t1", 1.0)),
        outcome=header.get("outcome", ""),
        road=header.get("road", {}),
        records=records,
    )

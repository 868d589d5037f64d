"""Per-run trace records and their newline-delimited JSON serialization."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .costs import CostBreakdown
from .errors import TraceFormatError
from .road import RoadMap
from .world import DriveAction, Lateral, VehicleState, WorldState

SCHEMA_VERSION = 1

Outcome = str  # "success" | "collision" | "timeout"


def vehicle_snapshot(v: VehicleState, road: RoadMap) -> Dict[str, float]:
    x, y, heading = road.reference_line.to_cartesian(
        min(max(v.s, 0.0), road.reference_line.length), v.d
    )
    return {
        "s": v.s,
        "d": v.d,
        "speed": v.speed,
        "accel": v.accel,
        "lane": v.lane,
        "length": v.length,
        "width": v.width,
        "x": x,
        "y": y,
        "heading": heading,
    }


@dataclass(frozen=True)
class TraceRecord:
    """One snapshot per planning step: world, chosen action, and step costs.

    Record 0 is the initial world; record k > 0 is the world after executing
    the k-th action.  ``action`` is the action chosen *at* this world (None on
    the final record).
    """

    step: int
    t: float
    ego: Dict[str, float]
    others: List[Dict[str, float]]
    action: Optional[Dict[str, Any]]
    cost: Dict[str, float]
    planner: Optional[Dict[str, Any]] = None


def action_to_dict(a: DriveAction, jerk_set: Sequence[float]) -> Dict[str, Any]:
    return {
        "jerk_level": a.jerk_level,
        "jerk": jerk_set[a.jerk_level],
        "lateral": a.lateral.name.lower(),
    }


def action_from_dict(d: Dict[str, Any]) -> DriveAction:
    return DriveAction(int(d["jerk_level"]), Lateral[d["lateral"].upper()])


def cost_to_dict(c: CostBreakdown) -> Dict[str, float]:
    return asdict(c)


@dataclass
class Trace:
    scenario: str
    seed: int
    t1: float
    outcome: Outcome
    records: List[TraceRecord]
    total_cost: Dict[str, float]
    road: Dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def steps(self) -> int:
        return len(self.records)


def road_summary(road: RoadMap) -> Dict[str, Any]:
    """Enough geometry for a renderer: centerline polyline plus lane layout."""
    return {
        "centerline": [[x, y] for x, y, _ in road.reference_line.waypoints],
        "lane_count": road.lane_count,
        "lane_width": road.lane_width,
        "lane_d_centers": list(road.lane_d_centers),
    }


def export_trace(trace: Trace, path: str) -> None:
    """Write one header line plus one JSON record per step."""
    header = {
        "kind": "trace-header",
        "schema_version": trace.schema_version,
        "scenario": trace.scenario,
        "seed": trace.seed,
        "t1": trace.t1,
        "outcome": trace.outcome,
        "total_cost": trace.total_cost,
        "road": trace.road,
        "steps": trace.steps,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header) + "\n")
        for rec in trace.records:
            fh.write(json.dumps(asdict(rec)) + "\n")


def load_trace(path: str) -> Trace:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise TraceFormatError(f"{path}: empty trace file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"{path}: malformed header: {exc}") from exc
    if header.get("kind") != "trace-header":
        raise TraceFormatError(f"{path}: missing trace header")
    version = header.get("schema_version")
    if version != SCHEMA_VERSION:
        raise TraceFormatError(
            f"{path}: unsupported schema version {version!r} (expected {SCHEMA_VERSION})"
        )
    records: List[TraceRecord] = []
    for i, line in enumerate(lines[1:]):
        try:
            raw = json.loads(line)
            records.append(TraceRecord(**raw))
        except (json.JSONDecodeError, TypeError) as exc:
            raise TraceFormatError(f"{path}: malformed record {i}: {exc}") from exc
    if header.get("steps") != len(records):
        raise TraceFormatError(
            f"{path}: header declares {header.get('steps')} records, found {len(records)}"
        )
    return Trace(
        scenario=header["scenario"],
        seed=header["seed"],
        t1=header["t1"],
        outcome=header["outcome"],
        records=records,
        total_cost=header["total_cost"],
        road=header.get("road", {}),
        schema_version=version,
    )


def trace_total(trace: Trace) -> float:
    return float(trace.total_cost["total"])

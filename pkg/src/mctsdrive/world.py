"""Vehicle states, the discrete action set, world stepping, and collision checks.

All vehicles are axis-aligned rectangles in the (s, d) plane.  The ego is
stepped by jerk/lane actions under kinematic limits; every other vehicle
follows a known script (perfect prediction), so its state is a pure function
of time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import IntEnum
from typing import Optional, Sequence, Tuple

from .errors import InfeasibleActionError
from .road import RoadMap


class Lateral(IntEnum):
    KEEP = 0
    LEFT_CHANGE = 1
    RIGHT_CHANGE = 2


@dataclass(frozen=True, order=True)
class DriveAction:
    """(longitudinal jerk level, lateral maneuver); the tree's edge label.

    ``jerk_level`` indexes into the configured jerk set.  Ordering is the
    canonical tie-break order: jerk ascending, then keep < left < right.
    """

    jerk_level: int
    lateral: Lateral = Lateral.KEEP


@dataclass(frozen=True)
class VehicleState:
    s: float
    d: float
    speed: float
    accel: float
    lane: int
    length: float = 4.5
    width: float = 1.8


@dataclass(frozen=True)
class KinematicLimits:
    v_max: float = 20.0
    v_min: float = 0.0
    a_max: float = 3.0
    a_min: float = -5.0
    jerk_set: Tuple[float, ...] = (-2.0, -1.0, 0.0, 1.0, 2.0)
    lane_change_duration: float = 1.0

    def __post_init__(self) -> None:
        js = self.jerk_set
        if 0.0 not in js:
            raise ValueError("jerk_set must contain 0 (speed maintenance)")
        if sorted(js) != list(js):
            raise ValueError("jerk_set must be sorted ascending")
        if sorted(-j for j in js) != sorted(js):
            raise ValueError("jerk_set must be symmetric about 0")
        if self.lane_change_duration <= 0:
            raise ValueError("lane_change_duration must be positive")

    @property
    def zero_jerk_level(self) -> int:
        return self.jerk_set.index(0.0)


@dataclass(frozen=True)
class WorldState:
    """Ego + other vehicles + simulation clock.

    ``lane_change_progress`` is (target_lane, fraction) while the ego's lane
    change is in flight; lane changes are atomic commitments and only
    lateral=keep is offered until the change completes.
    """

    t: float
    ego: VehicleState
    others: Tuple[VehicleState, ...] = ()
    lane_change_progress: Optional[Tuple[int, float]] = None


# ---------------------------------------------------------------------------
# Scripts for the other vehicles


class ScriptMode(IntEnum):
    CONSTANT_SPEED = 0
    PIECEWISE = 1


@dataclass(frozen=True)
class ScriptSegment:
    t_start: float
    speed: float
    lane: int


@dataclass(frozen=True)
class VehicleScript:
    mode: ScriptMode
    segments: Tuple[ScriptSegment, ...] = ()

    def __post_init__(self) -> None:
        ts = [seg.t_start for seg in self.segments]
        if ts != sorted(ts):
            raise ValueError("script segments must be time-ordered")
        for a, b in zip(self.segments, self.segments[1:]):
            if abs(b.lane - a.lane) > 1:
                raise ValueError("script lane transitions must be adjacent")


CONSTANT_SPEED = VehicleScript(ScriptMode.CONSTANT_SPEED)


@dataclass(frozen=True)
class ScriptedVehicle:
    initial: VehicleState
    script: VehicleScript = CONSTANT_SPEED


def script_state(
    sv: ScriptedVehicle, road: RoadMap, limits: KinematicLimits, t: float
) -> VehicleState:
    """Deterministic state of a scripted vehicle at time t >= 0."""
    init = sv.initial
    script = sv.script
    if script.mode is ScriptMode.CONSTANT_SPEED or not script.segments:
        return replace(init, s=init.s + init.speed * t)

    centers = road.lane_d_centers
    dur = limits.lane_change_duration
    s = init.s
    lane = init.lane
    d = init.d
    speed = init.speed
    prev_t = 0.0
    # Pending lateral transition: (t_begin, d_from, d_to, lane_to)
    transition: Optional[Tuple[float, float, float, int]] = None
    for seg in script.segments:
        if seg.t_start > t:
            break
        s += speed * (seg.t_start - prev_t)
        prev_t = seg.t_start
        speed = seg.speed
        if seg.lane != lane:
            transition = (seg.t_start, centers[lane], centers[seg.lane], seg.lane)
            lane = seg.lane
    s += speed * (t - prev_t)
    if transition is not None:
        t0, d_from, d_to, lane_to = transition
        frac = min(1.0, (t - t0) / dur)
        d = d_from + frac * (d_to - d_from)
        lane = lane_to if frac >= 1.0 else sv_lane_before(lane_to, d_from, centers)
    return replace(init, s=s, d=d, speed=speed, lane=lane)


def sv_lane_before(lane_to: int, d_from: float, centers: Tuple[float, ...]) -> int:
    """Lane index a scripted vehicle keeps until its transition completes."""
    for i, c in enumerate(centers):
        if math.isclose(c, d_from, abs_tol=1e-9):
            return i
    return lane_to


def others_at(
    scripted: Sequence[ScriptedVehicle],
    road: RoadMap,
    limits: KinematicLimits,
    t: float,
) -> Tuple[VehicleState, ...]:
    return tuple(script_state(sv, road, limits, t) for sv in scripted)


def step_others(
    w: WorldState,
    scripted: Sequence[ScriptedVehicle],
    road: RoadMap,
    limits: KinematicLimits,
    dt: float,
) -> WorldState:
    """Advance only the scripted vehicles (and the clock) by dt."""
    t_new = w.t + dt
    return replace(w, t=t_new, others=others_at(scripted, road, limits, t_new))


# ---------------------------------------------------------------------------
# Ego stepping


def feasible_actions(
    w: WorldState, limits: KinematicLimits, road: RoadMap
) -> list[DriveAction]:
    """Jerk levels x lateral maneuvers, in canonical order.

    Lane changes off the road edge are removed, and while a lane change is
    in flight only lateral=keep is offered.  Never empty.
    """
    if w.lane_change_progress is not None:
        laterals = (Lateral.KEEP,)
    else:
        laterals = [Lateral.KEEP]
        if w.ego.lane < road.lane_count - 1:
            laterals.append(Lateral.LEFT_CHANGE)
        if w.ego.lane > 0:
            laterals.append(Lateral.RIGHT_CHANGE)
    return [
        DriveAction(j, lat)
        for j in range(len(limits.jerk_set))
        for lat in laterals
    ]


def ego_kinematics(
    speed: float, accel: float, jerk: float, dt: float, limits: KinematicLimits
) -> Tuple[float, float, float]:
    """One trapezoidal jerk step: returns (speed', accel', delta_s).

    Acceleration saturating a speed bound is zeroed so jerk actions retain
    authority at the bounds.
    """
    a_new = accel + jerk * dt
    if a_new > limits.a_max:
        a_new = limits.a_max
    elif a_new < limits.a_min:
        a_new = limits.a_min
    v_new = speed + 0.5 * (accel + a_new) * dt
    if v_new > limits.v_max:
        v_new = limits.v_max
    elif v_new < limits.v_min:
        v_new = limits.v_min
    ds = 0.5 * (speed + v_new) * dt
    if v_new >= limits.v_max and a_new > 0.0:
        a_new = 0.0
    elif v_new <= limits.v_min and a_new < 0.0:
        a_new = 0.0
    return v_new, a_new, ds


def step_ego(
    w: WorldState,
    a: DriveAction,
    limits: KinematicLimits,
    road: RoadMap,
    dt: float,
) -> WorldState:
    """Apply one ego action for dt seconds; scripted vehicles are untouched."""
    if a not in feasible_actions(w, limits, road):
        raise InfeasibleActionError(f"action {a} infeasible in lane {w.ego.lane}")
    ego = w.ego
    jerk = limits.jerk_set[a.jerk_level]
    v_new, a_new, ds = ego_kinematics(ego.speed, ego.accel, jerk, dt, limits)

    centers = road.lane_d_centers
    lane = ego.lane
    d = ego.d
    progress = w.lane_change_progress
    if progress is None and a.lateral is not Lateral.KEEP:
        target = lane + 1 if a.lateral is Lateral.LEFT_CHANGE else lane - 1
        progress = (target, 0.0)
    if progress is not None:
        target, frac = progress
        frac = min(1.0, frac + dt / limits.lane_change_duration)
        origin_center = centers[lane]
        d = origin_center + frac * (centers[target] - origin_center)
        if frac >= 1.0 - 1e-12:
            d = centers[target]
            lane = target
            progress = None
        else:
            progress = (target, frac)

    new_ego = replace(ego, s=ego.s + ds, d=d, speed=v_new, accel=a_new, lane=lane)
    return replace(w, t=w.t + dt, ego=new_ego, lane_change_progress=progress)


def advance_world(
    w: WorldState,
    a: DriveAction,
    scripted: Sequence[ScriptedVehicle],
    road: RoadMap,
    limits: KinematicLimits,
    dt: float,
) -> WorldState:
    """Step the ego by an action and the scripted traffic to the new time."""
    stepped = step_ego(w, a, limits, road, dt)
    return replace(stepped, others=others_at(scripted, road, limits, stepped.t))


# ---------------------------------------------------------------------------
# Collision geometry


def pairwise_distance(a: VehicleState, b: VehicleState) -> float:
    """Gap between two footprint rectangles in the (s, d) plane; 0 if overlapping."""
    ds = abs(a.s - b.s) - 0.5 * (a.length + b.length)
    dd = abs(a.d - b.d) - 0.5 * (a.width + b.width)
    if ds <= 0.0 and dd <= 0.0:
        return 0.0
    if ds <= 0.0:
        return dd
    if dd <= 0.0:
        return ds
    return math.hypot(ds, dd)


def min_gap(w: WorldState) -> float:
    """Smallest ego-to-other rectangle gap; +inf with no other vehicles."""
    ego = w.ego
    return min(
        (pairwise_distance(ego, o) for o in w.others), default=math.inf
    )


def check_collision(w: WorldState) -> bool:
    return min_gap(w) <= 0.0

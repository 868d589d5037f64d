"""Road model in Frenet coordinates.

The simulation itself runs entirely in (s, d); Cartesian conversion exists
for trace export and visualization.  Reference lines are piecewise linear.
Convention: lane 0 is the rightmost lane and d increases to the left.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import FrenetRangeError, ProjectionAmbiguityError


class GoalKind(str, Enum):
    INTERSECTION_CROSSING = "intersection_crossing"
    RAMP_EXIT = "ramp_exit"
    PROGRESS_LINE = "progress_line"


@dataclass(frozen=True)
class GoalRegion:
    """Local goal: an arc-length line to pass, optionally in a specific lane."""

    kind: GoalKind
    s_goal: float
    required_lane: Optional[int] = None
    deadline: float = math.inf

    def __post_init__(self) -> None:
        if self.deadline <= 0:
            raise ValueError("goal deadline must be positive")


def distance_to_goal(s_ego: float, goal: GoalRegion) -> float:
    """Remaining arc length to the goal line, clamped at zero once past."""
    return max(0.0, goal.s_goal - s_ego)


class ReferenceLine:
    """Piecewise-linear centerline with a cumulative arc-length table."""

    def __init__(self, waypoints: Sequence[Tuple[float, float]]):
        if len(waypoints) < 2:
            raise ValueError("a reference line needs at least two waypoints")
        xs = np.asarray([p[0] for p in waypoints], dtype=float)
        ys = np.asarray([p[1] for p in waypoints], dtype=float)
        dx = np.diff(xs)
        dy = np.diff(ys)
        seg_len = np.hypot(dx, dy)
        if np.any(seg_len <= 0):
            raise ValueError("waypoints must be distinct (strictly increasing s)")
        headings = np.arctan2(dy, dx)
        turn = np.diff(headings)
        turn = (turn + math.pi) % (2 * math.pi) - math.pi
        if np.any(np.abs(turn) >= math.pi / 2):
            raise ValueError("heading discontinuity >= pi/2 between segments")
        self._x = xs
        self._y = ys
        self._heading = headings  # per segment
        self._seg_len = seg_len
        self._arc = np.concatenate([[0.0], np.cumsum(seg_len)])

    @property
    def length(self) -> float:
        return float(self._arc[-1])

    @property
    def waypoints(self) -> list[Tuple[float, float, float]]:
        """(x, y, heading) per waypoint; the last waypoint reuses the final segment heading."""
        hs = np.concatenate([self._heading, self._heading[-1:]])
        return list(zip(self._x.tolist(), self._y.tolist(), hs.tolist()))

    @property
    def arc_length_table(self) -> list[float]:
        return self._arc.tolist()

    def _segment_index(self, s: float) -> int:
        i = bisect.bisect_right(self._arc, s) - 1
        return min(max(i, 0), len(self._seg_len) - 1)

    def to_cartesian(self, s: float, d: float) -> Tuple[float, float, float]:
        """Map (s, d) to (x, y, heading); positive d offsets to the left."""
        if s < -1e-9 or s > self.length + 1e-9:
            raise FrenetRangeError(f"s={s} outside [0, {self.length}]")
        i = self._segment_index(s)
        h = float(self._heading[i])
        local = s - float(self._arc[i])
        ch, sh = math.cos(h), math.sin(h)
        x = float(self._x[i]) + local * ch - d * sh
        y = float(self._y[i]) + local * sh + d * ch
        return x, y, h

    def to_frenet(
        self, x: float, y: float, max_lateral: float = 17.5
    ) -> Tuple[float, float]:
        """Nearest-point projection onto the line, returning (s, d)."""
        px = x - self._x[:-1]
        py = y - self._y[:-1]
        hx = np.cos(self._heading)
        hy = np.sin(self._heading)
        t = np.clip(px * hx + py * hy, 0.0, self._seg_len)
        cx = px - t * hx
        cy = py - t * hy
        dist2 = cx * cx + cy * cy
        best = int(np.argmin(dist2))
        best_d2 = float(dist2[best])
        # Two near-equal minima on distant parts of the line are ambiguous.
        near = np.flatnonzero(dist2 <= best_d2 + 1e-12)
        s_candidates = self._arc[near] + t[near]
        if float(np.ptp(s_candidates)) > 1.0:
            raise ProjectionAmbiguityError(
                f"point ({x}, {y}) is equidistant to distant segments"
            )
        s = float(self._arc[best] + t[best])
        # Signed lateral offset: positive to the left of the heading.
        d = float(-cx[best] * hy[best] + cy[best] * hx[best])
        if abs(d) > max_lateral:
            raise FrenetRangeError(f"lateral offset {d} exceeds bound {max_lateral}")
        return s, d


def straight_line(length: float, step: float = 10.0) -> ReferenceLine:
    """Straight reference line along +x starting at the origin."""
    n = max(2, int(math.ceil(length / step)) + 1)
    xs = np.linspace(0.0, length, n)
    return ReferenceLine([(float(x), 0.0) for x in xs])


def left_bend_line(
    s_before: float, radius: float, angle: float, s_after: float, step: float = 2.0
) -> ReferenceLine:
    """Straight approach, a left arc of the given angle, then a straight exit."""
    pts: list[Tuple[float, float]] = []
    n0 = max(2, int(s_before / step) + 1)
    for i in range(n0):
        pts.append((s_before * i / (n0 - 1), 0.0))
    n1 = max(2, int(radius * angle / step) + 1)
    for i in range(1, n1 + 1):
        th = angle * i / n1
        pts.append((s_before + radius * math.sin(th), radius * (1.0 - math.cos(th))))
    hx, hy = math.cos(angle), math.sin(angle)
    ex, ey = pts[-1]
    n2 = max(2, int(s_after / step) + 1)
    for i in range(1, n2 + 1):
        f = s_after * i / n2
        pts.append((ex + f * hx, ey + f * hy))
    return ReferenceLine(pts)


@dataclass(frozen=True)
class RoadMap:
    """Lanes laid out to the left of the reference line."""

    reference_line: ReferenceLine
    lane_count: int
    lane_width: float
    lane_d_centers: Tuple[float, ...] = field(default=())
    goal: Optional[GoalRegion] = None

    def __post_init__(self) -> None:
        if self.lane_count < 1:
            raise ValueError("lane_count must be >= 1")
        if not self.lane_d_centers:
            centers = tuple(i * self.lane_width for i in range(self.lane_count))
            object.__setattr__(self, "lane_d_centers", centers)
        if len(self.lane_d_centers) != self.lane_count:
            raise ValueError("lane_d_centers must have lane_count entries")
        for a, b in zip(self.lane_d_centers, self.lane_d_centers[1:]):
            if not math.isclose(b - a, self.lane_width, rel_tol=0, abs_tol=1e-9):
                raise ValueError("lane centers must be spaced by lane_width")
        if self.goal is not None and not (
            0 <= self.goal.s_goal <= self.reference_line.length
        ):
            raise ValueError("goal line outside the reference line")


def frenet_to_cartesian(
    s: float, d: float, line: ReferenceLine
) -> Tuple[float, float, float]:
    return line.to_cartesian(s, d)


def cartesian_to_frenet(
    x: float, y: float, line: ReferenceLine, max_lateral: float = 17.5
) -> Tuple[float, float]:
    return line.to_frenet(x, y, max_lateral=max_lateral)

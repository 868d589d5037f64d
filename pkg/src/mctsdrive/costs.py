"""Composite trajectory cost: safety, comfort, passability, and maneuver costs.

The total is a weighted sum of the four components accumulated per step over
a horizon.  Collisions saturate to a large finite cost so mean-based bandit
statistics stay comparable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from .road import GoalRegion, distance_to_goal
from .world import DriveAction, Lateral, WorldState, min_gap


@dataclass(frozen=True)
class CostWeights:
    w_s: float = 1.0
    w_c: float = 0.1
    w_p: float = 1.0
    w_o: float = 1.0

    def __post_init__(self) -> None:
        ws = (self.w_s, self.w_c, self.w_p, self.w_o)
        if any(w < 0 for w in ws):
            raise ValueError("cost weights must be non-negative")
        if not any(w > 0 for w in ws):
            raise ValueError("at least one cost weight must be positive")


@dataclass(frozen=True)
class CostParams:
    d_thresh: float = 10.0
    k_jerk: float = 1.0
    goal_scale: float = 0.1
    fail_penalty: float = 500.0
    lane_change_cost: float = 2.0
    collision_cost: float = 1e6

    def __post_init__(self) -> None:
        if self.d_thresh <= 0:
            raise ValueError("d_thresh must be positive")
        if self.collision_cost <= 0:
            raise ValueError("collision_cost must be positive")


@dataclass(frozen=True)
class CostBreakdown:
    """Unweighted component sums plus the weighted total."""

    safety: float = 0.0
    comfort: float = 0.0
    passability: float = 0.0
    other: float = 0.0
    total: float = 0.0

    def __add__(self, rhs: "CostBreakdown") -> "CostBreakdown":
        raise TypeError("use CostBreakdown.combine with explicit weights")

    def combine(self, rhs: "CostBreakdown", weights: CostWeights) -> "CostBreakdown":
        """Component-wise sum; the total is recomputed from the summed components."""
        safety = self.safety + rhs.safety
        comfort = self.comfort + rhs.comfort
        passability = self.passability + rhs.passability
        other = self.other + rhs.other
        return CostBreakdown(
            safety,
            comfort,
            passability,
            other,
            weighted_total(safety, comfort, passability, other, weights),
        )


def weighted_total(
    safety: float, comfort: float, passability: float, other: float, w: CostWeights
) -> float:
    # Fixed left-to-right order so the weighted-sum identity is exact.
    return w.w_s * safety + w.w_c * comfort + w.w_p * passability + w.w_o * other


def safety_gap_cost(gap: float, p: CostParams) -> float:
    """Piecewise 1/gap cost below the threshold, saturating at collision_cost."""
    if gap > p.d_thresh:
        return 0.0
    if gap <= 0.0:
        return p.collision_cost
    return min(1.0 / gap, p.collision_cost)


def safety_cost(w: WorldState, p: CostParams) -> float:
    """Safety cost from the minimum-gap neighbor."""
    return safety_gap_cost(min_gap(w), p)


def comfort_cost(jerk: float, p: CostParams) -> float:
    return p.k_jerk * jerk * jerk


def goal_satisfied(w: WorldState, goal: GoalRegion) -> bool:
    """Past the goal line and, when required, settled in the required lane."""
    if w.ego.s < goal.s_goal:
        return False
    if goal.required_lane is None:
        return True
    return w.ego.lane == goal.required_lane and w.lane_change_progress is None


def passability_cost(
    w: WorldState, goal: GoalRegion, p: CostParams, terminal: bool
) -> float:
    """Linear distance-to-goal cost plus a terminal pass/fail penalty."""
    cost = p.goal_scale * distance_to_goal(w.ego.s, goal)
    if terminal and not goal_satisfied(w, goal):
        cost += p.fail_penalty
    return cost


def other_cost(a: DriveAction, p: CostParams) -> float:
    return p.lane_change_cost if a.lateral is not Lateral.KEEP else 0.0


def accumulate_trajectory_cost(
    steps: Sequence[Tuple[WorldState, DriveAction]],
    goal: GoalRegion,
    weights: CostWeights,
    params: CostParams,
    jerk_set: Sequence[float],
    terminal: bool = True,
) -> CostBreakdown:
    """Sum per-step costs over a time-ordered (post-step world, action) sequence.

    Each entry pairs the world resulting from an action with that action.  If
    any step collides, its safety contribution is collision_cost and the
    accumulation short-circuits: later steps and the terminal pass/fail check
    are not scored.
    """
    if not steps:
        raise ValueError("steps must be non-empty")
    safety = comfort = passability = other = 0.0
    collided = False
    for w, a in steps:
        gap = min_gap(w)
        if gap <= 0.0:
            safety += params.collision_cost
            comfort += comfort_cost(jerk_set[a.jerk_level], params)
            passability += passability_cost(w, goal, params, terminal=False)
            other += other_cost(a, params)
            collided = True
            break
        safety += safety_gap_cost(gap, params)
        comfort += comfort_cost(jerk_set[a.jerk_level], params)
        passability += passability_cost(w, goal, params, terminal=False)
        other += other_cost(a, params)
    if terminal and not collided:
        final_world = steps[-1][0]
        if not goal_satisfied(final_world, goal):
            passability += params.fail_penalty
    return CostBreakdown(
        safety,
        comfort,
        passability,
        other,
        weighted_total(safety, comfort, passability, other, weights),
    )

"""Anytime Monte-Carlo tree search over drive actions, plus the replanning loop.

Each tree edge spans one fixed interval t1; after lookahead_depth levels a
random longitudinal-only rollout carries the trajectory to the horizon.  Child
selection uses a negated-mean-cost UCB with costs normalized by the running
maximum non-collision rollout cost, so the exploration constant stays
dimensionless.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .costs import (
    CostBreakdown,
    CostParams,
    CostWeights,
    accumulate_trajectory_cost,
    goal_satisfied,
)
from .errors import PlanningPreconditionError
from .road import GoalRegion, RoadMap
from .trace import (
    Trace,
    TraceRecord,
    action_to_dict,
    cost_to_dict,
    road_summary,
    vehicle_snapshot,
)
from .world import (
    DriveAction,
    KinematicLimits,
    Lateral,
    ScriptedVehicle,
    VehicleState,
    WorldState,
    advance_world,
    check_collision,
    ego_kinematics,
    others_at,
)

_INF = math.inf

# Margins for the roll-out braking fallback: a leader counts when its lateral
# clearance falls below _LATERAL_MARGIN anywhere in the next _ANTICIPATE_STEPS
# steps of its script, and following is unsafe when the longitudinal gap is
# under _GAP_MARGIN plus the jerk-limited stopping distance.
_LATERAL_MARGIN = 0.25
_GAP_MARGIN = 2.0
_ANTICIPATE_STEPS = 3

# Collision samples enter the bandit statistics as this multiple of the
# running cost normalizer instead of their raw saturated trajectory cost.
# Raw collision costs are orders of magnitude above every collision-free
# cost, so averaging them in directly would make each node's mean a count of
# colliding descendants forced in by first-visit exploration rather than an
# estimate of the node's achievable cost; scale-relative scoring keeps
# "collides sometimes" decisively worse than "times out" while still letting
# visit concentration reflect collision-free quality.
_COLLISION_MULT = 5.0


def _stop_distance(rel: float, accel: float, jerk: float, decel: float) -> float:
    """Distance closed on a steady leader while shedding closing speed `rel`
    from current acceleration `accel`, ramping at `jerk` down to `-decel`."""
    if rel < 0.0:
        rel = 0.0
    if rel == 0.0 and accel <= 0.0:
        return 0.0
    # Ramp phase: a(t) = accel - jerk*t, rel(t) = rel + accel*t - jerk*t^2/2.
    t_zero = (accel + math.sqrt(accel * accel + 2.0 * jerk * rel)) / jerk
    t_ramp = (accel + decel) / jerk
    if t_zero <= t_ramp:
        return (
            rel * t_zero + 0.5 * accel * t_zero * t_zero - jerk * t_zero ** 3 / 6.0
        )
    rel_ramp = rel + accel * t_ramp - 0.5 * jerk * t_ramp * t_ramp
    dist_ramp = rel * t_ramp + 0.5 * accel * t_ramp * t_ramp - jerk * t_ramp ** 3 / 6.0
    return dist_ramp + rel_ramp * rel_ramp / (2.0 * decel)


@dataclass(frozen=True)
class PlannerConfig:
    iterations: int = 2000
    lookahead_depth: int = 3
    t1: float = 1.0
    horizon: float = 8.0
    ucb_const: float = 1.4
    rollout_probs: Optional[Tuple[float, ...]] = None  # default: uniform over jerks
    rng_seed: int = 0
    selection: str = "mean"  # "mean" (lowest mean cost) or "robust" (max visits)
    time_budget: Optional[float] = None

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.lookahead_depth * self.t1 > self.horizon + 1e-9:
            raise ValueError("lookahead_depth * t1 must not exceed the horizon")
        if self.rollout_probs is not None:
            if abs(sum(self.rollout_probs) - 1.0) > 1e-9:
                raise ValueError("rollout_probs must sum to 1")
        if self.selection not in ("mean", "robust"):
            raise ValueError("selection must be 'mean' or 'robust'")


@dataclass(frozen=True)
class ChildStat:
    action: DriveAction
    visits: int
    mean_cost: Optional[float]
    ucb: float


@dataclass(frozen=True)
class PlanResult:
    best_action: DriveAction
    root_stats: Tuple[ChildStat, ...]
    iterations_run: int
    elapsed: float


class TreeNode:
    """Search node: ego state at depth*t1 past the root, plus bandit statistics.

    ``cum_cost`` is the weighted path cost of the edges from the root to this
    node.  ``total_cost`` / ``visits`` are the backpropagated C(v) and n(v),
    where ``total_cost`` sums the collision-free samples and ``coll_count``
    tallies the colliding ones (scored scale-relative, see _COLLISION_MULT).
    """

    __slots__ = (
        "parent",
        "incoming_action",
        "depth",
        "ego",
        "lc",
        "cum_cost",
        "collision",
        "total_cost",
        "coll_count",
        "visits",
        "children",
    )

    def __init__(
        self,
        parent: Optional["TreeNode"],
        incoming_action: Optional[DriveAction],
        depth: int,
        ego: VehicleState,
        lc: Optional[Tuple[int, float]],
        cum_cost: float,
        collision: bool,
    ):
        self.parent = parent
        self.incoming_action = incoming_action
        self.depth = depth
        self.ego = ego
        self.lc = lc
        self.cum_cost = cum_cost
        self.collision = collision
        self.total_cost = 0.0
        self.coll_count = 0
        self.visits = 0
        self.children: Optional[List[TreeNode]] = None

    def mean_cost(self, cost_scale: float = 1.0) -> float:
        """Mean backpropagated cost with collisions scored scale-relative."""
        return (
            self.total_cost + self.coll_count * _COLLISION_MULT * cost_scale
        ) / self.visits


def ucb_value(
    child: TreeNode, parent_visits: int, c: float, cost_scale: float
) -> float:
    """Negated normalized mean cost plus the exploration bonus.

    Unvisited children score +inf so every child is tried once before any
    sibling is revisited.
    """
    n = child.visits
    if n == 0:
        return _INF
    mean = (
        child.total_cost / cost_scale + child.coll_count * _COLLISION_MULT
    ) / n
    return -mean + c * math.sqrt(2.0 * math.log(parent_visits) / n)


def backpropagate(leaf: TreeNode, cost: float, collided: bool = False) -> None:
    """Add the sampled cost and one visit to every node from leaf to root."""
    node: Optional[TreeNode] = leaf
    while node is not None:
        if collided:
            node.coll_count += 1
        else:
            node.total_cost += cost
        node.visits += 1
        node = node.parent


class Planner:
    """One scenario's search problem: road, goal, limits, costs, and traffic."""

    def __init__(
        self,
        road: RoadMap,
        goal: GoalRegion,
        limits: KinematicLimits,
        weights: CostWeights,
        params: CostParams,
        traffic: Sequence[ScriptedVehicle],
        config: PlannerConfig,
    ):
        self.road = road
        self.goal = goal
        self.limits = limits
        self.weights = weights
        self.params = params
        self.traffic = tuple(traffic)
        self.config = config
        self.horizon_steps = int(round(config.horizon / config.t1))
        if self.horizon_steps < config.lookahead_depth:
            raise ValueError("horizon shorter than the look-ahead depth")
        jerks = limits.jerk_set
        probs = config.rollout_probs or tuple(1.0 / len(jerks) for _ in jerks)
        if len(probs) != len(jerks):
            raise ValueError("rollout_probs must match the jerk set length")
        cum = 0.0
        self._rollout_cdf: List[Tuple[float, float]] = []
        for p, j in zip(probs, jerks):
            cum += p
            self._rollout_cdf.append((cum, j))
        self._rollout_cdf[-1] = (1.0 + 1e-12, self._rollout_cdf[-1][1])
        self._brake_ramp = abs(limits.jerk_set[0])
        self._brake_decel = -limits.a_min
        # Exploration-bonus lookup tables: sqrt(2 ln N / n) factored as
        # sqrt(2 ln N) * (1/sqrt(n)); visit counts never exceed iterations.
        size = config.iterations + 2
        self._sqrt2log = [0.0, 0.0] + [
            math.sqrt(2.0 * math.log(n)) for n in range(2, size)
        ]
        self._inv_sqrt = [0.0] + [1.0 / math.sqrt(n) for n in range(1, size)]
        self._action_cache: Dict[Tuple[bool, bool, bool], List[DriveAction]] = {}
        # Transient per-plan state
        self._others: List[List[Tuple[float, float, float, float, float]]] = []
        self._cost_scale = 1.0
        self._root: Optional[TreeNode] = None
        self._eff_horizon = self.horizon_steps
        self._depth_limit = config.lookahead_depth
        self._slack_time = 0.0

    # -- per-plan precomputation ------------------------------------------

    def _precompute_others(self, t0: float, ego: VehicleState) -> None:
        hl = 0.5 * ego.length
        hw = 0.5 * ego.width
        cfg = self.config
        steps = self.horizon_steps
        per_step = [
            others_at(self.traffic, self.road, self.limits, t0 + k * cfg.t1)
            for k in range(steps + 1)
        ]
        table = []
        for k in range(steps + 1):
            row = []
            for i, o in enumerate(per_step[k]):
                window = [
                    per_step[j][i].d
                    for j in range(k, min(k + _ANTICIPATE_STEPS, steps) + 1)
                ]
                row.append(
                    (
                        o.s,
                        o.d,
                        hl + 0.5 * o.length,
                        hw + 0.5 * o.width,
                        o.speed,
                        min(window),
                        max(window),
                    )
                )
            table.append(row)
        self._others = table

    def _step_cost(
        self,
        k: int,
        s: float,
        d: float,
        jerk: float,
        lane_change: bool,
    ) -> Tuple[float, bool]:
        """Weighted cost of arriving at (s, d) at step k; True when colliding."""
        p = self.params
        w = self.weights
        thresh = p.d_thresh
        best = _INF
        for os_, od, shl, shw, _ov, _dlo, _dhi in self._others[k]:
            ds = s - os_
            if ds < 0.0:
                ds = -ds
            ds -= shl
            if ds >= thresh:
                continue
            dd = d - od
            if dd < 0.0:
                dd = -dd
            dd -= shw
            if dd >= thresh:
                continue
            if ds <= 0.0:
                gap = dd if dd > 0.0 else 0.0
            elif dd <= 0.0:
                gap = ds
            else:
                gap = math.sqrt(ds * ds + dd * dd)
            if gap < best:
                best = gap
        if best <= 0.0:
            return (
                w.w_s * p.collision_cost
                + w.w_c * p.k_jerk * jerk * jerk
                + w.w_p * p.goal_scale * max(0.0, self.goal.s_goal - s)
                + (w.w_o * p.lane_change_cost if lane_change else 0.0),
                True,
            )
        safety = 0.0
        if best <= thresh:
            safety = min(1.0 / best, p.collision_cost)
        cost = (
            w.w_s * safety
            + w.w_c * p.k_jerk * jerk * jerk
            + w.w_p * p.goal_scale * max(0.0, self.goal.s_goal - s)
            + (w.w_o * p.lane_change_cost if lane_change else 0.0)
        )
        return cost, False

    def _rollout_eval(
        self, k: int, s: float, d: float, speed: float, accel: float, jerk: float
    ) -> Tuple[float, bool, bool]:
        """Single pass over step-k traffic: (step cost, collided, unsafe).

        `unsafe` is true when the state tailgates a slower leader (or a
        vehicle about to merge ahead, per its scripted lateral window) so
        closely that a jerk-limited stop behind it is no longer guaranteed.
        """
        p = self.params
        w = self.weights
        thresh = p.d_thresh
        ramp = self._brake_ramp
        decel = self._brake_decel
        best = _INF
        unsafe = False
        for os_, od, shl, shw, ov, dlo, dhi in self._others[k]:
            ds = s - os_
            if ds < 0.0:
                ds = -ds
            ds -= shl
            if ds < thresh:
                dd = d - od
                if dd < 0.0:
                    dd = -dd
                dd -= shw
                if dd < thresh:
                    if ds <= 0.0:
                        gap = dd if dd > 0.0 else 0.0
                    elif dd <= 0.0:
                        gap = ds
                    else:
                        gap = math.sqrt(ds * ds + dd * dd)
                    if gap < best:
                        best = gap
            if not unsafe and os_ > s:
                if dlo - shw - _LATERAL_MARGIN <= d <= dhi + shw + _LATERAL_MARGIN:
                    margin = _GAP_MARGIN + _stop_distance(
                        speed - ov, accel, ramp, decel
                    )
                    if os_ - s - shl < margin:
                        unsafe = True
        if best <= 0.0:
            safety = p.collision_cost
        elif best <= thresh:
            safety = min(1.0 / best, p.collision_cost)
        else:
            safety = 0.0
        cost = (
            w.w_s * safety
            + w.w_c * p.k_jerk * jerk * jerk
            + w.w_p * p.goal_scale * max(0.0, self.goal.s_goal - s)
        )
        return cost, best <= 0.0, unsafe

    # -- the four MCTS phases ---------------------------------------------

    def select(self, root: TreeNode) -> TreeNode:
        """Descend by argmax UCB to the frontier.

        Stops at the first unvisited node below the look-ahead depth, at any
        node at the look-ahead depth, and at collision-terminal nodes.  Ties
        break toward the lowest action ordinal (children are kept in canonical
        order).
        """
        c = self.config.ucb_const
        scale = self._cost_scale
        depth_limit = self._depth_limit
        s2l = self._sqrt2log
        isq = self._inv_sqrt
        node = root
        while True:
            if node.depth >= depth_limit or node.collision or node.visits == 0:
                return node
            if node.children is None:
                self.expand(node)
            children = node.children
            best = None
            best_u = -_INF
            bonus = c * s2l[node.visits]
            for ch in children:  # type: ignore[union-attr]
                n = ch.visits
                if n == 0:
                    best = ch
                    break
                u = (
                    -(ch.total_cost / scale + ch.coll_count * _COLLISION_MULT) / n
                    + bonus * isq[n]
                )
                if u > best_u:
                    best_u = u
                    best = ch
            node = best  # type: ignore[assignment]

    def _node_actions(self, node: TreeNode) -> List[DriveAction]:
        mid_change = node.lc is not None
        can_left = not mid_change and node.ego.lane < self.road.lane_count - 1
        can_right = not mid_change and node.ego.lane > 0
        key = (mid_change, can_left, can_right)
        cached = self._action_cache.get(key)
        if cached is not None:
            return cached
        laterals = [Lateral.KEEP]
        if can_left:
            laterals.append(Lateral.LEFT_CHANGE)
        if can_right:
            laterals.append(Lateral.RIGHT_CHANGE)
        actions = [
            DriveAction(j, lat)
            for j in range(len(self.limits.jerk_set))
            for lat in laterals
        ]
        self._action_cache[key] = actions
        return actions

    def expand(self, node: TreeNode) -> List[TreeNode]:
        """Create one child per feasible action with its edge cost recorded."""
        if node.depth >= self._depth_limit:
            raise PlanningPreconditionError("cannot expand at the look-ahead depth")
        if node.children is not None:
            raise PlanningPreconditionError("node already expanded")
        limits = self.limits
        centers = self.road.lane_d_centers
        dt = self.config.t1
        k = node.depth + 1
        ego = node.ego
        children: List[TreeNode] = []
        for action in self._node_actions(node):
            jerk = limits.jerk_set[action.jerk_level]
            v_new, a_new, ds = ego_kinematics(ego.speed, ego.accel, jerk, dt, limits)
            lane = ego.lane
            d = ego.d
            lc = node.lc
            if lc is None and action.lateral is not Lateral.KEEP:
                target = lane + 1 if action.lateral is Lateral.LEFT_CHANGE else lane - 1
                lc = (target, 0.0)
            if lc is not None:
                target, frac = lc
                frac = min(1.0, frac + dt / limits.lane_change_duration)
                d = centers[lane] + frac * (centers[target] - centers[lane])
                if frac >= 1.0 - 1e-12:
                    d = centers[target]
                    lane = target
                    lc = None
                else:
                    lc = (target, frac)
            child_ego = VehicleState(
                s=ego.s + ds,
                d=d,
                speed=v_new,
                accel=a_new,
                lane=lane,
                length=ego.length,
                width=ego.width,
            )
            cost, collided = self._step_cost(
                k, child_ego.s, child_ego.d, jerk, action.lateral is not Lateral.KEEP
            )
            children.append(
                TreeNode(node, action, k, child_ego, lc, node.cum_cost + cost, collided)
            )
        node.children = children
        return children

    def rollout(self, node: TreeNode, rng: random.Random) -> Tuple[float, bool]:
        """Random longitudinal-only continuation from the node to the horizon.

        Returns the full trajectory cost: the root-to-node path edges plus the
        sampled rollout steps, with the terminal pass/fail penalty assessed at
        the horizon.  Collisions short-circuit; returns (cost, collided).
        """
        if node.collision:
            return node.cum_cost, True
        cfg = self.config
        limits = self.limits
        centers = self.road.lane_d_centers
        cdf = self._rollout_cdf
        dt = cfg.t1
        cost = node.cum_cost
        ego = node.ego
        s, d, speed, accel, lane = ego.s, ego.d, ego.speed, ego.accel, ego.lane
        lc = node.lc
        k = node.depth
        horizon = self._eff_horizon
        random_f = rng.random
        brake = limits.jerk_set[0]
        a_max, a_min = limits.a_max, limits.a_min
        v_max, v_min = limits.v_max, limits.v_min
        goal_s = self.goal.s_goal
        req = self.goal.required_lane
        rollout_eval = self._rollout_eval
        collided = False
        satisfied = s >= goal_s and (req is None or (lane == req and lc is None))
        while not satisfied and k < horizon:
            r = random_f()
            for edge, jerk in cdf:
                if r < edge:
                    break
            if lc is not None:
                target, frac = lc
                frac = min(1.0, frac + dt / limits.lane_change_duration)
                d = centers[lane] + frac * (centers[target] - centers[lane])
                if frac >= 1.0 - 1e-12:
                    d = centers[target]
                    lane = target
                    lc = None
                else:
                    lc = (target, frac)
            # One trapezoidal jerk step, inlined from ego_kinematics (this
            # loop dominates planning time).
            a_new = accel + jerk * dt
            if a_new > a_max:
                a_new = a_max
            elif a_new < a_min:
                a_new = a_min
            v_new = speed + 0.5 * (accel + a_new) * dt
            if v_new > v_max:
                v_new = v_max
            elif v_new < v_min:
                v_new = v_min
            ds = 0.5 * (speed + v_new) * dt
            if v_new >= v_max and a_new > 0.0:
                a_new = 0.0
            elif v_new <= v_min and a_new < 0.0:
                a_new = 0.0
            step_cost, collided, unsafe = rollout_eval(
                k + 1, s + ds, d, v_new, a_new, jerk
            )
            if (unsafe or collided) and jerk != brake:
                # Sampling stays within constraints: when the sampled jerk
                # would leave the ego unable to stop behind a slower leader,
                # it is replaced by maximum braking.  Only an unavoidable
                # overlap scores as a collision.
                jerk = brake
                v_new, a_new, ds = ego_kinematics(speed, accel, jerk, dt, limits)
                step_cost, collided, unsafe = rollout_eval(
                    k + 1, s + ds, d, v_new, a_new, jerk
                )
            speed, accel = v_new, a_new
            s += ds
            k += 1
            cost += step_cost
            if collided:
                break
            satisfied = s >= goal_s and (req is None or (lane == req and lc is None))
        if not collided:
            if not satisfied:
                # The plan window may end before the scenario deadline; the
                # failure penalty applies only when the goal can no longer be
                # reached in the time left after the window.
                slack = self._slack_time
                reachable = goal_s - s <= self.limits.v_max * slack
                if req is not None and not (lane == req and lc is None):
                    changes = abs(lane - req) if lc is None else abs(lc[0] - req) + 1
                    reachable = reachable and (
                        slack >= changes * limits.lane_change_duration
                    )
                if not reachable:
                    cost += self.weights.w_p * self.params.fail_penalty
            if cost > self._cost_scale:
                self._cost_scale = cost
        return cost, collided

    # -- planning entry points ---------------------------------------------

    def plan(self, world: WorldState, rng_seed: Optional[int] = None) -> PlanResult:
        """Run the configured iteration budget and return the best root action."""
        start = time.perf_counter()
        cfg = self.config
        if check_collision(world):
            raise PlanningPreconditionError("refusing to plan from a colliding world")
        self._precompute_others(world.t, world.ego)
        self._cost_scale = 1.0
        eff = self.horizon_steps
        slack = math.inf
        if self.goal.deadline is not None and math.isfinite(self.goal.deadline):
            remaining = int(math.ceil((self.goal.deadline - world.t) / cfg.t1 - 1e-9))
            eff = max(1, min(eff, remaining))
            slack = max(0.0, self.goal.deadline - world.t - eff * cfg.t1)
        self._eff_horizon = eff
        self._depth_limit = min(cfg.lookahead_depth, eff)
        self._slack_time = slack
        rng = random.Random(cfg.rng_seed if rng_seed is None else rng_seed)
        root = TreeNode(
            None, None, 0, world.ego, world.lane_change_progress, 0.0, False
        )
        self._root = root
        deadline = None
        if cfg.time_budget is not None:
            deadline = start + cfg.time_budget
        iterations_run = 0
        for i in range(cfg.iterations):
            node = self.select(root)
            cost, collided = self.rollout(node, rng)
            backpropagate(node, cost, collided)
            iterations_run = i + 1
            if deadline is not None and (i & 63) == 0 and time.perf_counter() > deadline:
                break
        if root.children is None:
            self.expand(root)
        children = root.children or []
        visited = [ch for ch in children if ch.visits > 0]
        if visited:
            if cfg.selection == "robust":
                best = max(visited, key=lambda ch: ch.visits)
            else:
                scale = self._cost_scale
                best = min(visited, key=lambda ch: ch.mean_cost(scale))
        else:
            # Degenerate budget: fall back to the greedy one-step edge cost.
            best = min(children, key=lambda ch: ch.cum_cost)
        stats = tuple(
            ChildStat(
                ch.incoming_action,
                ch.visits,
                ch.mean_cost(self._cost_scale) if ch.visits else None,
                ucb_value(ch, max(root.visits, 1), cfg.ucb_const, self._cost_scale),
            )
            for ch in children
        )
        elapsed = time.perf_counter() - start
        return PlanResult(best.incoming_action, stats, iterations_run, elapsed)

    def receding_horizon_run(
        self,
        initial: WorldState,
        max_steps: int,
        scenario: str = "",
        seed: Optional[int] = None,
    ) -> Trace:
        """Plan, execute the first action, rebuild the tree, repeat.

        Stops on goal satisfaction, collision, the goal deadline, or
        max_steps; the trace records every visited world.
        """
        if max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        cfg = self.config
        base_seed = cfg.rng_seed if seed is None else seed
        road = self.road
        jerk_set = self.limits.jerk_set
        zero = CostBreakdown()
        records: List[TraceRecord] = []
        executed: List[Tuple[WorldState, DriveAction]] = []
        w = initial
        outcome = "timeout"
        for step in range(max_steps + 1):
            if check_collision(w):
                records.append(self._record(step, w, None, zero, None))
                outcome = "collision"
                break
            if goal_satisfied(w, self.goal):
                records.append(self._record(step, w, None, zero, None))
                outcome = "success"
                break
            if w.t > self.goal.deadline or step == max_steps:
                records.append(self._record(step, w, None, zero, None))
                outcome = "timeout"
                break
            result = self.plan(w, rng_seed=_derive_seed(base_seed, step))
            action = result.best_action
            w_next = advance_world(w, action, self.traffic, road, self.limits, cfg.t1)
            step_cost = accumulate_trajectory_cost(
                [(w_next, action)],
                self.goal,
                self.weights,
                self.params,
                jerk_set,
                terminal=False,
            )
            records.append(
                self._record(
                    step,
                    w,
                    action,
                    step_cost,
                    {
                        "iterations_run": result.iterations_run,
                        "elapsed": result.elapsed,
                        "root_stats": [
                            {
                                "action": action_to_dict(st.action, jerk_set),
                                "visits": st.visits,
                                "mean_cost": st.mean_cost,
                            }
                            for st in result.root_stats
                        ],
                    },
                )
            )
            executed.append((w_next, action))
            w = w_next
        if executed:
            total = accumulate_trajectory_cost(
                executed, self.goal, self.weights, self.params, jerk_set, terminal=True
            )
        else:
            total = zero
        return Trace(
            scenario=scenario,
            seed=base_seed,
            t1=cfg.t1,
            outcome=outcome,
            records=records,
            total_cost=cost_to_dict(total),
            road=road_summary(road),
        )

    def _record(
        self,
        step: int,
        w: WorldState,
        action: Optional[DriveAction],
        cost,
        planner_stats: Optional[Dict],
    ) -> TraceRecord:
        road = self.road
        return TraceRecord(
            step=step,
            t=w.t,
            ego=vehicle_snapshot(w.ego, road),
            others=[vehicle_snapshot(o, road) for o in w.others],
            action=(
                action_to_dict(action, self.limits.jerk_set)
                if action is not None
                else None
            ),
            cost=cost_to_dict(cost),
            planner=planner_stats,
        )


def _derive_seed(base: int, step: int) -> int:
    return (base * 1_000_003 + step * 7_919 + 12_345) % (2**63)

"""Composite cost model: component shapes, weighting, and accumulation."""
from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mctsdrive import (
    CostBreakdown,
    CostParams,
    CostWeights,
    DriveAction,
    GoalKind,
    GoalRegion,
    Lateral,
    VehicleState,
    WorldState,
    accumulate_trajectory_cost,
    comfort_cost,
    goal_satisfied,
    other_cost,
    passability_cost,
    safety_cost,
)
from mctsdrive.costs import safety_gap_cost, weighted_total
from tests.conftest import make_ego

JERKS = (-2.0, -1.0, 0.0, 1.0, 2.0)


def world_with_gap(gap: float) -> WorldState:
    ego = make_ego(s=0.0)
    other = make_ego(s=gap + 4.5)
    return WorldState(t=0.0, ego=ego, others=(other,))


class TestSafetyCost:
    def test_zero_above_threshold(self, params):
        assert safety_cost(world_with_gap(20.0), params) == 0.0

    def test_inverse_gap_below_threshold(self, params):
        assert safety_cost(world_with_gap(2.0), params) == pytest.approx(0.5)

    def test_collision_saturates(self, params):
        assert safety_cost(world_with_gap(0.0), params) == params.collision_cost

    def test_jump_at_threshold(self, params):
        # The cost steps from 0 to 1/d_thresh exactly at the threshold.
        eps = 1e-9
        above = safety_gap_cost(params.d_thresh + eps, params)
        at = safety_gap_cost(params.d_thresh, params)
        assert above == 0.0
        assert at == pytest.approx(1.0 / params.d_thresh)

    def test_no_traffic_is_free(self, params):
        w = WorldState(t=0.0, ego=make_ego())
        assert safety_cost(w, params) == 0.0

    @given(gap=st.floats(0.01, 30.0), delta=st.floats(0.0, 30.0))
    @settings(max_examples=200, deadline=None)
    def test_non_increasing_in_gap(self, gap, delta):
        p = CostParams()
        assert safety_gap_cost(gap + delta, p) <= safety_gap_cost(gap, p)

    def test_continuous_on_inverse_region(self, params):
        gaps = [0.5 + 0.01 * i for i in range(900)]
        vals = [safety_gap_cost(g, params) for g in gaps]
        for (g1, v1), (g2, v2) in zip(zip(gaps, vals), zip(gaps[1:], vals[1:])):
            if g2 <= params.d_thresh:
                assert abs(v2 - v1) < 0.05


class TestComfortCost:
    def test_zero_jerk_is_free(self, params):
        assert comfort_cost(0.0, params) == 0.0

    def test_quadratic(self, params):
        assert comfort_cost(2.0, params) == 4.0

    @given(
        j=st.one_of(
            st.just(0.0), st.floats(1e-6, 5.0), st.floats(-5.0, -1e-6)
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_even_and_zero_only_at_zero(self, j):
        p = CostParams()
        assert comfort_cost(j, p) == comfort_cost(-j, p)
        if j != 0.0:
            assert comfort_cost(j, p) > 0.0


class TestPassabilityCost:
    def test_past_goal_in_lane_terminal_is_free(self, params):
        goal = GoalRegion(GoalKind.RAMP_EXIT, s_goal=100.0, required_lane=0)
        w = WorldState(t=0.0, ego=make_ego(s=110.0, lane=0))
        assert passability_cost(w, goal, params, terminal=True) == 0.0

    def test_linear_distance_cost_non_terminal(self, params):
        goal = GoalRegion(GoalKind.PROGRESS_LINE, s_goal=100.0)
        w = WorldState(t=0.0, ego=make_ego(s=50.0))
        assert passability_cost(w, goal, params, terminal=False) == pytest.approx(5.0)

    def test_wrong_lane_at_terminal_pays_fail_penalty(self, params):
        goal = GoalRegion(GoalKind.RAMP_EXIT, s_goal=100.0, required_lane=0)
        w = WorldState(t=0.0, ego=make_ego(s=110.0, lane=1, d=3.5))
        assert passability_cost(w, goal, params, terminal=True) == params.fail_penalty

    def test_mid_lane_change_does_not_satisfy_required_lane(self, params):
        goal = GoalRegion(GoalKind.RAMP_EXIT, s_goal=100.0, required_lane=0)
        w = WorldState(
            t=0.0, ego=make_ego(s=110.0, lane=0), lane_change_progress=(1, 0.5)
        )
        assert not goal_satisfied(w, goal)

    def test_no_required_lane_any_lane_satisfies(self, params):
        goal = GoalRegion(GoalKind.PROGRESS_LINE, s_goal=100.0)
        w = WorldState(t=0.0, ego=make_ego(s=110.0, lane=1, d=3.5))
        assert goal_satisfied(w, goal)


class TestOtherCost:
    def test_keep_is_free(self, params):
        assert other_cost(DriveAction(2, Lateral.KEEP), params) == 0.0

    def test_left_change_costs_configured_amount(self, params):
        assert other_cost(DriveAction(2, Lateral.LEFT_CHANGE), params) == 2.0

    def test_left_and_right_cost_identically(self, params):
        left = other_cost(DriveAction(0, Lateral.LEFT_CHANGE), params)
        right = other_cost(DriveAction(0, Lateral.RIGHT_CHANGE), params)
        assert left == right


class TestWeightedTotal:
    def test_exact_weighted_sum_identity(self):
        w = CostWeights(w_s=1.0, w_c=0.1, w_p=1.0, w_o=1.0)
        total = weighted_total(0.75, 4.0, 5.0, 2.0, w)
        assert total == 1.0 * 0.75 + 0.1 * 4.0 + 1.0 * 5.0 + 1.0 * 2.0

    @given(
        lam=st.floats(0.001, 1000.0),
        s=st.floats(0, 100), c=st.floats(0, 100),
        p=st.floats(0, 100), o=st.floats(0, 100),
    )
    @settings(max_examples=100, deadline=None)
    def test_weight_scaling_scales_total_linearly(self, lam, s, c, p, o):
        base = CostWeights(1.0, 0.1, 1.0, 1.0)
        scaled = CostWeights(lam, 0.1 * lam, lam, lam)
        t1 = weighted_total(s, c, p, o, base)
        t2 = weighted_total(s, c, p, o, scaled)
        assert t2 == pytest.approx(lam * t1, rel=1e-9)

    def test_weight_scaling_preserves_argmin(self):
        rows = [(0.75, 4.0, 5.0, 2.0), (0.1, 16.0, 1.0, 0.0), (3.0, 0.0, 9.0, 4.0)]
        base = CostWeights(1.0, 0.1, 1.0, 1.0)
        for lam in (0.25, 3.0, 117.0):
            scaled = CostWeights(lam, 0.1 * lam, lam, lam)
            argmin_base = min(range(3), key=lambda i: weighted_total(*rows[i], base))
            argmin_scaled = min(range(3), key=lambda i: weighted_total(*rows[i], scaled))
            assert argmin_base == argmin_scaled


class TestCostBreakdown:
    def test_plain_addition_is_disabled(self):
        with pytest.raises(TypeError):
            CostBreakdown() + CostBreakdown()

    def test_combine_recomputes_total(self, weights):
        a = CostBreakdown(1.0, 2.0, 3.0, 4.0, weighted_total(1.0, 2.0, 3.0, 4.0, weights))
        b = CostBreakdown(0.5, 0.5, 0.5, 0.5, weighted_total(0.5, 0.5, 0.5, 0.5, weights))
        c = a.combine(b, weights)
        assert c.safety == 1.5
        assert c.total == weighted_total(1.5, 2.5, 3.5, 4.5, weights)


class TestWeightsValidation:
    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            CostWeights(w_s=-1.0)

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError):
            CostWeights(0.0, 0.0, 0.0, 0.0)

    def test_params_validation(self):
        with pytest.raises(ValueError):
            CostParams(d_thresh=0.0)
        with pytest.raises(ValueError):
            CostParams(collision_cost=-1.0)


def step(gap: float, jerk_level: int = 2, lateral=Lateral.KEEP, s: float = 0.0):
    ego = make_ego(s=s)
    others = (make_ego(s=s + gap + 4.5),) if math.isfinite(gap) else ()
    w = WorldState(t=0.0, ego=ego, others=others)
    return (w, DriveAction(jerk_level, lateral))


class TestAccumulateTrajectoryCost:
    def test_all_zero_single_step(self, weights, params):
        goal = GoalRegion(GoalKind.PROGRESS_LINE, s_goal=100.0)
        w = WorldState(t=0.0, ego=make_ego(s=150.0))
        bd = accumulate_trajectory_cost(
            [(w, DriveAction(2, Lateral.KEEP))], goal, weights, params, JERKS
        )
        assert bd.total == 0.0

    def test_safety_sums_inverse_gaps(self, weights, params):
        goal = GoalRegion(GoalKind.PROGRESS_LINE, s_goal=0.0)
        steps = [step(2.0, s=100.0), step(4.0, s=100.0)]
        bd = accumulate_trajectory_cost(steps, goal, weights, params, JERKS)
        assert bd.safety == pytest.approx(0.75)

    def test_collision_short_circuits(self, weights, params):
        goal = GoalRegion(GoalKind.PROGRESS_LINE, s_goal=0.0)
        steps = [step(5.0, s=100.0)] * 2 + [step(0.0, s=100.0)] + [step(5.0, s=100.0)] * 5
        bd = accumulate_trajectory_cost(steps, goal, weights, params, JERKS)
        assert bd.total >= weights.w_s * params.collision_cost
        # Steps after the collision contribute nothing: only 2 pre-collision
        # inverse-gap terms (1/5 each) plus the collision itself.
        assert bd.safety == pytest.approx(2.0 / 5.0 + params.collision_cost)

    def test_collision_skips_terminal_penalty(self, weights, params):
        goal = GoalRegion(GoalKind.PROGRESS_LINE, s_goal=1000.0)
        bd = accumulate_trajectory_cost(
            [step(0.0)], goal, weights, params, JERKS, terminal=True
        )
        # The fail penalty would add to passability; a collision pre-empts it.
        assert bd.passability == pytest.approx(params.goal_scale * 1000.0)

    def test_terminal_penalty_when_short_of_goal(self, weights, params):
        goal = GoalRegion(GoalKind.PROGRESS_LINE, s_goal=1000.0)
        bd = accumulate_trajectory_cost(
            [step(math.inf)], goal, weights, params, JERKS, terminal=True
        )
        assert bd.passability == pytest.approx(
            params.goal_scale * 1000.0 + params.fail_penalty
        )

    def test_empty_trajectory_rejected(self, weights, params):
        goal = GoalRegion(GoalKind.PROGRESS_LINE, s_goal=0.0)
        with pytest.raises(ValueError):
            accumulate_trajectory_cost([], goal, weights, params, JERKS)

    def test_segment_additivity(self, weights, params):
        goal = GoalRegion(GoalKind.PROGRESS_LINE, s_goal=0.0)
        seg_a = [step(3.0, 1, s=50.0), step(6.0, 3, s=60.0)]
        seg_b = [step(9.0, 4, Lateral.LEFT_CHANGE, s=70.0), step(math.inf, 2, s=80.0)]
        whole = accumulate_trajectory_cost(
            seg_a + seg_b, goal, weights, params, JERKS, terminal=False
        )
        part_a = accumulate_trajectory_cost(
            seg_a, goal, weights, params, JERKS, terminal=False
        )
        part_b = accumulate_trajectory_cost(
            seg_b, goal, weights, params, JERKS, terminal=False
        )
        combined = part_a.combine(part_b, weights)
        assert combined.safety == pytest.approx(whole.safety)
        assert combined.comfort == pytest.approx(whole.comfort)
        assert combined.passability == pytest.approx(whole.passability)
        assert combined.other == pytest.approx(whole.other)
        assert combined.total == pytest.approx(whole.total)

    def test_total_matches_weighted_identity_exactly(self, weights, params):
        goal = GoalRegion(GoalKind.PROGRESS_LINE, s_goal=200.0)
        steps = [step(3.0, 0, s=50.0), step(7.0, 4, Lateral.RIGHT_CHANGE, s=60.0)]
        bd = accumulate_trajectory_cost(steps, goal, weights, params, JERKS)
        assert bd.total == weighted_total(
            bd.safety, bd.comfort, bd.passability, bd.other, weights
        )

"""Shared fixtures for the test suite."""
from __future__ import annotations

import math

import pytest

from mctsdrive import (
    CostParams,
    CostWeights,
    GoalKind,
    GoalRegion,
    KinematicLimits,
    RoadMap,
    VehicleState,
    WorldState,
    straight_line,
)


@pytest.fixture(scope="session")
def limits() -> KinematicLimits:
    return KinematicLimits()


@pytest.fixture(scope="session")
def params() -> CostParams:
    return CostParams()


@pytest.fixture(scope="session")
def weights() -> CostWeights:
    return CostWeights()


@pytest.fixture(scope="session")
def road3() -> RoadMap:
    """Three-lane straight road, 300 m."""
    return RoadMap(straight_line(300.0), lane_count=3, lane_width=3.5)


@pytest.fixture(scope="session")
def road1() -> RoadMap:
    """Single-lane straight road, 300 m."""
    return RoadMap(straight_line(300.0), lane_count=1, lane_width=3.5)


@pytest.fixture
def mid_lane_world(road3) -> WorldState:
    ego = VehicleState(s=50.0, d=road3.lane_d_centers[1], speed=10.0, accel=0.0, lane=1)
    return WorldState(t=0.0, ego=ego)


@pytest.fixture(scope="session")
def far_goal() -> GoalRegion:
    return GoalRegion(GoalKind.PROGRESS_LINE, s_goal=250.0, deadline=1000.0)


def make_ego(s=0.0, lane=0, speed=10.0, accel=0.0, d=None, lane_width=3.5):
    return VehicleState(
        s=s,
        d=lane * lane_width if d is None else d,
        speed=speed,
        accel=accel,
        lane=lane,
    )

"""Frenet-frame traffic simulation with an anytime MCTS behavior planner."""

from .costs import (
    CostBreakdown,
    CostParams,
    CostWeights,
    accumulate_trajectory_cost,
    comfort_cost,
    goal_satisfied,
    other_cost,
    passability_cost,
    safety_cost,
    safety_gap_cost,
    weighted_total,
)
from .errors import (
    ConfigError,
    FrenetRangeError,
    InfeasibleActionError,
    MctsDriveError,
    MissingReferenceError,
    PlanningPreconditionError,
    ProjectionAmbiguityError,
    TraceFormatError,
)
from .harness import (
    BatchReport,
    classify_near_optimal,
    compute_references,
    format_report_table,
    run_batch,
    run_one,
    run_seed,
    save_reports,
)
from .planner import (
    ChildStat,
    Planner,
    PlannerConfig,
    PlanResult,
    TreeNode,
    backpropagate,
    ucb_value,
)
from .road import (
    GoalKind,
    GoalRegion,
    ReferenceLine,
    RoadMap,
    cartesian_to_frenet,
    distance_to_goal,
    frenet_to_cartesian,
    left_bend_line,
    straight_line,
)
from .scenarios import (
    ScenarioConfig,
    build_planner,
    initial_world,
    make_he,
    make_qualitative_intersection,
    make_qualitative_ramp,
    make_scenario,
    make_sln,
    make_ulti,
    scenario_from_dict,
    scenario_to_dict,
    validate_config,
)
from .trace import (
    SCHEMA_VERSION,
    Trace,
    TraceRecord,
    export_trace,
    load_trace,
    trace_total,
)
from .world import (
    DriveAction,
    KinematicLimits,
    Lateral,
    ScriptMode,
    ScriptSegment,
    ScriptedVehicle,
    VehicleScript,
    VehicleState,
    WorldState,
    advance_world,
    check_collision,
    feasible_actions,
    min_gap,
    others_at,
    pairwise_distance,
    script_state,
    step_ego,
    step_others,
)

__version__ = "0.1.0"

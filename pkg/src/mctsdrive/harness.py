"""Batch experiment runner: seeded runs, Table-style metrics, and reports."""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import MissingReferenceError
from .scenarios import (
    ScenarioConfig,
    build_planner,
    initial_world,
    make_scenario,
    validate_config,
)
from .trace import Trace, trace_total


def run_seed(base_seed: int, index: int) -> int:
    """Deterministic per-run seed; shared across iteration budgets so cells pair up."""
    return base_seed + index


def run_one(config: ScenarioConfig, seed: Optional[int] = None) -> Trace:
    """Execute one receding-horizon run of a validated scenario config."""
    validate_config(config)
    planner = build_planner(config)
    return planner.receding_horizon_run(
        initial_world(config),
        config.max_steps,
        scenario=config.name,
        seed=config.planner.rng_seed if seed is None else seed,
    )


@dataclass
class BatchReport:
    scenario: str
    iterations: int
    runs: int
    success_count: int
    collision_count: int
    timeout_count: int
    near_optimal_count: Optional[int]
    latencies: List[float] = field(default_factory=list)
    outcomes: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return self.success_count / self.runs

    @property
    def collision_rate(self) -> float:
        return self.collision_count / self.runs

    @property
    def timeout_rate(self) -> float:
        return self.timeout_count / self.runs

    @property
    def near_optimal_rate(self) -> Optional[float]:
        if self.near_optimal_count is None:
            return None
        return self.near_optimal_count / self.runs

    def rate_fractions(self) -> Dict[str, Fraction]:
        return {
            "success": Fraction(self.success_count, self.runs),
            "collision": Fraction(self.collision_count, self.runs),
            "timeout": Fraction(self.timeout_count, self.runs),
        }

    def latency_summary(self) -> Dict[str, float]:
        if not self.latencies:
            return {"mean": 0.0, "p50": 0.0, "p95": 0.0}
        arr = np.asarray(self.latencies)
        return {
            "mean": float(arr.mean()),
            "p50": float(np.percentile(arr, 50)),
            "p95": float(np.percentile(arr, 95)),
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "iterations": self.iterations,
            "runs": self.runs,
            "success_count": self.success_count,
            "collision_count": self.collision_count,
            "timeout_count": self.timeout_count,
            "near_optimal_count": self.near_optimal_count,
            "success_rate": self.success_rate,
            "collision_rate": self.collision_rate,
            "timeout_rate": self.timeout_rate,
            "near_optimal_rate": self.near_optimal_rate,
            "latency": self.latency_summary(),
            "outcomes": self.outcomes,
        }


def classify_near_optimal(
    trace: Trace, reference_cost: Optional[float], epsilon: float = 0.1
) -> bool:
    """Success within (1 + epsilon) of a high-budget reference run's cost."""
    if reference_cost is None:
        raise MissingReferenceError(
            "near-optimal classification requires a reference cost"
        )
    if trace.outcome != "success":
        return False
    return trace_total(trace) <= (1.0 + epsilon) * reference_cost


def _run_cell_entry(
    args: Tuple[str, int, int, int]
) -> Tuple[int, str, float, List[float]]:
    scenario, iterations, seed, _index = args
    cfg = make_scenario(scenario, seed, overrides={"planner": {"iterations": iterations}})
    trace = run_one(cfg, seed=seed)
    latencies = [
        rec.planner["elapsed"] for rec in trace.records if rec.planner is not None
    ]
    return seed, trace.outcome, trace_total(trace), latencies


def run_batch(
    scenario: str,
    iterations_list: Sequence[int],
    runs_per_cell: int,
    base_seed: int,
    parallel: int = 1,
    references: Optional[Dict[int, float]] = None,
    epsilon: float = 0.1,
) -> List[BatchReport]:
    """One report per (scenario, iterations) cell; cells share the same seed list."""
    if runs_per_cell < 1:
        raise ValueError("runs_per_cell must be >= 1")
    seeds = [run_seed(base_seed, i) for i in range(runs_per_cell)]
    reports: List[BatchReport] = []
    for iterations in iterations_list:
        jobs = [(scenario, iterations, seed, i) for i, seed in enumerate(seeds)]
        if parallel > 1:
            with ProcessPoolExecutor(max_workers=parallel) as pool:
                results = list(pool.map(_run_cell_entry, jobs, chunksize=4))
        else:
            results = [_run_cell_entry(job) for job in jobs]
        counts = {"success": 0, "collision": 0, "timeout": 0}
        near_optimal = 0 if references is not None else None
        latencies: List[float] = []
        outcomes: List[Dict[str, Any]] = []
        for seed, outcome, total, lats in results:
            counts[outcome] += 1
            latencies.extend(lats)
            row: Dict[str, Any] = {"seed": seed, "outcome": outcome, "total_cost": total}
            if references is not None:
                if seed not in references:
                    raise MissingReferenceError(f"no reference cost for seed {seed}")
                near = outcome == "success" and total <= (1 + epsilon) * references[seed]
                row["near_optimal"] = near
                if near:
                    near_optimal += 1  # type: ignore[operator]
            outcomes.append(row)
        reports.append(
            BatchReport(
                scenario=scenario,
                iterations=iterations,
                runs=runs_per_cell,
                success_count=counts["success"],
                collision_count=counts["collision"],
                timeout_count=counts["timeout"],
                near_optimal_count=near_optimal,
                latencies=latencies,
                outcomes=outcomes,
            )
        )
    return reports


def compute_references(
    scenario: str,
    runs: int,
    base_seed: int,
    iterations: int = 50_000,
    parallel: int = 1,
) -> Dict[int, float]:
    """High-budget per-seed reference costs for near-optimal classification."""
    seeds = [run_seed(base_seed, i) for i in range(runs)]
    jobs = [(scenario, iterations, seed, i) for i, seed in enumerate(seeds)]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(_run_cell_entry, jobs))
    else:
        results = [_run_cell_entry(job) for job in jobs]
    return {seed: total for seed, _outcome, total, _lats in results}


def format_report_table(reports: Iterable[BatchReport]) -> str:
    """Aligned plain-text table mirroring the benchmark results layout."""
    rows = [
        (
            "Scenario",
            "Iterations",
            "Success",
            "Near-optimal",
            "Collision",
            "Timeout",
            "p50 latency",
        )
    ]
    for r in reports:
        near = (
            f"{100 * r.near_optimal_rate:.2f}%" if r.near_optimal_rate is not None else "-"
        )
        rows.append(
            (
                r.scenario.upper(),
                str(r.iterations),
                f"{100 * r.success_rate:.2f}%",
                near,
                f"{100 * r.collision_rate:.2f}%",
                f"{100 * r.timeout_rate:.2f}%",
                f"{1e3 * r.latency_summary()['p50']:.1f} ms",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def save_reports(reports: Sequence[BatchReport], out_dir: str) -> Tuple[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    json_path = os.path.join(out_dir, "reports.json")
    txt_path = os.path.join(out_dir, "reports.txt")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump([r.to_dict() for r in reports], fh, indent=2)
    with open(txt_path, "w", encoding="utf-8") as fh:
        fh.write(format_report_table(reports) + "\n")
    return json_path, txt_path

"""Batch runner: seed pairing, exact rates, near-optimal classing, reports."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from mctsdrive import (
    BatchReport,
    MissingReferenceError,
    classify_near_optimal,
    format_report_table,
    load_trace,
    make_scenario,
    run_batch,
    run_one,
    run_seed,
    save_reports,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Tiny budget: harness plumbing is under test, not planning quality.
ITERS = [40]


@pytest.fixture(scope="module")
def small_batch():
    return run_batch("sln", ITERS, runs_per_cell=4, base_seed=100)


class TestSeeding:
    def test_run_seed_is_base_plus_index(self):
        assert run_seed(100, 0) == 100
        assert run_seed(100, 7) == 107

    def test_cells_share_the_same_seed_list(self):
        reports = run_batch("sln", [30, 40], runs_per_cell=3, base_seed=50)
        seeds = [[row["seed"] for row in r.outcomes] for r in reports]
        assert seeds[0] == seeds[1] == [50, 51, 52]

    def test_batch_reproducible_for_same_base_seed(self, small_batch):
        again = run_batch("sln", ITERS, runs_per_cell=4, base_seed=100)
        assert [r.outcomes for r in again] == [r.outcomes for r in small_batch]


class TestRates:
    def test_counts_partition_runs(self, small_batch):
        r = small_batch[0]
        assert r.success_count + r.collision_count + r.timeout_count == r.runs

    def test_rates_recount_from_outcome_rows(self, small_batch):
        r = small_batch[0]
        succ = sum(1 for row in r.outcomes if row["outcome"] == "success")
        assert r.success_count == succ

    def test_rates_are_exact_rationals_over_runs(self, small_batch):
        r = small_batch[0]
        fr = r.rate_fractions()
        assert fr["success"] == Fraction(r.success_count, r.runs)
        for f in fr.values():
            assert (f * r.runs).denominator == 1

    def test_single_run_rates_are_zero_or_one(self):
        (r,) = run_batch("sln", ITERS, runs_per_cell=1, base_seed=3)
        assert r.success_rate in (0.0, 1.0)
        assert r.collision_rate in (0.0, 1.0)
        assert r.timeout_rate in (0.0, 1.0)

    def test_zero_runs_rejected(self):
        with pytest.raises(ValueError):
            run_batch("sln", ITERS, runs_per_cell=0, base_seed=0)


class TestNearOptimal:
    def test_requires_reference(self):
        trace = load_trace(str(FIXTURES / "traces" / "sln_seed0.jsonl"))
        with pytest.raises(MissingReferenceError):
            classify_near_optimal(trace, None)

    def test_success_within_margin(self):
        trace = load_trace(str(FIXTURES / "traces" / "sln_seed0.jsonl"))
        assert trace.outcome == "success"
        total = trace.total_cost["total"]
        assert classify_near_optimal(trace, total)  # own cost: trivially within
        assert classify_near_optimal(trace, total / 1.05)
        assert not classify_near_optimal(trace, total / 2.0)

    def test_non_success_never_near_optimal(self):
        trace = load_trace(str(FIXTURES / "traces" / "sln_seed0.jsonl"))
        trace.outcome = "timeout"
        assert not classify_near_optimal(trace, 1e9)

    def test_batch_raises_on_missing_seed_reference(self):
        with pytest.raises(MissingReferenceError):
            run_batch("sln", ITERS, runs_per_cell=2, base_seed=100,
                      references={100: 50.0})

    def test_batch_counts_near_optimal_rows(self):
        refs = {100: 1e9, 101: 1e9}
        (r,) = run_batch("sln", ITERS, runs_per_cell=2, base_seed=100,
                         references=refs)
        assert r.near_optimal_count == sum(
            1 for row in r.outcomes if row["near_optimal"]
        )
        assert r.near_optimal_count == r.success_count  # refs are huge


class TestRunOne:
    def test_explicit_seed_overrides_config_seed(self):
        cfg = make_scenario(
            "sln", 5, overrides={"planner": {"iterations": 40}}
        )
        a = run_one(cfg, seed=9)
        b = run_one(cfg, seed=9)
        assert a.seed == 9
        assert a.total_cost == b.total_cost


class TestReports:
    def test_table_has_one_row_per_report(self, small_batch):
        table = format_report_table(small_batch)
        lines = table.splitlines()
        assert len(lines) == 2 + len(small_batch)  # header + rule + rows
        assert "SLN" in lines[2]

    def test_save_reports_writes_json_and_text(self, small_batch, tmp_path):
        json_path, txt_path = save_reports(small_batch, str(tmp_path))
        with open(json_path) as fh:
            data = json.load(fh)
        assert len(data) == len(small_batch)
        assert data[0]["success_count"] == small_batch[0].success_count
        assert Path(txt_path).read_text().startswith("Scenario")

    def test_latency_summary_keys(self, small_batch):
        summary = small_batch[0].latency_summary()
        assert set(summary) == {"mean", "p50", "p95"}
        assert summary["p95"] >= summary["p50"] >= 0.0

    def test_empty_latency_summary_is_zero(self):
        r = BatchReport("sln", 10, 1, 1, 0, 0, None)
        assert r.latency_summary() == {"mean": 0.0, "p50": 0.0, "p95": 0.0}

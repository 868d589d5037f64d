"""Command-line entry points: run, batch, reference, validate.

Exit codes: 0 on success, 1 for usage/config errors, 2 for runtime failures.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

import yaml

from .errors import ConfigError, MctsDriveError
from .harness import (
    compute_references,
    format_report_table,
    run_batch,
    run_one,
    save_reports,
)
from .scenarios import (
    FIXED_SCENARIOS,
    SCENARIOS,
    ScenarioConfig,
    make_scenario,
    scenario_from_dict,
    scenario_to_dict,
    validate_config,
)
from .trace import export_trace


def load_config_file(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    return scenario_from_dict(data)


def _resolve_scenario(args: argparse.Namespace) -> ScenarioConfig:
    overrides: Dict[str, Any] = {}
    planner_over: Dict[str, Any] = {}
    for key in ("iterations", "lookahead", "t1", "horizon"):
        value = getattr(args, key, None)
        if value is not None:
            planner_over["lookahead_depth" if key == "lookahead" else key] = value
    if planner_over:
        overrides["planner"] = planner_over
    if getattr(args, "config", None):
        cfg = load_config_file(args.config)
        if planner_over:
            from dataclasses import replace

            cfg = ScenarioConfig(
                **{
                    **cfg.__dict__,
                    "planner": replace(cfg.planner, **planner_over),
                }
            )
        return cfg
    if not getattr(args, "scenario", None):
        raise ConfigError("either --scenario or --config is required")
    return make_scenario(args.scenario, getattr(args, "seed", 0) or 0, overrides)


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _resolve_scenario(args)
    trace = run_one(cfg, seed=args.seed)
    print(f"scenario={cfg.name} seed={args.seed} outcome={trace.outcome} "
          f"steps={trace.steps} total_cost={trace.total_cost['total']:.4f}")
    if args.out:
        export_trace(trace, args.out)
        print(f"trace written to {args.out}")
    return 0


def cmd_batch(args: argparse.Namespace) -> int:
    iterations = [int(x) for x in args.iterations.split(",") if x.strip()]
    references = None
    if args.reference:
        with open(args.reference, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        references = {int(k): float(v) for k, v in raw["references"].items()}
    reports = run_batch(
        args.scenario,
        iterations,
        args.runs,
        args.base_seed,
        parallel=args.parallel,
        references=references,
    )
    table = format_report_table(reports)
    print(table)
    if args.out_dir:
        json_path, txt_path = save_reports(reports, args.out_dir)
        print(f"reports written to {json_path} and {txt_path}")
    return 0


def cmd_reference(args: argparse.Namespace) -> int:
    refs = compute_references(
        args.scenario,
        args.runs,
        args.base_seed,
        iterations=args.iterations,
        parallel=args.parallel,
    )
    payload = {
        "scenario": args.scenario,
        "iterations": args.iterations,
        "base_seed": args.base_seed,
        "references": {str(k): v for k, v in refs.items()},
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
    print(f"{len(refs)} reference costs written to {args.out}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = load_config_file(args.config)
    validate_config(cfg)
    print(f"{args.config}: valid scenario '{cfg.name}'")
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    cfg = make_scenario(args.scenario, args.seed or 0)
    data = scenario_to_dict(cfg)
    with open(args.out, "w", encoding="utf-8") as fh:
        yaml.safe_dump(data, fh, sort_keys=False)
    print(f"scenario '{args.scenario}' written to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mctsdrive",
        description="Frenet-frame traffic simulation with an MCTS behavior planner",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    names = sorted(list(SCENARIOS) + list(FIXED_SCENARIOS))

    p_run = sub.add_parser("run", help="run one seeded scenario")
    p_run.add_argument("--scenario", choices=names)
    p_run.add_argument("--config", help="scenario config file (YAML)")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--iterations", type=int)
    p_run.add_argument("--lookahead", type=int)
    p_run.add_argument("--t1", type=float)
    p_run.add_argument("--horizon", type=float)
    p_run.add_argument("--out", help="trace output path (JSON lines)")
    p_run.set_defaults(func=cmd_run)

    p_batch = sub.add_parser("batch", help="run a seeded batch sweep")
    p_batch.add_argument("--scenario", required=True, choices=names)
    p_batch.add_argument("--iterations", default="1000,2000,2500,3000")
    p_batch.add_argument("--runs", type=int, default=300)
    p_batch.add_argument("--base-seed", type=int, default=0)
    p_batch.add_argument("--out-dir")
    p_batch.add_argument("--parallel", type=int, default=1)
    p_batch.add_argument("--reference", help="reference-cost file from 'reference'")
    p_batch.set_defaults(func=cmd_batch)

    p_ref = sub.add_parser("reference", help="compute high-budget reference costs")
    p_ref.add_argument("--scenario", required=True, choices=names)
    p_ref.add_argument("--runs", type=int, default=300)
    p_ref.add_argument("--base-seed", type=int, default=0)
    p_ref.add_argument("--iterations", type=int, default=50_000)
    p_ref.add_argument("--parallel", type=int, default=1)
    p_ref.add_argument("--out", required=True)
    p_ref.set_defaults(func=cmd_reference)

    p_val = sub.add_parser("validate", help="validate a scenario config file")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=cmd_validate)

    p_exp = sub.add_parser("export-config", help="write a built-in scenario as YAML")
    p_exp.add_argument("--scenario", required=True, choices=names)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--out", required=True)
    p_exp.set_defaults(func=cmd_export)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MctsDriveError as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

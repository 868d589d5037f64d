"""Command-line entry point: render a trace file to frames or an animation."""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .render import RenderSpec, render
from .trace_io import TraceParseError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trace-viz",
        description="Render exported driving-simulation traces to images",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one trace file")
    p.add_argument("--trace", required=True, help="trace file (JSON lines)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--mode", choices=("frames", "animation"), default="frames")
    p.add_argument(
        "--annotate",
        default="",
        help="comma-separated overlays: costs,actions,visits",
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    annotate = tuple(f for f in args.annotate.split(",") if f.strip())
    try:
        spec = RenderSpec(
            trace_path=args.trace,
            output_dir=args.out,
            mode=args.mode,
            annotate=annotate,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        written = render(spec)
    except (TraceParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(written)} file(s) to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

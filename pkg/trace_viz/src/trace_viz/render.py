"""Bird's-eye frame and animation rendering for parsed traces."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.animation import FuncAnimation, PillowWriter

from .trace_io import Trace, load_trace

EGO_COLOR = "#d62728"
OTHER_COLOR = "#1f77b4"
ROAD_COLOR = "#e8e8e8"
EDGE_COLOR = "#555555"
LANE_MARK_COLOR = "#aaaaaa"

_VALID_MODES = ("frames", "animation")
_VALID_ANNOTATIONS = ("costs", "actions", "visits")
_VIEW_AHEAD = 45.0
_VIEW_BEHIND = 25.0


@dataclass(frozen=True)
class RenderSpec:
    """One rendering job: a trace file, an output directory, and options."""

    trace_path: str
    output_dir: str
    mode: str = "frames"
    annotate: Tuple[str, ...] = ()
    dpi: int = 100
    fps: int = 4

    def __post_init__(self) -> None:
        if self.mode not in _VALID_MODES:
            raise ValueError(f"mode must be one of {_VALID_MODES}, got {self.mode!r}")
        for flag in self.annotate:
            if flag not in _VALID_ANNOTATIONS:
                raise ValueError(
                    f"unknown annotation {flag!r}; valid: {_VALID_ANNOTATIONS}"
                )


def _polyline_normals(points: Sequence[Sequence[float]]) -> List[Tuple[float, float]]:
    """Unit left-hand normal at every vertex (adjacent-segment average)."""
    n = len(points)
    seg_normals = []
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        dx, dy = x1 - x0, y1 - y0
        norm = math.hypot(dx, dy) or 1.0
        seg_normals.append((-dy / norm, dx / norm))
    normals = [seg_normals[0]]
    for a, b in zip(seg_normals, seg_normals[1:]):
        nx, ny = a[0] + b[0], a[1] + b[1]
        norm = math.hypot(nx, ny) or 1.0
        normals.append((nx / norm, ny / norm))
    normals.append(seg_normals[-1])
    return normals


def _offset_polyline(
    points: Sequence[Sequence[float]],
    normals: Sequence[Tuple[float, float]],
    d: float,
) -> Tuple[List[float], List[float]]:
    xs = [p[0] + d * n[0] for p, n in zip(points, normals)]
    ys = [p[1] + d * n[1] for p, n in zip(points, normals)]
    return xs, ys


def _vehicle_corners(v: Dict[str, Any]) -> Tuple[List[float], List[float]]:
    cx, cy, heading = v["x"], v["y"], v["heading"]
    hl, hw = 0.5 * v["length"], 0.5 * v["width"]
    cos_h, sin_h = math.cos(heading), math.sin(heading)
    xs, ys = [], []
    for lx, ly in ((hl, hw), (hl, -hw), (-hl, -hw), (-hl, hw)):
        xs.append(cx + lx * cos_h - ly * sin_h)
        ys.append(cy + lx * sin_h + ly * cos_h)
    return xs, ys


def _draw_road(ax, road: Dict[str, Any]) -> None:
    centerline = road.get("centerline") or []
    if len(centerline) < 2:
        return
    centers = road.get("lane_d_centers") or [0.0]
    half = 0.5 * float(road.get("lane_width", 3.5))
    normals = _polyline_normals(centerline)
    lo, hi = centers[0] - half, centers[-1] + half
    left_x, left_y = _offset_polyline(centerline, normals, hi)
    right_x, right_y = _offset_polyline(centerline, normals, lo)
    ax.fill(
        left_x + right_x[::-1],
        left_y + right_y[::-1],
        color=ROAD_COLOR,
        zorder=0,
    )
    ax.plot(left_x, left_y, color=EDGE_COLOR, lw=1.2, zorder=1)
    ax.plot(right_x, right_y, color=EDGE_COLOR, lw=1.2, zorder=1)
    for boundary in (c + half for c in centers[:-1]):
        xs, ys = _offset_polyline(centerline, normals, boundary)
        ax.plot(xs, ys, color=LANE_MARK_COLOR, lw=0.8, ls="--", zorder=1)


def _annotation_text(record: Dict[str, Any], annotate: Sequence[str]) -> str:
    parts = []
    if "actions" in annotate:
        action = record.get("action")
        if action is None:
            parts.append("action: (terminal)")
        else:
            parts.append(
                f"action: jerk {action['jerk']:+.1f} m/s³, {action['lateral']}"
            )
    if "costs" in annotate:
        cost = record.get("cost") or {}
        parts.append(f"step cost: {cost.get('total', 0.0):.3f}")
    if "visits" in annotate:
        planner = record.get("planner") or {}
        stats = planner.get("root_stats") or []
        top = sorted(stats, key=lambda s: -s["visits"])[:3]
        for entry in top:
            action = entry["action"]
            parts.append(
                f"  {action['jerk']:+.0f}/{action['lateral']}: "
                f"{entry['visits']} visits"
            )
    return "\n".join(parts)


def _draw_record(ax, trace: Trace, record: Dict[str, Any], annotate) -> None:
    ax.clear()
    _draw_road(ax, trace.road)
    for other in record["others"]:
        xs, ys = _vehicle_corners(other)
        ax.fill(xs, ys, color=OTHER_COLOR, zorder=3)
    xs, ys = _vehicle_corners(record["ego"])
    ax.fill(xs, ys, color=EGO_COLOR, zorder=4)
    ego = record["ego"]
    ax.set_xlim(ego["x"] - _VIEW_BEHIND, ego["x"] + _VIEW_AHEAD)
    ax.set_ylim(ego["y"] - 0.5 * _VIEW_AHEAD, ego["y"] + 0.5 * _VIEW_AHEAD)
    ax.set_aspect("equal")
    ax.set_title(
        f"{trace.scenario} seed {trace.seed} — step {record['step']}"
        f" (t = {record['t']:.1f} s)"
    )
    text = _annotation_text(record, annotate)
    if text:
        ax.text(
            0.02,
            0.98,
            text,
            transform=ax.transAxes,
            va="top",
            ha="left",
            fontsize=8,
            family="monospace",
            bbox={"facecolor": "white", "alpha": 0.8, "edgecolor": "none"},
        )


def render(spec: RenderSpec) -> List[str]:
    """Render a trace to frame images or one animation; returns written paths.

    Frames mode writes one PNG per trace record; animation mode writes a
    single GIF.  A zero-record trace yields no output files and no error.
    Re-rendering the same spec overwrites the same file set.
    """
    trace = load_trace(spec.trace_path)
    os.makedirs(spec.output_dir, exist_ok=True)
    if not trace.records:
        return []
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    written: List[str] = []
    try:
        if spec.mode == "frames":
            for record in trace.records:
                _draw_record(ax, trace, record, spec.annotate)
                path = os.path.join(
                    spec.output_dir, f"frame_{record['step']:04d}.png"
                )
                fig.savefig(path, dpi=spec.dpi)
                written.append(path)
        else:
            def update(index):
                _draw_record(ax, trace, trace.records[index], spec.annotate)
                return []

            anim = FuncAnimation(
                fig, update, frames=len(trace.records), blit=False
            )
            path = os.path.join(spec.output_dir, "animation.gif")
            anim.save(path, writer=PillowWriter(fps=spec.fps), dpi=spec.dpi)
            written.append(path)
    finally:
        plt.close(fig)
    return written

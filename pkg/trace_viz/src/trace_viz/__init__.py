"""Offline bird's-eye renderer for exported driving-simulation traces.

Consumes only the newline-delimited JSON trace format (one header line plus
one record per step); it has no dependency on the simulator package.
"""

from .render import EGO_COLOR, OTHER_COLOR, RenderSpec, render
from .trace_io import SUPPORTED_SCHEMA_VERSION, Trace, TraceParseError, load_trace

__all__ = [
    "EGO_COLOR",
    "OTHER_COLOR",
    "RenderSpec",
    "render",
    "SUPPORTED_SCHEMA_VERSION",
    "Trace",
    "TraceParseError",
    "load_trace",
]

__version__ = "0.1.0"

"""
Fluorescence rendering for fluortrace.

This package provides the render configuration, the counter-based random
streams, the batched fluorescence path tracer, the tiled renderer and the
single-scatter quadrature reference.
"""

# Scene modules import the render configuration; keep it first
from .config import RenderConfig  # isort: skip
from .integrator import (
    PathBatchResult,
    PathState,
    PathTracer,
    elastic_weight,
    trace_path,
    trace_paths,
)
from .reference import Slab, single_scatter_reference
from .renderer import WorkItem, plan_work, render

__all__ = [
    "PathBatchResult",
    "PathState",
    "PathTracer",
    "RenderConfig",
    "Slab",
    "WorkItem",
    "elastic_weight",
    "plan_work",
    "render",
    "single_scatter_reference",
    "trace_path",
    "trace_paths",
]

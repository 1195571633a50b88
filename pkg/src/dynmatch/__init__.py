"""Dynamic approximate maximum-matching toolkit.

Maintains approximate maximum matchings under edge insertions and
deletions: a hierarchical level partition with degree-split skeletons for
general graphs, and a kernel-plus-residual pipeline for bipartite graphs.
Every structural invariant is checkable at runtime against exact static
oracles.
"""

from .core import (
    DynamicGraph,
    Edge,
    EventKind,
    StreamError,
    UpdateEvent,
    UpdateStream,
    edge_key,
    format_stream,
    parse_stream,
)
from .params import Params, derive_params
from .pipeline import GeneralPipeline, KernelPipeline, replay

__version__ = "0.1.0"

__all__ = [
    "DynamicGraph",
    "Edge",
    "EventKind",
    "GeneralPipeline",
    "KernelPipeline",
    "Params",
    "StreamError",
    "UpdateEvent",
    "UpdateStream",
    "derive_params",
    "edge_key",
    "format_stream",
    "parse_stream",
    "replay",
]

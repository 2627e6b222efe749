"""Leiden communities maintained under batched edge insertions and deletions."""

from ._core import (
    DeletionExceedsWeight,
    DynLeidenError,
    EmptyGraph,
    Graph,
    IoError,
    Maintainer,
    NotEnoughEdges,
    ParseError,
    UnknownVertex,
    is_connected,
    is_gamma_dense,
    leiden,
    modularity,
    modularity_gain,
    planted_partition,
    run_benchmark,
)

__all__ = [
    "DeletionExceedsWeight",
    "DynLeidenError",
    "EmptyGraph",
    "Graph",
    "IoError",
    "Maintainer",
    "NotEnoughEdges",
    "ParseError",
    "UnknownVertex",
    "is_connected",
    "is_gamma_dense",
    "leiden",
    "modularity",
    "modularity_gain",
    "planted_partition",
    "run_benchmark",
]

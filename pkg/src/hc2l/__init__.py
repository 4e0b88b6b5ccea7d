"""Exact shortest-path distances on undirected weighted graphs from separator-tree 2-hop labels."""
from .graph import (
    INFINITY,
    DimacsError,
    WeightedGraph,
    dijkstra,
    parse_dimacs,
    read_dimacs,
)
from .index import (
    DistanceIndex,
    StaleIndexError,
    VertexIdError,
    batch_query,
    build_index,
    query,
    query_counted,
)
from .store import IndexCorruptError, UnsupportedFormatError, load, save

__all__ = [
    "INFINITY",
    "DimacsError",
    "DistanceIndex",
    "IndexCorruptError",
    "StaleIndexError",
    "UnsupportedFormatError",
    "VertexIdError",
    "WeightedGraph",
    "batch_query",
    "build_index",
    "dijkstra",
    "load",
    "parse_dimacs",
    "query",
    "query_counted",
    "read_dimacs",
    "save",
]

"""The distance index: contraction layer, hierarchy and labels, plus queries."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import (
    INFINITY,
    ContractionRecord,
    WeightedGraph,
    contract_degree_one,
    contracted_pair_distance,
)
from .hierarchy import BuildStats, Hierarchy, build_hierarchy, lca_level
from .partition import as_fraction


class VertexIdError(IndexError):
    """Vertex id outside the indexed graph."""


class StaleIndexError(RuntimeError):
    """Index was built from a different graph."""


@dataclass
class DistanceIndex:
    vertex_count: int
    fingerprint: int
    beta: Fraction
    leaf_size: int
    tail_pruning: bool
    contraction: bool
    hierarchy: Hierarchy
    labels: list[list[list[int]]]
    records: dict[int, ContractionRecord]
    core_of: list[int]
    original_of: list[int]
    stats: BuildStats = field(default_factory=BuildStats)
    build_seconds: float = 0.0

    @property
    def core_vertex_count(self) -> int:
        return len(self.original_of)

    def check_graph(self, g: WeightedGraph) -> None:
        if g.fingerprint() != self.fingerprint or g.vertex_count != self.vertex_count:
            raise StaleIndexError("graph fingerprint does not match the index")

    def label_bytes(self) -> int:
        """Bytes of 32-bit label values plus one 32-bit length per level array."""
        return 4 * (self.stats.entry_count + sum(len(l) for l in self.labels))

    def query(self, s: int, t: int) -> int:
        return query(self, s, t)


def build_index(
    g: WeightedGraph,
    beta=0.2,
    leaf_size: int = 1,
    tail_pruning: bool = True,
    contraction: bool = True,
    threads: int = 1,
    keep_subgraphs: bool = False,
):
    """Build a :class:`DistanceIndex` for ``g``.

    With ``keep_subgraphs`` the per-node graphs are returned alongside as
    ``(index, build)``; otherwise only the index.
    """
    start = time.perf_counter()
    beta = as_fraction(beta)
    if contraction:
        c = contract_degree_one(g)
        core, records, core_of, original_of = c.core, c.records, c.core_of, c.original_of
    else:
        core, records = g, {}
        core_of = list(range(g.vertex_count))
        original_of = list(range(g.vertex_count))
    build = build_hierarchy(core, beta, leaf_size, tail_pruning, threads, keep_subgraphs)
    idx = DistanceIndex(
        vertex_count=g.vertex_count,
        fingerprint=g.fingerprint(),
        beta=beta,
        leaf_size=leaf_size,
        tail_pruning=tail_pruning,
        contraction=contraction,
        hierarchy=build.hierarchy,
        labels=build.labels,
        records=records,
        core_of=core_of,
        original_of=original_of,
        stats=build.stats,
    )
    idx.build_seconds = time.perf_counter() - start
    if keep_subgraphs:
        return idx, build
    return idx


def core_query(idx: DistanceIndex, s: int, t: int) -> tuple[int, int]:
    """Distance between two core vertices and the number of hub positions scanned."""
    if s == t:
        return 0, 0
    h = idx.hierarchy
    level = lca_level(h.vertex_node[s], h.vertex_node[t])
    a = idx.labels[s][level]
    b = idx.labels[t][level]
    m = min(len(a), len(b))
    best = INFINITY
    for j in range(m):
        x, y = a[j], b[j]
        if x != INFINITY and y != INFINITY and x + y < best:
            best = x + y
    return best, m


def _route(idx: DistanceIndex, v: int) -> tuple[int, int]:
    """Core vertex and offset for original vertex ``v``."""
    r = idx.records.get(v)
    if r is None:
        return idx.core_of[v], 0
    return idx.core_of[r.root], r.dist_to_root


def query_counted(idx: DistanceIndex, s: int, t: int) -> tuple[int, int]:
    n = idx.vertex_count
    if not (0 <= s < n and 0 <= t < n):
        raise VertexIdError(f"vertex pair ({s}, {t}) outside [0, {n})")
    if s == t:
        return 0, 0
    rs, rt = idx.records.get(s), idx.records.get(t)
    root_s = rs.root if rs else s
    root_t = rt.root if rt else t
    if root_s == root_t:
        return contracted_pair_distance(idx.records, s, t), 0
    cs, off_s = _route(idx, s)
    ct, off_t = _route(idx, t)
    d, scanned = core_query(idx, cs, ct)
    if d == INFINITY:
        return INFINITY, scanned
    return off_s + d + off_t, scanned


def query(idx: DistanceIndex, s: int, t: int) -> int:
    """Exact distance between original vertices ``s`` and ``t`` (0-based)."""
    return query_counted(idx, s, t)[0]


def batch_query(idx: DistanceIndex, pairs: Iterable[Sequence[int]]) -> list[int]:
    return [query_counted(idx, s, t)[0] for s, t in pairs]

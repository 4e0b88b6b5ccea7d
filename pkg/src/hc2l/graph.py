"""Weighted undirected graphs, DIMACS ingestion and the reference Dijkstra.

Vertex ids are 0-based ints. Edge weights are positive integers that fit in
32 bits; path lengths are plain Python ints bounded by :data:`INFINITY`.
"""
from __future__ import annotations

import hashlib
import heapq
import io
import struct
from collections import deque
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator, TextIO

INFINITY = (1 << 64) - 1
MAX_WEIGHT = (1 << 32) - 1


class DimacsError(ValueError):
    """Raised for malformed DIMACS input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VertexRangeError(DimacsError):
    pass


class WeightError(DimacsError):
    pass


class WeightedGraph:
    """Immutable undirected graph with positive integer edge weights.

    Parallel edges collapse to their minimum weight and self-loops are
    dropped. ``adj[v]`` is a tuple of ``(neighbor, weight)`` pairs sorted by
    neighbor id.
    """

    __slots__ = ("adj", "edge_count")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]] = ()):
        best: dict[tuple[int, int], int] = {}
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            if w < 1 or w > MAX_WEIGHT:
                raise ValueError(f"edge ({u}, {v}) has invalid weight {w}")
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            old = best.get(key)
            if old is None or w < old:
                best[key] = w
        lists: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for (u, v), w in best.items():
            lists[u].append((v, w))
            lists[v].append((u, w))
        self.adj: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(sorted(a)) for a in lists
        )
        self.edge_count = len(best)

    @property
    def vertex_count(self) -> int:
        return len(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.vertex_count}, m={self.edge_count})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeightedGraph) and self.adj == other.adj

    def __hash__(self) -> int:
        return hash(self.adj)

    def neighbors(self, v: int) -> tuple[tuple[int, int], ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def weight(self, u: int, v: int) -> int | None:
        for x, w in self.adj[u]:
            if x == v:
                return w
        return None

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield each undirected edge once as ``(u, v, w)`` with ``u < v``."""
        for u, nbrs in enumerate(self.adj):
            for v, w in nbrs:
                if u < v:
                    yield u, v, w

    def induced(self, vertices: Iterable[int]) -> tuple[WeightedGraph, list[int]]:
        """Subgraph induced by ``vertices``.

        Local ids follow ascending parent id. Returns the subgraph and the
        local-to-parent id list.
        """
        ids = sorted(set(vertices))
        local = {v: i for i, v in enumerate(ids)}
        edges = []
        for i, v in enumerate(ids):
            for x, w in self.adj[v]:
                j = local.get(x)
                if j is not None and i < j:
                    edges.append((i, j, w))
        return WeightedGraph(len(ids), edges), ids

    def fingerprint(self) -> int:
        """64-bit content hash over the vertex count and sorted edge list."""
        h = hashlib.blake2b(digest_size=8)
        h.update(struct.pack("<Q", self.vertex_count))
        for u, v, w in sorted(self.edges()):
            h.update(struct.pack("<IIQ", u, v, w))
        return int.from_bytes(h.digest(), "little")


def parse_dimacs(source: str | bytes | TextIO | BinaryIO) -> WeightedGraph:
    """Parse a DIMACS shortest-path ``.gr`` file.

    Accepts text, bytes or a file object. Arc ids are 1-based; both arc
    directions merge into one undirected edge of minimum weight.
    """
    if isinstance(source, bytes):
        stream: Iterable[str] = io.StringIO(source.decode("ascii", errors="replace"))
    elif isinstance(source, str):
        stream = io.StringIO(source)
    else:
        stream = source

    n = None
    edges: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(stream, 1):
        if isinstance(raw, bytes):
            raw = raw.decode("ascii", errors="replace")
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise DimacsError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "sp":
                raise DimacsError(f"expected 'p sp <n> <m>', got {raw.strip()!r}", lineno)
            try:
                n = int(parts[2])
                int(parts[3])
            except ValueError:
                raise DimacsError(f"non-integer counts in {raw.strip()!r}", lineno) from None
            if n < 0:
                raise DimacsError("negative vertex count", lineno)
        elif tag == "a":
            if n is None:
                raise DimacsError("arc before problem line", lineno)
            if len(parts) != 4:
                raise DimacsError(f"expected 'a <u> <v> <w>', got {raw.strip()!r}", lineno)
            try:
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"non-integer field in {raw.strip()!r}", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise VertexRangeError(f"vertex id out of range [1, {n}]", lineno)
            if w < 1 or w > MAX_WEIGHT:
                raise WeightError(f"weight {w} outside [1, {MAX_WEIGHT}]", lineno)
            edges.append((u - 1, v - 1, w))
        else:
            raise DimacsError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise DimacsError("missing problem line")
    return WeightedGraph(n, edges)


def read_dimacs(path: str) -> WeightedGraph:
    with open(path, "rb") as f:
        return parse_dimacs(f)


def write_dimacs(g: WeightedGraph, out: TextIO) -> None:
    out.write(f"p sp {g.vertex_count} {2 * g.edge_count}\n")
    for u, v, w in g.edges():
        out.write(f"a {u + 1} {v + 1} {w}\n")
        out.write(f"a {v + 1} {u + 1} {w}\n")


def dijkstra(g: WeightedGraph, source: int) -> list[int]:
    """Single-source distances; unreachable vertices get ``INFINITY``."""
    adj = g.adj
    dist = [INFINITY] * len(adj)
    dist[source] = 0
    heap = [(0, source)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                push(heap, (nd, v))
    return dist


def connected_components(g: WeightedGraph, removed: Iterable[int] = ()) -> list[list[int]]:
    """Components as sorted vertex lists, largest first, ties by smallest id.

    Vertices in ``removed`` are treated as absent.
    """
    adj = g.adj
    seen = [False] * len(adj)
    for v in removed:
        seen[v] = True
    comps = []
    for s in range(len(adj)):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, _ in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comp.sort()
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


@dataclass(frozen=True)
class ContractionRecord:
    vertex: int
    root: int
    parent: int
    dist_to_parent: int
    dist_to_root: int
    depth: int


@dataclass(frozen=True)
class Contraction:
    """Result of peeling degree-one vertices.

    ``core_of[v]`` is the core id of original vertex ``v`` or -1 when ``v``
    was removed; ``original_of`` is the inverse for core vertices.
    """

    core: WeightedGraph
    records: dict[int, ContractionRecord]
    core_of: list[int]
    original_of: list[int]

    @property
    def removed_count(self) -> int:
        return len(self.records)


def contract_degree_one(g: WeightedGraph) -> Contraction:
    """Repeatedly remove degree-one vertices.

    Each removed vertex hangs off the neighbor it still had at removal time.
    A component is never peeled to nothing: the last vertex of a tree
    component has degree zero and stays in the core.
    """
    n = g.vertex_count
    degree = [len(a) for a in g.adj]
    alive = [True] * n
    parent = [-1] * n
    parent_w = [0] * n
    order: list[int] = []
    # FIFO peel: original leaves go before vertices exposed by peeling, so
    # a tree component keeps a central vertex
    queue = deque(v for v in range(n) if degree[v] == 1)
    while queue:
        v = queue.popleft()
        if not alive[v] or degree[v] != 1:
            continue
        alive[v] = False
        order.append(v)
        for x, w in g.adj[v]:
            if alive[x]:
                parent[v] = x
                parent_w[v] = w
                degree[x] -= 1
                if degree[x] == 1:
                    queue.append(x)
                break
        degree[v] = 0

    original_of = [v for v in range(n) if alive[v]]
    core_of = [-1] * n
    for i, v in enumerate(original_of):
        core_of[v] = i
    core_edges = [
        (core_of[u], core_of[v], w) for u, v, w in g.edges() if alive[u] and alive[v]
    ]
    core = WeightedGraph(len(original_of), core_edges)

    records: dict[int, ContractionRecord] = {}
    # a parent is removed later than its children, so walk removals backwards
    for v in reversed(order):
        p = parent[v]
        if alive[p]:
            root, to_root, depth = p, parent_w[v], 1
        else:
            pr = records[p]
            root, to_root, depth = pr.root, pr.dist_to_root + parent_w[v], pr.depth + 1
        records[v] = ContractionRecord(v, root, p, parent_w[v], to_root, depth)
    return Contraction(core, records, core_of, original_of)


def contracted_pair_distance(records: dict[int, ContractionRecord], v: int, w: int) -> int:
    """Distance between two vertices hanging off the same root.

    Either vertex may be the root itself. Walks both parent chains up to their
    lowest common ancestor ``u`` and returns
    ``dist(v, root) + dist(w, root) - 2 * dist(u, root)``.
    """
    rv, rw = records.get(v), records.get(w)
    root_v = rv.root if rv else v
    root_w = rw.root if rw else w
    if root_v != root_w:
        raise ValueError(f"vertices {v} and {w} hang off different roots")
    dv = rv.dist_to_root if rv else 0
    dw = rw.dist_to_root if rw else 0
    depth_v = rv.depth if rv else 0
    depth_w = rw.depth if rw else 0
    a, b = v, w
    while depth_v > depth_w:
        a = records[a].parent
        depth_v -= 1
    while depth_w > depth_v:
        b = records[b].parent
        depth_w -= 1
    while a != b:
        a = records[a].parent
        b = records[b].parent
    du = records[a].dist_to_root if a in records else 0
    return dv + dw - 2 * du

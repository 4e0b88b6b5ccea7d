"""Minimum s-t vertex cuts via node splitting and Dinitz's max-flow.

Every region vertex ``v`` becomes two flow nodes ``v_in -> v_out`` joined by
an inner arc of capacity one; each undirected edge ``(u, v)`` becomes the
outer arcs ``u_out -> v_in`` and ``v_out -> u_in``. The source feeds
``v_in`` of its attachment vertices and ``v_out`` of the sink attachments
drain into the sink, so a vertex attached to both sides must be cut.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import WeightedGraph, connected_components

SOURCE = 0
SINK = 1


def _in(i: int) -> int:
    return 2 + 2 * i


def _out(i: int) -> int:
    return 3 + 2 * i


@dataclass
class FlowGraph:
    """Residual network over ``2 * len(vertices) + 2`` nodes.

    Arcs are stored in paired slots: arc ``e`` and its reverse ``e ^ 1``.
    ``vertices[i]`` is the region vertex behind split pair ``i``.
    """

    vertices: list[int]
    head: list[int] = field(default_factory=list)
    cap: list[int] = field(default_factory=list)
    out_arcs: list[list[int]] = field(default_factory=list)
    flow_value: int = 0
    phases: int = 0
    solved: bool = False

    @property
    def node_count(self) -> int:
        return len(self.out_arcs)

    @property
    def inner_arc_count(self) -> int:
        return len(self.vertices)

    def add_arc(self, u: int, v: int, c: int) -> None:
        e = len(self.head)
        self.head.append(v)
        self.cap.append(c)
        self.out_arcs[u].append(e)
        self.head.append(u)
        self.cap.append(0)
        self.out_arcs[v].append(e + 1)


@dataclass(frozen=True)
class VertexCutPair:
    s_side: tuple[int, ...]
    t_side: tuple[int, ...]
    flow_value: int


def build_flow_graph(
    graph: WeightedGraph,
    region: Iterable[int],
    source_attach: Iterable[int],
    sink_attach: Iterable[int],
) -> FlowGraph:
    """Node-split flow network for the subgraph of ``graph`` induced by ``region``.

    Attachment vertices must belong to the region. A vertex may be attached
    to both terminals; its inner arc is then forced into every cut.
    """
    verts = sorted(set(region))
    local = {v: i for i, v in enumerate(verts)}
    src = sorted(set(source_attach))
    snk = sorted(set(sink_attach))
    for v in src + snk:
        if v not in local:
            raise ValueError(f"attachment vertex {v} is outside the cut region")

    fg = FlowGraph(vertices=verts)
    fg.out_arcs = [[] for _ in range(2 * len(verts) + 2)]
    unbounded = len(verts) + 1
    for i, v in enumerate(verts):
        fg.add_arc(_in(i), _out(i), 1)
    for i, v in enumerate(verts):
        for x, _ in graph.adj[v]:
            j = local.get(x)
            if j is not None:
                fg.add_arc(_out(i), _in(j), unbounded)
    for v in src:
        fg.add_arc(SOURCE, _in(local[v]), unbounded)
    for v in snk:
        fg.add_arc(_out(local[v]), SINK, unbounded)
    return fg


def _levels(fg: FlowGraph) -> list[int]:
    level = [-1] * fg.node_count
    level[SOURCE] = 0
    queue = deque([SOURCE])
    head, cap, out_arcs = fg.head, fg.cap, fg.out_arcs
    while queue:
        u = queue.popleft()
        for e in out_arcs[u]:
            v = head[e]
            if cap[e] > 0 and level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def _augment(fg: FlowGraph, level: list[int], current: list[int]) -> int:
    """Find one augmenting path in the level graph; iterative DFS with current-arc pointers."""
    head, cap, out_arcs = fg.head, fg.cap, fg.out_arcs
    path: list[int] = []
    u = SOURCE
    while True:
        if u == SINK:
            pushed = min(cap[e] for e in path)
            for e in path:
                cap[e] -= pushed
                cap[e ^ 1] += pushed
            return pushed
        arcs = out_arcs[u]
        advanced = False
        while current[u] < len(arcs):
            e = arcs[current[u]]
            v = head[e]
            if cap[e] > 0 and level[v] == level[u] + 1:
                path.append(e)
                u = v
                advanced = True
                break
            current[u] += 1
        if advanced:
            continue
        # dead end: retreat and skip the arc that led here
        level[u] = -1
        if not path:
            return 0
        e = path.pop()
        u = head[e ^ 1]
        current[u] += 1


def dinitz_max_flow(fg: FlowGraph) -> int:
    """Run Dinitz's algorithm to completion, updating residual capacities in place."""
    while True:
        level = _levels(fg)
        if level[SINK] < 0:
            break
        fg.phases += 1
        current = [0] * fg.node_count
        while True:
            pushed = _augment(fg, level, current)
            if not pushed:
                break
            fg.flow_value += pushed
    fg.solved = True
    return fg.flow_value


def _reach_from_source(fg: FlowGraph) -> list[bool]:
    seen = [False] * fg.node_count
    seen[SOURCE] = True
    queue = deque([SOURCE])
    while queue:
        u = queue.popleft()
        for e in fg.out_arcs[u]:
            v = fg.head[e]
            if fg.cap[e] > 0 and not seen[v]:
                seen[v] = True
                queue.append(v)
    return seen


def _reach_to_sink(fg: FlowGraph) -> list[bool]:
    seen = [False] * fg.node_count
    seen[SINK] = True
    queue = deque([SINK])
    while queue:
        x = queue.popleft()
        for e in fg.out_arcs[x]:
            u = fg.head[e]
            # e is x -> u, so e ^ 1 is the arc u -> x
            if fg.cap[e ^ 1] > 0 and not seen[u]:
                seen[u] = True
                queue.append(u)
    return seen


def _cut_blocks(fg: FlowGraph, cut_pairs: set[int]) -> bool:
    """Whether deleting the inner arcs of ``cut_pairs`` leaves no source-sink path."""
    # forward arcs sit at even slots; inner arc of pair i was added as slot 2 * i
    blocked = {2 * i for i in cut_pairs}
    seen = [False] * fg.node_count
    seen[SOURCE] = True
    queue = deque([SOURCE])
    while queue:
        u = queue.popleft()
        for e in fg.out_arcs[u]:
            if e & 1 or e in blocked:
                continue
            v = fg.head[e]
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return not seen[SINK]


def extract_cuts(fg: FlowGraph) -> VertexCutPair:
    """Both minimum vertex cuts: nearest to the source and nearest to the sink."""
    if not fg.solved:
        raise ValueError("max flow has not been computed")
    from_s = _reach_from_source(fg)
    to_t = _reach_to_sink(fg)
    s_pairs = {i for i in range(len(fg.vertices)) if from_s[_in(i)] and not from_s[_out(i)]}
    t_pairs = {i for i in range(len(fg.vertices)) if to_t[_out(i)] and not to_t[_in(i)]}
    if len(s_pairs) != fg.flow_value or len(t_pairs) != fg.flow_value:
        raise AssertionError(
            f"cut sizes {len(s_pairs)}/{len(t_pairs)} differ from flow {fg.flow_value}"
        )
    if not (_cut_blocks(fg, s_pairs) and _cut_blocks(fg, t_pairs)):
        raise AssertionError("extracted vertex cut does not separate source and sink")
    return VertexCutPair(
        tuple(fg.vertices[i] for i in sorted(s_pairs)),
        tuple(fg.vertices[i] for i in sorted(t_pairs)),
        fg.flow_value,
    )


def separates(
    graph: WeightedGraph, region: Sequence[int], cut: Iterable[int],
    sources: Iterable[int], sinks: Iterable[int],
) -> bool:
    """True when no path inside ``region`` minus ``cut`` joins a source to a sink."""
    sub, ids = graph.induced(region)
    local = {v: i for i, v in enumerate(ids)}
    removed = [local[c] for c in cut]
    sink_set = {local[v] for v in sinks}
    source_set = {local[v] for v in sources}
    for comp in connected_components(sub, removed):
        members = set(comp)
        if members & source_set and members & sink_set:
            return False
    return True


def min_vertex_cut(
    graph: WeightedGraph,
    region: Iterable[int],
    source_attach: Iterable[int],
    sink_attach: Iterable[int],
) -> tuple[VertexCutPair, FlowGraph]:
    fg = build_flow_graph(graph, region, source_attach, sink_attach)
    dinitz_max_flow(fg)
    return extract_cuts(fg), fg

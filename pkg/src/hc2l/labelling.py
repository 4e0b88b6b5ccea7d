"""Cut ranking and tail-pruned distance labels for one hierarchy node."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import INFINITY, WeightedGraph


def dist_and_prune(
    g: WeightedGraph, root: int, prune_set: Iterable[int]
) -> tuple[list[int], list[bool]]:
    """Dijkstra from ``root`` that also records, per vertex, whether some
    shortest path from ``root`` runs through a vertex of ``prune_set``.

    The queue is keyed on ``(distance, flag)`` with pruned entries first, so
    among equal-length paths the pruned one settles the vertex. The flag of
    a prune-set vertex itself only reflects paths through *other* members.
    Unreachable vertices report ``(INFINITY, False)``.
    """
    adj = g.adj
    n = len(adj)
    in_p = [False] * n
    for v in prune_set:
        in_p[v] = True
    dist = [INFINITY] * n
    flag = [False] * n
    done = [False] * n
    # heap key: (d, 0 if pruned else 1, vertex)
    heap = [(0, 1, root)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, f, v = pop(heap)
        if done[v]:
            continue
        done[v] = True
        dist[v] = d
        p = f == 0
        flag[v] = p
        nf = 0 if (p or in_p[v]) else 1
        for w, l in adj[v]:
            if not done[w]:
                nd = d + l
                if nd < dist[w] or (nd == dist[w] and nf == 0):
                    dist[w] = nd
                    push(heap, (nd, nf, w))
    return dist, flag


@dataclass(frozen=True)
class CutRanking:
    order: tuple[int, ...]
    prune_counts: dict[int, int]
    # distances from each cut vertex, flagged against the whole rest of the cut
    full_flags: dict[int, list[bool]]


def rank_cut(g: WeightedGraph, cut: Sequence[int], key=None) -> CutRanking:
    """Order cut vertices by how many vertices another cut vertex shadows.

    ``key`` maps a local vertex to its tie-break id (defaults to the vertex
    itself).
    """
    key = key or (lambda v: v)
    counts: dict[int, int] = {}
    flags: dict[int, list[bool]] = {}
    cut_set = set(cut)
    for v in cut:
        _, f = dist_and_prune(g, v, cut_set - {v})
        counts[v] = sum(f)
        flags[v] = f
    order = tuple(sorted(cut, key=lambda v: (counts[v], key(v))))
    return CutRanking(order, counts, flags)


@dataclass
class NodeLabels:
    """Distance arrays produced at one hierarchy node.

    ``arrays[u]`` is the rank-ordered (possibly tail-pruned) distance list of
    local vertex ``u`` towards this node's cut; ``distances[i]`` is the full
    distance row of the ``i``-th ranked cut vertex.
    """

    arrays: list[list[int]]
    distances: list[list[int]]
    flags: list[list[bool]]


def build_labels(
    g: WeightedGraph, ranking: CutRanking, tail_pruning: bool = True
) -> NodeLabels:
    order = ranking.order
    n = g.vertex_count
    distances = []
    flags = []
    for i, c in enumerate(order):
        d, f = dist_and_prune(g, c, order[:i])
        distances.append(d)
        flags.append(f)

    position = {c: i for i, c in enumerate(order)}
    arrays: list[list[int]] = []
    last = len(order) - 1
    for u in range(n):
        j = position.get(u)
        if j is not None:
            k = j
        elif not tail_pruning:
            k = last
        else:
            k = last
            while k > 0 and flags[k][u]:
                k -= 1
        arrays.append([distances[i][u] for i in range(k + 1)])
    return NodeLabels(arrays, distances, flags)


def cut_cover_count(ranking: CutRanking, n: int) -> int:
    """Entries a cut-cover labelling would keep at this node.

    A non-cut vertex keeps cut vertex ``c`` when no other cut vertex lies on
    a shortest path from ``c``. Cut vertices count only entries up to their
    own rank position, matching their self-truncated arrays.
    """
    order = ranking.order
    position = {c: i for i, c in enumerate(order)}
    total = 0
    for u in range(n):
        j = position.get(u)
        limit = len(order) if j is None else j + 1
        for i in range(limit):
            if not ranking.full_flags[order[i]][u]:
                total += 1
    return total

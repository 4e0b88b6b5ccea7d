"""Balanced vertex cuts.

:func:`balanced_partition` grows two seed sides from a pair of far-apart
vertices and leaves a cut region between them; :func:`balanced_cut` finds a
minimum vertex cut inside that region and distributes the remaining
components so the two sides are as even as possible.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import INFINITY, WeightedGraph, connected_components
from .mincut import min_vertex_cut

log = logging.getLogger(__name__)


def as_fraction(beta: float | Fraction | str) -> Fraction:
    """Exact balance parameter; floats go through their shortest repr."""
    if isinstance(beta, Fraction):
        f = beta
    elif isinstance(beta, float):
        f = Fraction(repr(beta))
    else:
        f = Fraction(beta)
    if not (0 < f <= Fraction(1, 2)):
        raise ValueError(f"beta must lie in (0, 0.5], got {beta}")
    return f


def within_balance(part_size: int, total: int, beta: Fraction) -> bool:
    """``part_size <= (1 - beta) * total`` in exact arithmetic."""
    return part_size * beta.denominator <= (beta.denominator - beta.numerator) * total


@dataclass(frozen=True)
class RoughPartition:
    pa: frozenset[int]
    region: frozenset[int]
    pb: frozenset[int]
    bottlenecks: int = 0


@dataclass(frozen=True)
class CutResult:
    pa: tuple[int, ...]
    cut: tuple[int, ...]
    pb: tuple[int, ...]
    flow_value: int = 0
    bottlenecks: int = 0
    used_t_side: bool = False


def order_cut(cut) -> list[int]:
    """Provisional deterministic cut order: ascending vertex id."""
    return sorted(cut)


def _distances(g: WeightedGraph, source: int, active: list[bool]) -> list[int]:
    adj = g.adj
    dist = [INFINITY] * len(adj)
    dist[source] = 0
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            if active[v] and d + w < dist[v]:
                dist[v] = d + w
                heapq.heappush(heap, (d + w, v))
    return dist


def _farthest(dist: list[int], vertices: Sequence[int]) -> int:
    best, best_d = vertices[0], -1
    for v in vertices:
        d = dist[v]
        if d != INFINITY and d > best_d:
            best, best_d = v, d
    return best


def balanced_partition(g: WeightedGraph, beta) -> RoughPartition:
    """Split ``g`` into two seed sides and a cut region between them."""
    beta = as_fraction(beta)
    pa, region, pb, k = _partition(g, beta, list(range(g.vertex_count)), 0)
    if k > 3:
        log.info("bottleneck recursion depth %d on %d vertices", k, g.vertex_count)
    return RoughPartition(frozenset(pa), frozenset(region), frozenset(pb), k)


def _partition(g: WeightedGraph, beta: Fraction, verts: list[int], k: int):
    n = len(verts)
    if n == 0:
        return set(), set(), set(), k
    if n == 1:
        return {verts[0]}, set(), set(), k

    active = [False] * g.vertex_count
    for v in verts:
        active[v] = True
    removed = [v for v in range(g.vertex_count) if not active[v]]
    comps = connected_components(g, removed)
    if len(comps) > 1:
        cmax = comps[0]
        if not within_balance(len(cmax), n, beta):
            pa, region, pb, k = _partition(g, beta, cmax, k)
            rest = set(verts).difference(cmax)
            return pa, region | rest, pb, k
        second = comps[1]
        rest = set(verts).difference(cmax, second)
        return set(cmax), rest, set(second), k

    d0 = _distances(g, verts[0], active)
    v_a = _farthest(d0, verts)
    dist_a = _distances(g, v_a, active)
    v_b = _farthest(dist_a, verts)
    dist_b = _distances(g, v_b, active)
    pw = {v: dist_a[v] - dist_b[v] for v in verts}
    order = sorted(verts, key=lambda v: (pw[v], v))

    side = -(-beta.numerator * n // beta.denominator)
    side = max(1, min(side, n // 2))
    w_a = pw[order[side - 1]]
    w_b = pw[order[n - side]]

    if w_a == w_b:
        eq = [v for v in verts if pw[v] == w_a]
        nearest = min(dist_a[v] for v in eq)
        bottleneck = {v for v in eq if dist_a[v] == nearest}
        rest = [v for v in verts if v not in bottleneck]
        pa, region, pb, k = _partition(g, beta, rest, k + 1)
        return pa, region | bottleneck, pb, k

    pa = {v for v in verts if pw[v] <= w_a}
    pb = {v for v in verts if pw[v] >= w_b}
    if not within_balance(len(pa), n, beta):
        log.warning("closed side A holds %d of %d vertices; keeping seed side", len(pa), n)
        pa = set(order[:side])
    if not within_balance(len(pb), n, beta):
        log.warning("closed side B holds %d of %d vertices; keeping seed side", len(pb), n)
        pb = set(order[n - side:])
    region = set(verts) - pa - pb
    return pa, region, pb, k


def _assign(comps: list[list[int]]) -> tuple[list[int], list[int]]:
    a: list[int] = []
    b: list[int] = []
    for comp in comps:
        if len(a) <= len(b):
            a.extend(comp)
        else:
            b.extend(comp)
    return a, b


def balanced_cut(g: WeightedGraph, beta) -> CutResult:
    """Balanced vertex cut of ``g`` (at least two vertices)."""
    if g.vertex_count < 2:
        raise ValueError("balanced_cut needs at least two vertices")
    rough = balanced_partition(g, beta)
    pa, pb, region = rough.pa, rough.pb, rough.region
    adj = g.adj

    cross_a = {v for v in pa if any(x in pb for x, _ in adj[v])}
    cross_b = {v for v in pb if any(x in pa for x, _ in adj[v])}
    inner_a = pa - cross_a
    inner_b = pb - cross_b
    attach_s = cross_a | {v for v in region if any(x in inner_a for x, _ in adj[v])}
    attach_t = cross_b | {v for v in region if any(x in inner_b for x, _ in adj[v])}
    flow_region = region | cross_a | cross_b

    cuts, _ = min_vertex_cut(g, flow_region, attach_s, attach_t)

    best = None
    options = [(cuts.s_side, False)]
    if cuts.t_side != cuts.s_side:
        options.append((cuts.t_side, True))
    for cut, t_side in options:
        side_a, side_b = _assign(connected_components(g, cut))
        score = max(len(side_a), len(side_b))
        if best is None or score < best[0]:
            best = (score, cut, side_a, side_b, t_side)
    _, cut, side_a, side_b, t_side = best
    return CutResult(
        pa=tuple(sorted(side_a)),
        cut=tuple(order_cut(cut)),
        pb=tuple(sorted(side_b)),
        flow_value=cuts.flow_value,
        bottlenecks=rough.bottlenecks,
        used_t_side=t_side,
    )

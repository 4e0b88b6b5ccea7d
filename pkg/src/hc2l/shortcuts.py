"""Shortcuts that keep a partition's induced subgraph distance-preserving."""
from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

from .graph import INFINITY, MAX_WEIGHT, WeightedGraph, dijkstra


class Shortcut(NamedTuple):
    b1: int
    b2: int
    weight: int


def border_vertices(g: WeightedGraph, cut: Iterable[int], part: Iterable[int]) -> list[int]:
    """Vertices of ``part`` with at least one neighbor in ``cut``, ascending."""
    cut_set = set(cut)
    return sorted(v for v in set(part) if any(x in cut_set for x, _ in g.adj[v]))


def add_shortcuts(
    g: WeightedGraph,
    cut: Sequence[int],
    cut_distances: dict[int, Sequence[int]],
    part: Iterable[int],
) -> list[Shortcut]:
    """Non-redundant border-to-border shortcuts for ``part``.

    ``cut_distances[c]`` must hold exact distances in ``g`` from cut vertex
    ``c`` to every vertex of ``g``. Returned shortcuts use ``g``'s vertex
    ids, ordered by ``(b1, b2)`` with ``b1 < b2``.
    """
    part = sorted(set(part))
    border = border_vertices(g, cut, part)
    if len(border) < 2:
        return []
    inner, ids = g.induced(part)
    local = {v: i for i, v in enumerate(ids)}
    cut_rows = [cut_distances[c] for c in cut]

    nb = len(border)
    d_inner = [[0] * nb for _ in range(nb)]
    d_full = [[0] * nb for _ in range(nb)]
    for i, b in enumerate(border):
        row = dijkstra(inner, local[b])
        for j, b2 in enumerate(border):
            if i == j:
                continue
            d_p = row[local[b2]]
            d_cut = INFINITY
            for crow in cut_rows:
                x, y = crow[b], crow[b2]
                if x != INFINITY and y != INFINITY and x + y < d_cut:
                    d_cut = x + y
            d_inner[i][j] = d_p
            d_full[i][j] = min(d_p, d_cut)

    shortcuts = []
    for i in range(nb):
        for j in range(i + 1, nb):
            d = d_full[i][j]
            if d >= d_inner[i][j]:
                continue
            # equal-length split through another border vertex makes it redundant
            if any(
                k != i and k != j and d_full[i][k] + d_full[k][j] == d
                for k in range(nb)
            ):
                continue
            if d > MAX_WEIGHT:
                raise OverflowError(
                    f"shortcut ({border[i]}, {border[j]}) weight {d} exceeds 32 bits"
                )
            shortcuts.append(Shortcut(border[i], border[j], d))
    return shortcuts


def enhanced_subgraph(
    g: WeightedGraph, part: Iterable[int], shortcuts: Iterable[Shortcut]
) -> tuple[WeightedGraph, list[int]]:
    """Induced subgraph on ``part`` plus ``shortcuts``; local ids ascend with ``g``'s ids."""
    inner, ids = g.induced(part)
    local = {v: i for i, v in enumerate(ids)}
    edges = list(inner.edges())
    edges.extend((local[s.b1], local[s.b2], s.weight) for s in shortcuts)
    return WeightedGraph(len(ids), edges), ids

"""Balanced tree hierarchy over the contracted core graph.

Tree nodes are identified by their root path packed into a 64-bit word: the
path bits are left-aligned from bit 63 (0 = left, 1 = right) and the path
length occupies the low 6 bits. Depth is therefore capped at 58.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .graph import WeightedGraph
from .labelling import build_labels, cut_cover_count, rank_cut
from .partition import as_fraction, balanced_cut, within_balance
from .shortcuts import Shortcut, add_shortcuts, enhanced_subgraph

log = logging.getLogger(__name__)

MAX_DEPTH = 58
ROOT = 0
_LEN_MASK = 0x3F
_WORD = (1 << 64) - 1


class HierarchyTooDeep(RuntimeError):
    pass


def node_length(node: int) -> int:
    return node & _LEN_MASK


def child_id(node: int, bit: int) -> int:
    length = node & _LEN_MASK
    if length >= MAX_DEPTH:
        raise HierarchyTooDeep(f"hierarchy too deep: level {length + 1} exceeds {MAX_DEPTH}")
    path = node & ~_LEN_MASK & _WORD
    if bit:
        path |= 1 << (63 - length)
    return path | (length + 1)


def node_id_from_bits(bits: str) -> int:
    node = ROOT
    for b in bits:
        node = child_id(node, int(b))
    return node


def node_bits(node: int) -> str:
    length = node & _LEN_MASK
    return "".join("1" if node >> (63 - i) & 1 else "0" for i in range(length))


def lca_level(a: int, b: int) -> int:
    """Depth of the lowest common ancestor of two node ids."""
    x = (a ^ b) & ~_LEN_MASK & _WORD
    common = 64 - x.bit_length()
    return min(a & _LEN_MASK, b & _LEN_MASK, common)


def node_at_level(node: int, level: int) -> int:
    """Ancestor of ``node`` at depth ``level``."""
    if level > node & _LEN_MASK:
        raise ValueError("level deeper than node")
    if level == 0:
        return ROOT
    mask = ((1 << level) - 1) << (64 - level)
    return (node & mask) | level


@dataclass
class HierarchyNode:
    id: int
    cut: tuple[int, ...]
    subtree_size: int
    left: Optional[int] = None
    right: Optional[int] = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None and self.right is None

    @property
    def level(self) -> int:
        return self.id & _LEN_MASK


@dataclass
class Hierarchy:
    nodes: dict[int, HierarchyNode]
    vertex_node: list[int]
    vertex_pos: list[int]
    beta: Fraction

    @property
    def height(self) -> int:
        return max((n.level for n in self.nodes.values()), default=0)

    @property
    def max_cut(self) -> int:
        return max((len(n.cut) for n in self.nodes.values()), default=0)

    def preorder(self) -> list[HierarchyNode]:
        out = []
        stack = [ROOT] if ROOT in self.nodes else []
        while stack:
            node = self.nodes[stack.pop()]
            out.append(node)
            for c in (node.right, node.left):
                if c is not None:
                    stack.append(c)
        return out

    def subtree_vertices(self, node_id: int) -> list[int]:
        out = []
        stack = [node_id]
        while stack:
            node = self.nodes[stack.pop()]
            out.extend(node.cut)
            stack.extend(c for c in (node.left, node.right) if c is not None)
        return out


@dataclass
class BuildStats:
    entry_count: int = 0
    naive_upper_bound: int = 0
    cut_cover_lower_bound: int = 0
    shortcut_count: int = 0
    leaf_fallbacks: int = 0
    max_bottleneck_depth: int = 0


@dataclass
class HierarchyBuild:
    hierarchy: Hierarchy
    labels: list[list[list[int]]]
    stats: BuildStats
    # only filled with keep_subgraphs=True: node id -> (graph, core ids), and shortcuts per child
    subgraphs: dict[int, tuple[WeightedGraph, list[int]]] = field(default_factory=dict)
    shortcuts: dict[int, list[Shortcut]] = field(default_factory=dict)


@dataclass
class _Task:
    node: int
    graph: WeightedGraph
    ids: list[int]


@dataclass
class _Result:
    node: int
    ids: list[int]
    cut: list[int]
    arrays: list[list[int]]
    children: list[tuple[int, _Task, list[Shortcut]]]
    cut_cover: int
    fallback: bool
    bottlenecks: int


def _process(task: _Task, beta: Fraction, leaf_size: int, tail_pruning: bool) -> _Result:
    g, ids = task.graph, task.ids
    n = g.vertex_count
    key = ids.__getitem__

    split = None
    fallback = False
    bottlenecks = 0
    if n > max(leaf_size, 2):
        res = balanced_cut(g, beta)
        bottlenecks = res.bottlenecks
        if (
            (res.pa or res.pb)
            and within_balance(len(res.pa), n, beta)
            and within_balance(len(res.pb), n, beta)
        ):
            split = res
        else:
            fallback = True
            log.debug("unbalanced cut on %d vertices; making a leaf", n)

    cut = list(split.cut) if split else list(range(n))
    ranking = rank_cut(g, cut, key)
    labels = build_labels(g, ranking, tail_pruning)
    cut_cover = cut_cover_count(ranking, n)

    children = []
    if split:
        rows = dict(zip(ranking.order, labels.distances))
        for bit, part in ((0, split.pa), (1, split.pb)):
            if not part:
                continue
            sc = add_shortcuts(g, ranking.order, rows, part)
            sub, local_ids = enhanced_subgraph(g, part, sc)
            child = _Task(child_id(task.node, bit), sub, [ids[v] for v in local_ids])
            children.append((bit, child, [Shortcut(ids[s.b1], ids[s.b2], s.weight) for s in sc]))
    return _Result(
        node=task.node,
        ids=ids,
        cut=[ids[v] for v in ranking.order],
        arrays=labels.arrays,
        children=children,
        cut_cover=cut_cover,
        fallback=fallback,
        bottlenecks=bottlenecks,
    )


def build_hierarchy(
    core: WeightedGraph,
    beta=0.2,
    leaf_size: int = 1,
    tail_pruning: bool = True,
    threads: int = 1,
    keep_subgraphs: bool = False,
) -> HierarchyBuild:
    """Recursively cut ``core`` and label every vertex level by level.

    Sibling subtrees are independent; with ``threads > 1`` each tree level
    is processed by a thread pool. Results are assembled in node order, so
    the output does not depend on the worker count.
    """
    beta = as_fraction(beta)
    if leaf_size < 1:
        raise ValueError("leaf_size must be positive")
    n = core.vertex_count
    nodes: dict[int, HierarchyNode] = {}
    vertex_node = [0] * n
    vertex_pos = [0] * n
    labels: list[list[list[int]]] = [[] for _ in range(n)]
    stats = BuildStats()
    out = HierarchyBuild(Hierarchy(nodes, vertex_node, vertex_pos, beta), labels, stats)
    if n == 0:
        return out

    frontier = [_Task(ROOT, core, list(range(n)))]
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while frontier:
            if keep_subgraphs:
                for t in frontier:
                    out.subgraphs[t.node] = (t.graph, t.ids)
            work = lambda t: _process(t, beta, leaf_size, tail_pruning)  # noqa: E731
            results = list(pool.map(work, frontier)) if pool else [work(t) for t in frontier]
            frontier = []
            for r in results:
                node = HierarchyNode(r.node, tuple(r.cut), len(r.ids))
                for bit, child, sc in r.children:
                    if bit:
                        node.right = child.node
                    else:
                        node.left = child.node
                    frontier.append(child)
                    stats.shortcut_count += len(sc)
                    if keep_subgraphs:
                        out.shortcuts[child.node] = sc
                nodes[r.node] = node
                for pos, v in enumerate(r.cut):
                    vertex_node[v] = r.node
                    vertex_pos[v] = pos
                for u, arr in enumerate(r.arrays):
                    labels[r.ids[u]].append(arr)
                    stats.entry_count += len(arr)
                stats.naive_upper_bound += len(r.ids) * len(r.cut)
                stats.cut_cover_lower_bound += r.cut_cover
                stats.leaf_fallbacks += r.fallback
                stats.max_bottleneck_depth = max(stats.max_bottleneck_depth, r.bottlenecks)
    finally:
        if pool:
            pool.shutdown()
    return out

"""Reference implementations that share no code with the package."""
from __future__ import annotations

from collections import deque
from itertools import combinations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

INF = (1 << 64) - 1


def bellman_ford(n, edges, source):
    dist = [INF] * n
    dist[source] = 0
    for _ in range(n):
        changed = False
        for u, v, w in edges:
            for a, b in ((u, v), (v, u)):
                if dist[a] != INF and dist[a] + w < dist[b]:
                    dist[b] = dist[a] + w
                    changed = True
        if not changed:
            break
    return dist


def all_pairs(g) -> np.ndarray:
    """Integer distance matrix via scipy; unreachable pairs hold INF."""
    n = g.vertex_count
    if n == 0:
        return np.zeros((0, 0), dtype=np.uint64)
    rows, cols, data = [], [], []
    for u, v, w in g.edges():
        rows += [u, v]
        cols += [v, u]
        data += [w, w]
    m = csr_matrix((data, (rows, cols)), shape=(n, n), dtype=np.float64)
    d = shortest_path(m, method="D", directed=True)
    out = np.full((n, n), INF, dtype=np.uint64)
    finite = np.isfinite(d)
    out[finite] = np.rint(d[finite]).astype(np.uint64)
    return out


def reachable(adj, start, blocked):
    seen = set(start) - blocked
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for x in adj[v]:
            if x not in seen and x not in blocked:
                seen.add(x)
                queue.append(x)
    return seen


def brute_min_vertex_cut(n, edges, region, sources, sinks):
    """Smallest X within region so no region path joins sources to sinks."""
    region = sorted(region)
    rset = set(region)
    adj = {v: [] for v in region}
    for u, v, *_ in edges:
        if u in rset and v in rset:
            adj[u].append(v)
            adj[v].append(u)
    for k in range(len(region) + 1):
        for x in combinations(region, k):
            blocked = set(x)
            if not reachable(adj, sources, blocked) & set(sinks):
                return k
    raise AssertionError("unreachable")


def parent_map(hierarchy):
    parent = {}
    for node in hierarchy.nodes.values():
        for c in (node.left, node.right):
            if c is not None:
                parent[c] = node.id
    return parent


def walk_lca_depth(parent, a, b):
    """LCA depth by walking parent pointers."""
    def chain(x):
        out = [x]
        while x in parent:
            x = parent[x]
            out.append(x)
        return out[::-1]

    ca, cb = chain(a), chain(b)
    depth = 0
    while depth < min(len(ca), len(cb)) and ca[depth] == cb[depth]:
        depth += 1
    return depth - 1


def on_shortest_path_through(dist, root, prune, u):
    """Is some shortest root-u path passing through another prune-set vertex?"""
    if dist[root][u] == INF:
        return False
    return any(
        p != u and dist[root][p] != INF and dist[p][u] != INF
        and dist[root][p] + dist[p][u] == dist[root][u]
        for p in prune
    )

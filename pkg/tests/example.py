"""Hand-built unit-weight network with the cut {5, 12, 16} used in the
worked example: ranking 12, 5, 16; L(1) prunes to [1, 2]; L(2) = [4, 2, 1];
P_A needs the single shortcut (1, 8) of weight 2."""
from hc2l.graph import WeightedGraph

EDGES = [
    (1, 12), (1, 3), (3, 7), (7, 8), (8, 12), (14, 8), (14, 3), (3, 5),
    (12, 6), (6, 9), (9, 15), (9, 10), (10, 2), (2, 16), (16, 15), (15, 5), (16, 5), (2, 15),
]
NAMES = sorted({x for e in EDGES for x in e})
IX = {v: i for i, v in enumerate(NAMES)}
GRAPH = WeightedGraph(len(NAMES), [(IX[a], IX[b], 1) for a, b in EDGES])
CUT = [IX[5], IX[12], IX[16]]
PART_A = [IX[v] for v in (1, 3, 7, 8, 14)]
PART_B = [IX[v] for v in (2, 6, 9, 10, 15)]


def ids(*names):
    return [IX[v] for v in names]


def names(vs):
    return [NAMES[v] for v in vs]

"""Binary serialization of :class:`~hc2l.index.DistanceIndex`.

Everything is little-endian. See ``docs/index-format.md`` for the layout.
"""
from __future__ import annotations

import io
import os
import struct
from fractions import Fraction
from typing import BinaryIO

import numpy as np

from .graph import INFINITY, ContractionRecord, WeightedGraph
from .hierarchy import BuildStats, Hierarchy, HierarchyNode, child_id
from .index import DistanceIndex

MAGIC = b"HC2L"
GRAPH_MAGIC = b"HC2G"
VERSION = 1

FLAG_TAIL_PRUNING = 1
FLAG_CONTRACTION = 2
FLAG_WIDE_DISTANCES = 4  # reserved for 64-bit label values

SEC_HIERARCHY = 1
SEC_VERTEX_MAP = 2
SEC_LABELS = 3
SEC_CONTRACTION = 4
SEC_STATS = 5

_HEADER = struct.Struct("<4sHHIIQIIII")
_SECTION = struct.Struct("<IIQQ")
_NODE = struct.Struct("<QII")
_INF32 = 0xFFFFFFFF

U32 = np.dtype("<u4")
U64 = np.dtype("<u8")


class UnsupportedFormatError(ValueError):
    pass


class IndexCorruptError(ValueError):
    pass


def _dist32(values) -> np.ndarray:
    arr = np.fromiter(
        (_INF32 if v == INFINITY else v for v in values), dtype=np.uint64
    )
    if arr.size and int(arr[arr != _INF32].max(initial=0)) >= _INF32:
        raise OverflowError("label distance does not fit in 32 bits")
    return arr.astype(U32)


def _hierarchy_section(idx: DistanceIndex) -> bytes:
    out = io.BytesIO()
    nodes = idx.hierarchy.preorder()
    out.write(struct.pack("<I", len(nodes)))
    for node in nodes:
        out.write(_NODE.pack(node.id, node.subtree_size, len(node.cut)))
        out.write(np.asarray(node.cut, dtype=U32).tobytes())
    return out.getvalue()


def _vertex_map_section(idx: DistanceIndex) -> bytes:
    h = idx.hierarchy
    return (
        np.asarray(h.vertex_node, dtype=U64).tobytes()
        + np.asarray(h.vertex_pos, dtype=U32).tobytes()
        + np.asarray(idx.original_of, dtype=U32).tobytes()
    )


def _labels_section(idx: DistanceIndex) -> bytes:
    levels = [len(l) for l in idx.labels]
    lengths = [len(a) for l in idx.labels for a in l]
    values = _dist32(x for l in idx.labels for a in l for x in a)
    return (
        np.asarray(levels, dtype=U32).tobytes()
        + np.asarray(lengths, dtype=U32).tobytes()
        + values.tobytes()
    )


def _contraction_section(idx: DistanceIndex) -> bytes:
    recs = [idx.records[v] for v in sorted(idx.records)]
    if not recs:
        return b""
    cols = [
        np.asarray([r.vertex for r in recs], dtype=U32),
        np.asarray([r.root for r in recs], dtype=U32),
        np.asarray([r.parent for r in recs], dtype=U32),
        np.asarray([r.dist_to_parent for r in recs], dtype=U32),
        np.asarray([r.dist_to_root for r in recs], dtype=U64),
        np.asarray([r.depth for r in recs], dtype=U32),
    ]
    return struct.pack("<I", len(recs)) + b"".join(c.tobytes() for c in cols)


def _stats_section(idx: DistanceIndex) -> bytes:
    s = idx.stats
    return struct.pack(
        "<6Q",
        s.entry_count,
        s.naive_upper_bound,
        s.cut_cover_lower_bound,
        s.shortcut_count,
        s.leaf_fallbacks,
        s.max_bottleneck_depth,
    )


def dumps(idx: DistanceIndex) -> bytes:
    sections = [
        (SEC_HIERARCHY, _hierarchy_section(idx)),
        (SEC_VERTEX_MAP, _vertex_map_section(idx)),
        (SEC_LABELS, _labels_section(idx)),
        (SEC_CONTRACTION, _contraction_section(idx)),
        (SEC_STATS, _stats_section(idx)),
    ]
    flags = (FLAG_TAIL_PRUNING if idx.tail_pruning else 0) | (
        FLAG_CONTRACTION if idx.contraction else 0
    )
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        flags,
        idx.beta.numerator,
        idx.beta.denominator,
        idx.fingerprint,
        idx.vertex_count,
        idx.core_vertex_count,
        idx.leaf_size,
        len(sections),
    )
    offset = _HEADER.size + _SECTION.size * len(sections)
    table = []
    for sid, body in sections:
        table.append(_SECTION.pack(sid, 0, offset, len(body)))
        offset += len(body)
    return header + b"".join(table) + b"".join(body for _, body in sections)


def save(idx: DistanceIndex, sink: str | os.PathLike | BinaryIO) -> int:
    """Write ``idx`` to a path or binary file object; returns the byte count."""
    data = dumps(idx)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "wb") as f:
            f.write(data)
    else:
        sink.write(data)
    return len(data)


class _Reader:
    def __init__(self, buf: bytes, name: str):
        self.buf = buf
        self.pos = 0
        self.name = name

    def take(self, n: int) -> bytes:
        if n < 0 or self.pos + n > len(self.buf):
            raise IndexCorruptError(f"{self.name} section truncated")
        out = self.buf[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, st: struct.Struct):
        return st.unpack(self.take(st.size))

    def array(self, dtype: np.dtype, count: int) -> np.ndarray:
        return np.frombuffer(self.take(dtype.itemsize * count), dtype=dtype)

    def done(self) -> None:
        if self.pos != len(self.buf):
            raise IndexCorruptError(f"{self.name} section has trailing bytes")


def loads(data: bytes) -> DistanceIndex:
    if len(data) < _HEADER.size:
        raise IndexCorruptError("file shorter than header")
    (magic, version, flags, beta_num, beta_den, fingerprint,
     n, core_n, leaf_size, section_count) = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise UnsupportedFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedFormatError(f"unsupported version {version}")
    if flags & FLAG_WIDE_DISTANCES or flags & ~7:
        raise UnsupportedFormatError(f"unsupported flags {flags:#x}")
    if beta_den == 0 or core_n > n:
        raise IndexCorruptError("inconsistent header")
    table_end = _HEADER.size + _SECTION.size * section_count
    if table_end > len(data):
        raise IndexCorruptError("section table truncated")
    sections: dict[int, bytes] = {}
    for i in range(section_count):
        sid, _, off, length = _SECTION.unpack_from(data, _HEADER.size + i * _SECTION.size)
        if off < table_end or off + length > len(data):
            raise IndexCorruptError(f"section {sid} out of bounds")
        sections[sid] = data[off:off + length]
    for sid in (SEC_HIERARCHY, SEC_VERTEX_MAP, SEC_LABELS, SEC_CONTRACTION):
        if sid not in sections:
            raise IndexCorruptError(f"missing section {sid}")

    # hierarchy
    r = _Reader(sections[SEC_HIERARCHY], "hierarchy")
    (node_count,) = r.unpack(struct.Struct("<I"))
    nodes: dict[int, HierarchyNode] = {}
    for _ in range(node_count):
        node_id, size, cut_len = r.unpack(_NODE)
        cut = tuple(int(v) for v in r.array(U32, cut_len))
        if any(v >= core_n for v in cut):
            raise IndexCorruptError("cut vertex out of range")
        nodes[node_id] = HierarchyNode(node_id, cut, size)
    r.done()
    for node in nodes.values():
        if node.level < 58:
            left, right = child_id(node.id, 0), child_id(node.id, 1)
            node.left = left if left in nodes else None
            node.right = right if right in nodes else None

    r = _Reader(sections[SEC_VERTEX_MAP], "vertex map")
    vertex_node = [int(x) for x in r.array(U64, core_n)]
    vertex_pos = [int(x) for x in r.array(U32, core_n)]
    original_of = [int(x) for x in r.array(U32, core_n)]
    r.done()
    for v in range(core_n):
        node = nodes.get(vertex_node[v])
        if node is None or vertex_pos[v] >= len(node.cut) or node.cut[vertex_pos[v]] != v:
            raise IndexCorruptError(f"vertex map entry {v} inconsistent with hierarchy")
    if any(v >= n for v in original_of):
        raise IndexCorruptError("core vertex maps outside the graph")

    r = _Reader(sections[SEC_LABELS], "labels")
    levels = r.array(U32, core_n)
    total_levels = int(levels.sum(dtype=np.uint64))
    lengths = r.array(U32, total_levels)
    total = int(lengths.sum(dtype=np.uint64))
    values = r.array(U32, total).tolist()
    r.done()
    labels: list[list[list[int]]] = []
    li = 0
    vi = 0
    for v in range(core_n):
        if int(levels[v]) != (vertex_node[v] & 0x3F) + 1:
            raise IndexCorruptError(f"label level count of vertex {v} is wrong")
        per = []
        for _ in range(int(levels[v])):
            k = int(lengths[li])
            li += 1
            per.append([INFINITY if x == _INF32 else x for x in values[vi:vi + k]])
            vi += k
        labels.append(per)

    records: dict[int, ContractionRecord] = {}
    body = sections[SEC_CONTRACTION]
    if body:
        r = _Reader(body, "contraction")
        (count,) = r.unpack(struct.Struct("<I"))
        cols = [r.array(U32, count), r.array(U32, count), r.array(U32, count),
                r.array(U32, count), r.array(U64, count), r.array(U32, count)]
        r.done()
        for vals in zip(*(c.tolist() for c in cols)):
            rec = ContractionRecord(*vals)
            if rec.vertex >= n or rec.root >= n or rec.parent >= n:
                raise IndexCorruptError("contraction record out of range")
            records[rec.vertex] = rec

    core_of = [-1] * n
    for i, v in enumerate(original_of):
        core_of[v] = i
    for v in range(n):
        if core_of[v] < 0 and v not in records:
            raise IndexCorruptError(f"vertex {v} is neither core nor contracted")
    for rec in records.values():
        if core_of[rec.vertex] >= 0 or core_of[rec.root] < 0:
            raise IndexCorruptError(f"contraction record {rec.vertex} inconsistent")
        up = records.get(rec.parent)
        if up is None:
            ok = rec.parent == rec.root and rec.depth == 1 and rec.dist_to_root == rec.dist_to_parent
        else:
            ok = (up.root == rec.root and up.depth == rec.depth - 1
                  and rec.dist_to_root == up.dist_to_root + rec.dist_to_parent)
        if not ok:
            raise IndexCorruptError(f"contraction record {rec.vertex} inconsistent")

    stats = BuildStats(entry_count=total)
    if SEC_STATS in sections and len(sections[SEC_STATS]) == 48:
        vals = struct.unpack("<6Q", sections[SEC_STATS])
        stats = BuildStats(*vals)

    return DistanceIndex(
        vertex_count=n,
        fingerprint=fingerprint,
        beta=Fraction(beta_num, beta_den),
        leaf_size=leaf_size,
        tail_pruning=bool(flags & FLAG_TAIL_PRUNING),
        contraction=bool(flags & FLAG_CONTRACTION),
        hierarchy=Hierarchy(nodes, vertex_node, vertex_pos, Fraction(beta_num, beta_den)),
        labels=labels,
        records=records,
        core_of=core_of,
        original_of=original_of,
        stats=stats,
    )


def load(source: str | os.PathLike | BinaryIO) -> DistanceIndex:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as f:
            return loads(f.read())
    return loads(source.read())


# graph blob: magic, version, reserved, n, m, then u32 columns u, v, w
_GRAPH_HEADER = struct.Struct("<4sHHII")


def dump_graph(g: WeightedGraph) -> bytes:
    edges = sorted(g.edges())
    cols = [np.asarray([e[i] for e in edges], dtype=U32) for i in range(3)]
    header = _GRAPH_HEADER.pack(GRAPH_MAGIC, VERSION, 0, g.vertex_count, len(edges))
    return header + b"".join(c.tobytes() for c in cols)


def load_graph_blob(data: bytes) -> WeightedGraph:
    if len(data) < _GRAPH_HEADER.size:
        raise IndexCorruptError("graph blob shorter than header")
    magic, version, _, n, m = _GRAPH_HEADER.unpack_from(data, 0)
    if magic != GRAPH_MAGIC:
        raise UnsupportedFormatError(f"bad graph magic {magic!r}")
    if version != VERSION:
        raise UnsupportedFormatError(f"unsupported graph version {version}")
    r = _Reader(data[_GRAPH_HEADER.size:], "graph")
    us, vs, ws = (r.array(U32, m).tolist() for _ in range(3))
    r.done()
    try:
        return WeightedGraph(n, zip(us, vs, ws))
    except ValueError as e:
        raise IndexCorruptError(str(e)) from None

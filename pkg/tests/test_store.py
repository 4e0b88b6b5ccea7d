import io
import struct

import pytest

from corpus import fringed, grid, random_connected
from hc2l import store
from hc2l.graph import WeightedGraph
from hc2l.index import build_index, query


def same_index(a, b):
    fields = ["vertex_count", "fingerprint", "beta", "leaf_size", "tail_pruning", "contraction",
              "hierarchy", "labels", "records", "core_of", "original_of", "stats"]
    return all(getattr(a, f) == getattr(b, f) for f in fields)


def section_table(data):
    header = struct.unpack_from("<4sHHIIQIIII", data, 0)
    count = header[-1]
    return {
        sid: (off, length)
        for sid, _, off, length in (
            struct.unpack_from("<IIQQ", data, 40 + 24 * i) for i in range(count)
        )
    }


@pytest.mark.parametrize("g", [random_connected(90, 1), fringed(3), grid(6, 7)])
def test_roundtrip(g):
    idx = build_index(g)
    data = store.dumps(idx)
    back = store.loads(data)
    assert same_index(idx, back)
    assert store.dumps(back) == data


def test_save_to_path_and_stream(tmp_path):
    idx = build_index(random_connected(40, 2))
    p = tmp_path / "x.idx"
    n = store.save(idx, p)
    assert n == p.stat().st_size
    buf = io.BytesIO()
    assert store.save(idx, buf) == n
    assert buf.getvalue() == p.read_bytes()
    assert same_index(store.load(p), store.load(io.BytesIO(buf.getvalue())))


def test_header_fields():
    idx = build_index(random_connected(40, 2), beta="0.25", tail_pruning=False)
    data = store.dumps(idx)
    magic, version, flags, num, den, fp, n, core, leaf, count = struct.unpack_from("<4sHHIIQIIII", data, 0)
    assert (magic, version, num, den, fp, n) == (b"HC2L", 1, 1, 4, idx.fingerprint, 40)
    assert flags == store.FLAG_CONTRACTION
    assert count == 5


def test_empty_contraction_has_no_body():
    g = grid(5, 5)
    data = store.dumps(build_index(g))
    assert section_table(data)[store.SEC_CONTRACTION][1] == 0
    data = store.dumps(build_index(fringed(1)))
    assert section_table(data)[store.SEC_CONTRACTION][1] > 0


def test_unreachable_distances_survive():
    # an edgeless pair is a leaf whose arrays hold an unreachable entry
    built = build_index(WeightedGraph(2), contraction=False)
    inf = (1 << 64) - 1
    assert any(x == inf for per in built.labels for a in per for x in a)
    idx = store.loads(store.dumps(built))
    assert idx.labels == built.labels
    assert query(idx, 0, 1) == inf


def test_bad_magic_and_version():
    data = bytearray(store.dumps(build_index(random_connected(20, 1))))
    bad = bytes(b"XXXX" + data[4:])
    with pytest.raises(store.UnsupportedFormatError):
        store.loads(bad)
    v2 = bytearray(data)
    v2[4:6] = struct.pack("<H", 2)
    with pytest.raises(store.UnsupportedFormatError):
        store.loads(bytes(v2))
    wide = bytearray(data)
    wide[6:8] = struct.pack("<H", store.FLAG_WIDE_DISTANCES)
    with pytest.raises(store.UnsupportedFormatError):
        store.loads(bytes(wide))


def test_truncation_is_corruption():
    data = store.dumps(build_index(random_connected(30, 1)))
    for cut in (10, 50, len(data) // 2, len(data) - 1):
        with pytest.raises(store.IndexCorruptError):
            store.loads(data[:cut])


def test_section_out_of_bounds():
    data = bytearray(store.dumps(build_index(random_connected(30, 1))))
    struct.pack_into("<Q", data, 40 + 8, len(data) + 10)
    with pytest.raises(store.IndexCorruptError):
        store.loads(bytes(data))


def test_inconsistent_vertex_map():
    data = bytearray(store.dumps(build_index(random_connected(30, 1))))
    off, _ = section_table(data)[store.SEC_VERTEX_MAP]
    # cut position of vertex 0 -> nonsense
    core = struct.unpack_from("<I", data, 28)[0]
    struct.pack_into("<I", data, off + 8 * core, 999)
    with pytest.raises(store.IndexCorruptError):
        store.loads(bytes(data))


def test_graph_blob():
    g = random_connected(50, 3)
    blob = store.dump_graph(g)
    assert store.load_graph_blob(blob) == g
    with pytest.raises(store.UnsupportedFormatError):
        store.load_graph_blob(b"NOPE" + blob[4:])
    with pytest.raises(store.IndexCorruptError):
        store.load_graph_blob(blob[:-3])


def test_deterministic_across_builds_and_threads():
    g = random_connected(160, 4)
    blobs = {store.dumps(build_index(g, threads=t)) for t in (1, 1, 4, 8)}
    assert len(blobs) == 1

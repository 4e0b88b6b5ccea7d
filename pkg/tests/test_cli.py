import random
import struct

import pytest

from corpus import random_connected
from hc2l import store
from hc2l.cli import main
from hc2l.graph import WeightedGraph, dijkstra, write_dimacs


def kv(out):
    d = {}
    for line in out.splitlines():
        for part in line.split():
            k, _, v = part.partition("=")
            d[k] = v
    return d


@pytest.fixture()
def files(tmp_path, capsys):
    g = random_connected(60, 4)
    gr = tmp_path / "g.gr"
    with open(gr, "w") as f:
        write_dimacs(g, f)
    idx = tmp_path / "g.idx"
    assert main(["build", "--graph", str(gr), "--out", str(idx)]) == 0
    return g, gr, idx, tmp_path


def test_build_report(files, capsys):
    g, gr, idx, tmp = files
    out = kv(capsys.readouterr().out)
    for key in ("build_seconds", "height", "max_cut", "entries", "shortcuts", "naive_bound", "cut_cover_bound"):
        assert key in out
    assert int(out["vertices"]) == 60


def test_build_threads_identical(files):
    g, gr, idx, tmp = files
    other = tmp / "t8.idx"
    assert main(["build", "--graph", str(gr), "--threads", "8", "--out", str(other)]) == 0
    assert other.read_bytes() == idx.read_bytes()


def test_query_single_and_pairs(files, capsys):
    g, gr, idx, tmp = files
    capsys.readouterr()
    assert main(["query", "--index", str(idx), "--s", "3", "--t", "3"]) == 0
    assert capsys.readouterr().out.strip() == "0"
    rng = random.Random(0)
    pairs = [(rng.randint(1, 60), rng.randint(1, 60)) for _ in range(30)]
    pf = tmp / "pairs.txt"
    pf.write_text("".join(f"{s} {t}\n" for s, t in pairs))
    assert main(["query", "--index", str(idx), "--pairs", str(pf)]) == 0
    got = capsys.readouterr().out.split()
    assert got == [str(dijkstra(g, s - 1)[t - 1]) for s, t in pairs]


def test_query_bad_ids(files, capsys):
    g, gr, idx, tmp = files
    pf = tmp / "bad.txt"
    pf.write_text("1 2\n0 5\n1 x\n2 1\n")
    capsys.readouterr()
    assert main(["query", "--index", str(idx), "--pairs", str(pf)]) == 1
    out = capsys.readouterr()
    lines = out.out.split()
    assert lines[1:3] == ["ERR", "ERR"] and lines[0] == lines[3]
    assert "line 2" in out.err and "line 3" in out.err


def test_query_needs_pair():
    with pytest.raises(SystemExit):
        main(["query", "--index", "x"])


def test_verify(files, capsys):
    g, gr, idx, tmp = files
    assert main(["verify", "--graph", str(gr), "--index", str(idx), "--all-pairs"]) == 0
    out = kv(capsys.readouterr().out)
    assert out["mismatches"] == "0" and out["pairs"] == str(60 * 60)
    assert main(["verify", "--graph", str(gr), "--index", str(idx), "--samples", "200"]) == 0


def test_verify_stale(files, capsys):
    g, gr, idx, tmp = files
    other = tmp / "other.gr"
    with open(other, "w") as f:
        write_dimacs(random_connected(60, 5), f)
    assert main(["verify", "--graph", str(other), "--index", str(idx), "--samples", "5"]) == 1
    assert "fingerprint" in capsys.readouterr().out


def label_value_offset(data):
    """Byte offset of the first positive finite label value."""
    core = struct.unpack_from("<I", data, 28)[0]
    count = struct.unpack_from("<I", data, 36)[0]
    table = [struct.unpack_from("<IIQQ", data, 40 + 24 * i) for i in range(count)]
    off = next(o for sid, _, o, _ in table if sid == store.SEC_LABELS)
    levels = sum(struct.unpack_from(f"<{core}I", data, off))
    start = off + 4 * core + 4 * levels
    k = 0
    while struct.unpack_from("<I", data, start + 4 * k)[0] in (0, 0xFFFFFFFF):
        k += 1
    return start + 4 * k


def test_tampered_label_is_caught(files, capsys):
    g, gr, idx, tmp = files
    data = bytearray(idx.read_bytes())
    struct.pack_into("<I", data, label_value_offset(data), 0)
    bad = tmp / "bad.idx"
    bad.write_bytes(bytes(data))
    capsys.readouterr()
    assert main(["verify", "--graph", str(gr), "--index", str(bad), "--all-pairs"]) == 1
    out = capsys.readouterr().out
    assert "mismatch=1" in out and "status=fail" in out


def test_tampered_contraction_is_caught(files, capsys):
    g, gr, idx, tmp = files
    data = bytearray(idx.read_bytes())
    # the stats section (48 bytes) follows the contraction section
    data[-60] ^= 0x7F
    bad = tmp / "bad.idx"
    bad.write_bytes(bytes(data))
    assert main(["verify", "--graph", str(gr), "--index", str(bad), "--all-pairs"]) == 1
    assert "hc2l verify" in capsys.readouterr().err


def test_verify_disconnected(tmp_path, capsys):
    g = WeightedGraph(6, [(0, 1, 2), (1, 2, 2), (3, 4, 1)])
    gr = tmp_path / "d.gr"
    with open(gr, "w") as f:
        write_dimacs(g, f)
    idx = tmp_path / "d.idx"
    assert main(["build", "--graph", str(gr), "--out", str(idx)]) == 0
    assert main(["verify", "--graph", str(gr), "--index", str(idx), "--all-pairs"]) == 0
    capsys.readouterr()
    assert main(["query", "--index", str(idx), "--s", "1", "--t", "6"]) == 0
    assert capsys.readouterr().out.strip() == "INF"


def test_bench_and_stats(files, capsys):
    g, gr, idx, tmp = files
    capsys.readouterr()
    assert main(["bench", "--index", str(idx), "--random", "200", "--seed", "1"]) == 0
    first = kv(capsys.readouterr().out)
    assert main(["bench", "--index", str(idx), "--random", "200", "--seed", "1"]) == 0
    assert kv(capsys.readouterr().out)["ahs"] == first["ahs"]
    assert main(["bench", "--index", str(idx), "--buckets", "5", "--per-bucket", "20", "--lmin", "50"]) == 0
    out = capsys.readouterr().out
    assert "bucket=5" in out and "bucket=all" in out
    assert main(["stats", "--index", str(idx)]) == 0
    s = kv(capsys.readouterr().out)
    assert s["beta"] == "1/5" and s["vertices"] == "60"


def test_errors_exit_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.gr"
    bad.write_text("p sp 2 1\na 1 3 4\n")
    assert main(["build", "--graph", str(bad), "--out", str(tmp_path / "x")]) == 1
    assert "line 2" in capsys.readouterr().err
    junk = tmp_path / "junk.idx"
    junk.write_bytes(b"garbage!" * 10)
    assert main(["stats", "--index", str(junk)]) == 1
    assert main(["stats", "--index", str(tmp_path / "missing")]) == 1


def test_all_pairs_limit(tmp_path, capsys):
    g = WeightedGraph(5001, [(i, i + 1, 1) for i in range(5000)])
    gr = tmp_path / "big.gr"
    with open(gr, "w") as f:
        write_dimacs(g, f)
    idx = tmp_path / "big.idx"
    assert main(["build", "--graph", str(gr), "--out", str(idx)]) == 0
    assert main(["verify", "--graph", str(gr), "--index", str(idx), "--all-pairs"]) == 2

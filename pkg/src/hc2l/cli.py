"""Command-line interface. Vertex ids on the command line and in pair files are 1-based."""
from __future__ import annotations

import argparse
import logging
import random
import sys
from collections import defaultdict

from . import store
from .bench import BenchConfig, generate_workload, run_pairs
from .graph import INFINITY, DimacsError, dijkstra, read_dimacs
from .hierarchy import HierarchyTooDeep
from .index import StaleIndexError, VertexIdError, build_index, query

ALL_PAIRS_LIMIT = 5000


def _emit(**kv) -> None:
    print(" ".join(f"{k}={_fmt(v)}" for k, v in kv.items()))


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3f}"
    if v == INFINITY and isinstance(v, int):
        return "INF"
    return str(v)


def _dist(d: int) -> str:
    return "INF" if d == INFINITY else str(d)


def cmd_build(args) -> int:
    g = read_dimacs(args.graph)
    idx = build_index(
        g,
        beta=args.beta,
        leaf_size=args.leaf_size,
        tail_pruning=not args.no_tail_pruning,
        contraction=not args.no_contraction,
        threads=args.threads,
    )
    size = store.save(idx, args.out)
    s = idx.stats
    h = idx.hierarchy
    _emit(vertices=g.vertex_count, edges=g.edge_count, core_vertices=idx.core_vertex_count)
    _emit(build_seconds=idx.build_seconds, height=h.height, max_cut=h.max_cut, tree_nodes=len(h.nodes))
    _emit(entries=s.entry_count, label_bytes=idx.label_bytes(), shortcuts=s.shortcut_count)
    _emit(naive_bound=s.naive_upper_bound, cut_cover_bound=s.cut_cover_lower_bound,
          leaf_fallbacks=s.leaf_fallbacks, file_bytes=size)
    return 0


def _pair_lines(args):
    if args.pairs is None:
        yield 1, f"{args.s} {args.t}"
        return
    with open(args.pairs) as f:
        for lineno, line in enumerate(f, 1):
            if line.strip() and not line.lstrip().startswith("#"):
                yield lineno, line


def cmd_query(args) -> int:
    idx = store.load(args.index)
    ok = True
    for lineno, line in _pair_lines(args):
        try:
            s, t = (int(x) for x in line.split())
            print(_dist(query(idx, s - 1, t - 1)))
        except (ValueError, VertexIdError) as e:
            ok = False
            print("ERR")
            print(f"line {lineno}: bad pair {line.strip()!r}: {e}", file=sys.stderr)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    g = read_dimacs(args.graph)
    idx = store.load(args.index)
    try:
        idx.check_graph(g)
    except StaleIndexError as e:
        _emit(status="fail", reason="fingerprint")
        print(str(e), file=sys.stderr)
        return 1
    n = g.vertex_count
    by_source: dict[int, list[int]] = defaultdict(list)
    if args.all_pairs:
        if n > ALL_PAIRS_LIMIT:
            print(f"--all-pairs needs n <= {ALL_PAIRS_LIMIT}, graph has {n}", file=sys.stderr)
            return 2
        for s in range(n):
            by_source[s] = list(range(n))
    elif n:
        rng = random.Random(args.seed)
        for _ in range(args.samples):
            by_source[rng.randrange(n)].append(rng.randrange(n))
    checked = 0
    bad = 0
    for s in sorted(by_source):
        row = dijkstra(g, s)
        for t in by_source[s]:
            got = query(idx, s, t)
            checked += 1
            if got != row[t]:
                bad += 1
                _emit(mismatch=1, s=s + 1, t=t + 1, expected=_dist(row[t]), got=_dist(got))
    _emit(pairs=checked, mismatches=bad, status="pass" if bad == 0 else "fail")
    return 0 if bad == 0 else 1


def cmd_bench(args) -> int:
    idx = store.load(args.index)
    if args.random is not None:
        cfg = BenchConfig("random", pair_count=args.random, seed=args.seed)
    else:
        cfg = BenchConfig("buckets", bucket_count=args.buckets, per_bucket=args.per_bucket,
                          lmin=args.lmin, seed=args.seed)
    wl = generate_workload(idx, cfg)
    if cfg.mode == "buckets":
        _emit(lmax=wl.lmax, underfilled=",".join(str(i + 1) for i in wl.underfilled) or "none")
    for i, pairs in enumerate(wl.pairs):
        row = run_pairs(idx, pairs)
        extra = {}
        if wl.bounds:
            extra = {"bucket": i + 1, "lo": wl.bounds[i], "hi": wl.bounds[i + 1]}
        _emit(**extra, pairs=row.pairs, unreachable=row.unreachable,
              mean_us=row.mean_us, median_us=row.median_us, ahs=row.ahs)
    if len(wl.pairs) > 1:
        row = run_pairs(idx, [p for b in wl.pairs for p in b])
        _emit(bucket="all", pairs=row.pairs, unreachable=row.unreachable,
              mean_us=row.mean_us, median_us=row.median_us, ahs=row.ahs)
    return 0


def cmd_stats(args) -> int:
    idx = store.load(args.index)
    h = idx.hierarchy
    s = idx.stats
    _emit(vertices=idx.vertex_count, core_vertices=idx.core_vertex_count,
          contracted=len(idx.records), fingerprint=f"{idx.fingerprint:016x}")
    _emit(beta=f"{idx.beta.numerator}/{idx.beta.denominator}", leaf_size=idx.leaf_size,
          tail_pruning=int(idx.tail_pruning), contraction=int(idx.contraction))
    _emit(height=h.height, max_cut=h.max_cut, tree_nodes=len(h.nodes))
    _emit(entries=s.entry_count, label_bytes=idx.label_bytes(), shortcuts=s.shortcut_count,
          naive_bound=s.naive_upper_bound, cut_cover_bound=s.cut_cover_lower_bound)
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hc2l", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an index from a DIMACS graph")
    b.add_argument("--graph", required=True)
    b.add_argument("--beta", default="0.2")
    b.add_argument("--leaf-size", type=int, default=1)
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--no-tail-pruning", action="store_true")
    b.add_argument("--no-contraction", action="store_true")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer distance queries")
    q.add_argument("--index", required=True)
    q.add_argument("--s", type=int)
    q.add_argument("--t", type=int)
    q.add_argument("--pairs")
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="compare index answers with Dijkstra")
    v.add_argument("--graph", required=True)
    v.add_argument("--index", required=True)
    mode = v.add_mutually_exclusive_group(required=True)
    mode.add_argument("--samples", type=int)
    mode.add_argument("--all-pairs", action="store_true")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("bench", help="time queries on a generated workload")
    w.add_argument("--index", required=True)
    w.add_argument("--random", type=int)
    w.add_argument("--buckets", type=int, default=10)
    w.add_argument("--per-bucket", type=int, default=10_000)
    w.add_argument("--lmin", type=int, default=1000)
    w.add_argument("--seed", type=int, default=0)
    w.set_defaults(func=cmd_bench)

    s = sub.add_parser("stats", help="print index statistics")
    s.add_argument("--index", required=True)
    s.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    p = _parser()
    args = p.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if args.command == "query" and (args.pairs is None) == (args.s is None or args.t is None):
        p.error("query needs either --s and --t, or --pairs")
    try:
        return args.func(args)
    except (OSError, DimacsError, store.UnsupportedFormatError, store.IndexCorruptError,
            HierarchyTooDeep, OverflowError, ValueError) as e:
        print(f"hc2l {args.command}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: bench (config-driven grid), cluster (single run), eval (quality
metrics for a stored clustering), frontier (Pareto/AUC over a results CSV),
knn and rmat (dataset construction). Exit codes: 0 all ok, 1 some runs
failed, 2 configuration or usage errors.
"""

import argparse
import csv
import json
import sys

from . import bench as B
from . import io as gio
from .analysis import AnalysisError, auc_high_precision, pareto_frontier
from .datasets import RmatParams, build_knn_graph, generate_rmat, load_communities
from .graph import GraphError
from .metrics import MetricsError, PairLabels, evaluate
from .io import ParseError


def _add_graph_args(p):
    p.add_argument("--graph", required=True, help="graph file path")
    p.add_argument("--weighted", action="store_true",
                   help="edge list has a third weight column")
    p.add_argument("--binary", action="store_true",
                   help="graph file is binary PCBS-CSR1 instead of an edge list")


def build_parser():
    ap = argparse.ArgumentParser(prog="parclust")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run a clustering benchmark config")
    b.add_argument("--config", required=True)
    b.add_argument("--stats", default=None)
    b.add_argument("--deterministic", action="store_true")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--parallel-runs", type=int, default=1,
                   help="run this many grid entries concurrently "
                        "(timings become contended)")
    b.add_argument("--subprocess", action="store_true",
                   help="hard-kill timeouts by running each job in a child process")

    c = sub.add_parser("cluster", help="run one clusterer on one graph")
    c.add_argument("algo", choices=sorted(B.CLUSTERERS))
    _add_graph_args(c)
    c.add_argument("--out", required=True)
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--deterministic", action="store_true")
    c.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("eval", help="evaluate a stored clustering")
    e.add_argument("--clustering", required=True)
    _add_graph_args(e)
    e.add_argument("--communities", default=None)
    e.add_argument("--pairs", default=None)
    e.add_argument("--pair-threshold", type=float, default=None)
    e.add_argument("--beta", type=float, default=0.5)
    e.add_argument("--out", default=None, help="write the JSON report here")

    f = sub.add_parser("frontier", help="Pareto frontier over a results CSV")
    f.add_argument("--csv", required=True)
    f.add_argument("--x", required=True, help="column for the x metric")
    f.add_argument("--y", required=True, help="column for the y metric")
    f.add_argument("--orientation", choices=["max-max", "min-x-max-y"],
                   default="max-max")
    f.add_argument("--auc", action="store_true",
                   help="also print the high-precision AUC (x must be precision)")
    f.add_argument("--out", default=None, help="write frontier rows here (CSV)")

    k = sub.add_parser("knn", help="build a k-NN similarity graph from vectors")
    k.add_argument("--vectors", required=True)
    k.add_argument("-k", type=int, required=True, dest="k")
    k.add_argument("--metric", choices=["euclidean", "cosine"], default="euclidean")
    k.add_argument("--out", required=True)
    k.add_argument("--binary", action="store_true", help="write binary CSR output")

    r = sub.add_parser("rmat", help="generate a synthetic RMAT graph")
    r.add_argument("--log2n", type=int, required=True)
    r.add_argument("--edge-factor", type=int, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--a", type=float, default=0.5)
    r.add_argument("--b", type=float, default=0.1)
    r.add_argument("--c", type=float, default=0.1)
    r.add_argument("--d", type=float, default=0.3)
    r.add_argument("--out", required=True)
    r.add_argument("--binary", action="store_true", help="write binary CSR output")
    return ap


def _parse_algo_flags(extra, algo):
    valid = B.CLUSTERERS[algo][1]
    params = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--"):
            raise SystemExit(f"unexpected argument {tok!r}")
        key = tok[2:].replace("-", "_")
        if key not in valid:
            raise SystemExit(f"--{key} is not a parameter of {algo} "
                             f"(valid: {', '.join(sorted(valid))})")
        if i + 1 >= len(extra):
            raise SystemExit(f"missing value for --{key}")
        params[key] = B._parse_scalar(extra[i + 1])
        i += 2
    return params


def _save_graph(g, path, binary):
    if binary:
        gio.save_csr_binary(g, path)
    else:
        gio.save_edge_list(g, path)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    args, extra = ap.parse_known_args(argv)
    try:
        return _dispatch(args, extra)
    except (B.ConfigError, ParseError, GraphError, MetricsError,
            AnalysisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args, extra):
    if args.command == "bench":
        if extra:
            raise SystemExit(f"unexpected arguments: {extra}")
        cfg = B.parse_bench_config(args.config)
        stats = B.parse_stats_config(args.stats) if args.stats else None
        runs = B.execute(cfg, stats=stats, deterministic=args.deterministic,
                         seed=args.seed, parallel_runs=args.parallel_runs,
                         subprocess_mode=args.subprocess,
                         progress=lambda r: print(
                             f"[{r.status}] {r.graph} {r.clusterer} "
                             f"{r.params} round={r.round}", flush=True))
        failed = sum(1 for r in runs if r.status != "ok")
        print(f"{len(runs) - failed}/{len(runs)} runs ok")
        return 1 if failed else 0

    if args.command == "cluster":
        params = _parse_algo_flags(extra, args.algo)
        g = gio.load_graph(args.graph, weighted=args.weighted, binary=args.binary)
        ctx = B.RunContext(threads=args.threads, deterministic=args.deterministic,
                           seed=args.seed)
        clustering = B.CLUSTERERS[args.algo][0](g, params, ctx)
        gio.save_clustering(clustering, args.out)
        print(f"{clustering.num_clusters} clusters -> {args.out}")
        return 0

    if args.command == "eval":
        if extra:
            raise SystemExit(f"unexpected arguments: {extra}")
        g = gio.load_graph(args.graph, weighted=args.weighted, binary=args.binary)
        clustering = gio.load_clustering(args.clustering, n=g.n)
        gt = load_communities(args.communities) if args.communities else None
        pairs = None
        if args.pairs:
            if args.pair_threshold is None:
                raise SystemExit("--pairs requires --pair-threshold")
            xs, ys, ws = gio.load_pairs(args.pairs)
            pairs = PairLabels(xs=xs, ys=ys, ws=ws, threshold=args.pair_threshold)
        rep = evaluate(g, clustering, gt=gt, pairs=pairs, beta=args.beta,
                       compute_precision_recall=gt is not None or pairs is not None,
                       compute_edge_density=clustering.is_flat,
                       compute_triangle_density=clustering.is_flat,
                       compute_cluster_stats=True)
        text = json.dumps(rep.to_dict(), indent=2, sort_keys=True)
        if args.out:
            gio.atomic_write_text(args.out, text + "\n")
        print(text)
        return 0

    if args.command == "frontier":
        if extra:
            raise SystemExit(f"unexpected arguments: {extra}")
        points = []
        with open(args.csv, newline="") as fh:
            for i, row in enumerate(csv.DictReader(fh)):
                xs, ys = row.get(args.x, ""), row.get(args.y, "")
                if xs == "" or ys == "":
                    continue
                points.append((float(xs), float(ys), i))
        frontier = pareto_frontier(points, orientation=args.orientation)
        out = sys.stdout
        rows = [f"{args.x},{args.y},run_id"]
        rows += [f"{p.x},{p.y},{p.run_id}" for p in frontier]
        text = "\n".join(rows) + "\n"
        if args.out:
            gio.atomic_write_text(args.out, text)
        else:
            out.write(text)
        if args.auc:
            print(f"auc={auc_high_precision(frontier)}")
        return 0

    if args.command == "knn":
        from .datasets import VectorSet
        vectors = VectorSet.load(args.vectors)
        metric = "euclidean_inverse" if args.metric == "euclidean" else "cosine"
        g = build_knn_graph(vectors, args.k, metric=metric)
        _save_graph(g, args.out, args.binary)
        print(f"graph n={g.n} m={g.m} -> {args.out}")
        return 0

    if args.command == "rmat":
        p = RmatParams(log2_n=args.log2n, edge_factor=args.edge_factor,
                       a=args.a, b=args.b, c=args.c, d=args.d, seed=args.seed)
        g = generate_rmat(p)
        _save_graph(g, args.out, args.binary)
        print(f"graph n={g.n} m={g.m} -> {args.out}")
        return 0

    raise SystemExit(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())

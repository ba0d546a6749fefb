#!/usr/bin/env python3
"""End-to-end benchmark demo on synthetic data.

Builds two small graphs (an RMAT graph and a planted two-block k-NN graph),
writes clustering + statistics config files, runs the full grid, and prints
the precision/recall Pareto frontier with its high-precision AUC.

Usage: python scripts/run_demo_bench.py [workdir]
"""

import csv
import sys
from pathlib import Path

import numpy as np

import parclust as pc
from parclust import io as gio
from parclust.analysis import auc_high_precision, pareto_frontier
from parclust.bench import execute, parse_bench_config, parse_stats_config

BENCH_CFG = """Input directory: {ind}
Output directory: {outd}
CSV output directory: {csvd}
Clusterers: ConnectivityClusterer; CorrelationClusterer; ParHacClusterer; TectonicClusterer; LabelPropagationClusterer
Graphs: blocks.txt; rmat.txt
GBBS format: false
Weighted: true
Number of threads: 2
Number of rounds: 1
Timeout: 5m

ConnectivityClusterer:
  config:
    threshold: 0.2; 0.4; 0.6

CorrelationClusterer:
  config:
    resolution: 0.05; 0.2; 0.5

ParHacClusterer:
  config:
    weight_threshold: 0.2; 0.4
    epsilon: 0.1

TectonicClusterer:
  config:
    theta: 0.02; 0.06
"""

STATS_CFG = """Input communities: blocks.cmty; rmat.cmty

statistics_config:
  compute_edge_density: true
  compute_precision_recall: true
  compute_cluster_stats: true
  f_score_param: 0.5
"""


def build_inputs(ind):
    rng = np.random.default_rng(7)
    blobs = np.vstack([rng.normal((0, 0), 0.6, (150, 2)),
                       rng.normal((8, 8), 0.6, (150, 2))])
    g = pc.build_knn_graph(blobs, k=8)
    gio.save_edge_list(g, ind / "blocks.txt")
    (ind / "blocks.cmty").write_text(
        " ".join(map(str, range(150))) + "\n"
        + " ".join(map(str, range(150, 300))) + "\n")

    r = pc.generate_rmat(pc.RmatParams(log2_n=9, edge_factor=8, seed=5))
    # weighted view of the RMAT graph so every clusterer applies
    gw = pc.Graph(n=r.n, m=r.m, offsets=r.offsets, neighbors=r.neighbors,
                  weights=r.weights, weighted=True)
    gio.save_edge_list(gw, ind / "rmat.txt")
    comps = pc.connected_components(r)
    gio.save_clustering(comps, ind / "rmat.cmty")


def main():
    work = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_bench")
    ind, outd, csvd = work / "in", work / "out", work / "csv"
    ind.mkdir(parents=True, exist_ok=True)
    build_inputs(ind)
    (work / "bench.cfg").write_text(
        BENCH_CFG.format(ind=ind, outd=outd, csvd=csvd))
    (work / "stats.cfg").write_text(STATS_CFG)

    cfg = parse_bench_config(work / "bench.cfg")
    stats = parse_stats_config(work / "stats.cfg")
    runs = execute(cfg, stats=stats, deterministic=True, seed=1,
                   progress=lambda r: print(f"[{r.status}] {r.graph} "
                                            f"{r.clusterer} {r.params}"))
    ok = [r for r in runs if r.status == "ok"]
    print(f"\n{len(ok)}/{len(runs)} runs ok; results in {csvd}/metrics.csv")

    with open(csvd / "metrics.csv", newline="") as f:
        rows = [r for r in csv.DictReader(f)
                if r["graph"] == "blocks.txt" and r["precision"]]
    pts = [(float(r["precision"]), float(r["recall"]), i)
           for i, r in enumerate(rows)]
    frontier = pareto_frontier(pts)
    print("\nprecision/recall frontier (blocks.txt):")
    for p in frontier:
        r = rows[p.run_id]
        print(f"  P={p.x:.3f} R={p.y:.3f}  {r['clusterer']} {r['params_json']}")
    print(f"high-precision AUC (x2): {auc_high_precision(frontier):.3f}")


if __name__ == "__main__":
    main()

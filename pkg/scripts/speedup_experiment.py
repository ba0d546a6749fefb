#!/usr/bin/env python3
"""Thread-scaling measurement for correlation clustering and ParHAC on a
synthetic RMAT graph.

Usage: python scripts/speedup_experiment.py [--log2n 18] [--edge-factor 16]
       [--threads 1,2,4,8]
"""

import argparse
import time

import parclust as pc


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--log2n", type=int, default=18)
    ap.add_argument("--edge-factor", type=int, default=16)
    ap.add_argument("--threads", default="1,2,4,8")
    args = ap.parse_args()
    threads = [int(t) for t in args.threads.split(",")]

    print(f"building RMAT 2^{args.log2n} x{args.edge_factor} ...", flush=True)
    g = pc.generate_rmat(pc.RmatParams(log2_n=args.log2n,
                                       edge_factor=args.edge_factor, seed=42))
    print(f"n={g.n} m={g.m}")

    warm = pc.generate_rmat(pc.RmatParams(log2_n=12, edge_factor=8, seed=1))
    corr_p = pc.LambdaCCParams(resolution=0.05, max_rounds=3, seed=1)
    hac_p = pc.ParHACParams(epsilon=0.1, weight_threshold=0.4, seed=1)
    pc.cluster_correlation(warm, corr_p, num_threads=2)
    pc.cluster_parhac(warm, hac_p, num_threads=2)

    jobs = {
        "correlation": lambda t: pc.cluster_correlation(g, corr_p, num_threads=t),
        "parhac": lambda t: pc.cluster_parhac(g, hac_p, num_threads=t),
    }
    for name, job in jobs.items():
        base = None
        for t in threads:
            t0 = time.perf_counter()
            job(t)
            dt = time.perf_counter() - t0
            base = base or dt
            print(f"{name:12s} threads={t:2d}  {dt:7.2f}s  speedup={base / dt:.2f}x",
                  flush=True)


if __name__ == "__main__":
    main()

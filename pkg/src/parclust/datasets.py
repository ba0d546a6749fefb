"""Benchmark input construction: k-NN similarity graphs from vector sets and
synthetic RMAT graphs."""

from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError
from .io import load_community_sets, load_vectors
from .metrics import GroundTruth


@dataclass(frozen=True)
class VectorSet:
    """Row-major point set (float64) with an optional per-row label."""

    data: np.ndarray
    labels: np.ndarray = None

    def __post_init__(self):
        if self.data.ndim != 2 or self.data.shape[1] < 1:
            raise GraphError("vectors must form an (n, d) array with d >= 1")
        if self.labels is not None and self.labels.shape[0] != self.data.shape[0]:
            raise GraphError("label count does not match vector count")

    @property
    def count(self):
        return self.data.shape[0]

    @property
    def dimension(self):
        return self.data.shape[1]

    @classmethod
    def load(cls, path, labels_path=None):
        data, labels = load_vectors(path, labels_path)
        return cls(data=data, labels=labels)


@dataclass
class RmatParams:
    log2_n: int
    edge_factor: int
    a: float = 0.5
    b: float = 0.1
    c: float = 0.1
    d: float = 0.3
    seed: int = 0

    def __post_init__(self):
        probs = (self.a, self.b, self.c, self.d)
        if any(p < 0 for p in probs):
            raise ValueError("quadrant probabilities must be nonnegative")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise ValueError("quadrant probabilities must sum to 1")
        if self.log2_n < 0:
            raise ValueError("log2_n must be >= 0")
        if self.edge_factor < 0:
            raise ValueError("edge_factor must be >= 0")


def build_knn_graph(vectors, k, metric="euclidean_inverse", num_threads=1):
    """Exact k-nearest-neighbor similarity graph over a VectorSet or a raw
    (n, d) array.

    Brute-force distances, symmetrized by union. euclidean_inverse weights
    are 1/(1 + d); cosine weights are dot products of unit-normalized rows
    clamped to [0, 1] (k-NN by largest similarity). Distance ties break
    toward the lower vertex id.
    """
    if isinstance(vectors, VectorSet):
        vectors = vectors.data
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2:
        raise GraphError("vectors must be a 2-D array")
    n = x.shape[0]
    if not 0 < k < n:
        raise GraphError("k must satisfy 0 < k < number of points")
    if metric == "cosine":
        norms = np.linalg.norm(x, axis=1)
        if np.any(norms == 0):
            raise GraphError("cosine metric undefined for zero-norm vectors")
        x = x / norms[:, None]
    elif metric != "euclidean_inverse":
        raise GraphError(f"unknown metric {metric!r}")

    srcs = []
    dsts = []
    wts = []
    ids = np.arange(n, dtype=np.int64)
    block = max(1, min(n, 8_000_000 // max(n, 1)))
    sq = (x * x).sum(axis=1)
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        if metric == "cosine":
            sims = x[lo:hi] @ x.T
            dist = 1.0 - sims  # ranking only; weights come from sims
        else:
            dist = sq[lo:hi, None] - 2.0 * (x[lo:hi] @ x.T) + sq[None, :]
            np.maximum(dist, 0.0, out=dist)
        rows = np.arange(lo, hi)
        dist[rows - lo, rows] = np.inf  # exclude self
        for i in range(hi - lo):
            order = np.lexsort((ids, dist[i]))[:k]
            srcs.append(np.full(k, lo + i, dtype=np.int64))
            dsts.append(order.astype(np.int64))
            if metric == "cosine":
                wts.append(np.clip(sims[i, order], 0.0, 1.0))
            else:
                wts.append(1.0 / (1.0 + np.sqrt(dist[i, order])))
    return Graph.from_edge_arrays(np.concatenate(srcs), np.concatenate(dsts),
                                  np.concatenate(wts), n=n, weighted=True)


def generate_rmat(p, num_threads=1):
    """Recursive-quadrant edge sampling; self-loops dropped, duplicates
    merged, symmetrized. Unweighted."""
    n = 1 << p.log2_n
    target = p.edge_factor * n
    rng = np.random.default_rng(p.seed)
    if target == 0 or p.log2_n == 0:
        return Graph.from_edge_arrays(np.zeros(0, np.int64), np.zeros(0, np.int64),
                                      n=n, weighted=False)
    t_ab = p.a + p.b
    t_abc = p.a + p.b + p.c
    us = np.empty(target, dtype=np.int64)
    vs = np.empty(target, dtype=np.int64)
    chunk = 1 << 20
    for lo in range(0, target, chunk):
        hi = min(target, lo + chunk)
        r = rng.random((hi - lo, p.log2_n))
        ubit = r >= t_ab
        vbit = np.where(ubit, r >= t_abc, r >= p.a)
        powers = 1 << np.arange(p.log2_n - 1, -1, -1, dtype=np.int64)
        us[lo:hi] = ubit @ powers
        vs[lo:hi] = vbit @ powers
    return Graph.from_edge_arrays(us, vs, n=n, weighted=False)


def load_communities(path):
    """SNAP-style community file: one community per line, duplicates removed."""
    return GroundTruth.from_sets(load_community_sets(path))

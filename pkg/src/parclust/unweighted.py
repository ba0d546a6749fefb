"""Topology-only clusterers: low-diameter decomposition, k-core clustering,
SCAN, TECTONIC, label propagation, and SLPA."""

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .graph import (Clustering, GraphError, components_from_edges,
                    connected_components, core_numbers)
from .weighted import _check_deadline


@dataclass
class LDDParams:
    beta: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.beta <= 1):
            raise ValueError("beta must be in (0, 1]")


@dataclass
class ScanParams:
    epsilon_sim: float = 0.6
    mu: int = 2

    def __post_init__(self):
        if not (0 <= self.epsilon_sim <= 1):
            raise ValueError("epsilon_sim must be in [0, 1]")
        if self.mu < 1:
            raise ValueError("mu must be >= 1")


@dataclass
class TectonicParams:
    theta: float = 0.0

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError("theta must be >= 0")


@dataclass
class LabelPropParams:
    max_iters: int = 100
    seed: int = 0
    mode: str = "async_parallel"  # or "sequential_deterministic"

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.mode not in ("async_parallel", "sequential_deterministic"):
            raise ValueError("unknown label propagation mode")


@dataclass
class SlpaParams:
    rounds: int = 20
    freq_threshold: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if not (0 < self.freq_threshold <= 1):
            raise ValueError("freq_threshold must be in (0, 1]")


# ---------------------------------------------------------------------------
# low-diameter decomposition
# ---------------------------------------------------------------------------

def cluster_ldd(g, p, *, num_threads=1, deterministic=False, deadline=None):
    """MPX-style decomposition: every vertex draws an exponential shift with
    rate beta, and a vertex joins the center maximizing shift - distance
    (ties: lower center id), realized as multi-source Dijkstra with staggered
    start times.
    """
    if g.n == 0:
        return Clustering.flat(np.zeros(0, dtype=np.int64))
    rng = np.random.default_rng(p.seed)
    delta = rng.exponential(scale=1.0 / p.beta, size=g.n)
    start = float(delta.max()) - delta
    center = K.ldd_assign(g.offsets, g.neighbors, start)
    return Clustering.flat(center)


# ---------------------------------------------------------------------------
# k-core clustering
# ---------------------------------------------------------------------------

def cluster_kcore(g, k, *, num_threads=1, deterministic=False, deadline=None):
    """Connected components of the subgraph induced by vertices of coreness
    >= k; all other vertices stay in singleton clusters."""
    if k < 0:
        raise ValueError("k must be >= 0")
    core = core_numbers(g)
    keep = core >= k
    return connected_components(g, lambda u, v, w: keep[u] & keep[v],
                                num_threads=num_threads)


# ---------------------------------------------------------------------------
# SCAN
# ---------------------------------------------------------------------------

def _slot_similarities(g, num_threads=1):
    """Structural similarity per directed edge slot (closed neighborhoods)."""
    t = K.set_threads(num_threads)
    chunks = K.balanced_chunks(g.degrees() ** 2 + 1, t * 4)
    common = K.common_neighbor_counts(g.offsets, g.neighbors, chunks)
    deg = g.degrees()
    src = np.repeat(np.arange(g.n, dtype=np.int64), deg)
    return (common + 2.0) / np.sqrt((deg[src] + 1.0) * (deg[g.neighbors] + 1.0)), src


def structural_similarity(g, u, v):
    """sigma(u, v) = |closed(u) & closed(v)| / sqrt(|closed(u)| |closed(v)|)
    for an existing edge (u, v)."""
    if g.edge_slot(u, v) < 0:
        raise GraphError(f"({u}, {v}) is not an edge")
    a = g.neighbors_of(u)
    b = g.neighbors_of(v)
    common = np.intersect1d(a, b).shape[0] + 2  # plus both endpoints
    return float(common / np.sqrt((a.shape[0] + 1.0) * (b.shape[0] + 1.0)))


def cluster_scan(g, p, *, num_threads=1, deterministic=False, deadline=None):
    """Core vertices have at least mu structurally similar neighbors; clusters
    are components of the similar core-core graph, non-core vertices join the
    lowest-id similar core neighbor, everything else is a singleton."""
    if g.n == 0:
        return Clustering.flat(np.zeros(0, dtype=np.int64))
    sigma, src = _slot_similarities(g, num_threads)
    dst = g.neighbors
    similar = sigma >= p.epsilon_sim
    simcount = np.bincount(src[similar], minlength=g.n)
    is_core = simcount >= p.mu
    hmask = similar & is_core[src] & is_core[dst] & (src < dst)
    comp = components_from_edges(g.n, src[hmask], dst[hmask],
                                 num_threads=num_threads)
    attach_mask = similar & ~is_core[src] & is_core[dst]
    asg = np.where(is_core, comp, g.n + np.arange(g.n, dtype=np.int64))
    if attach_mask.any():
        asrc = src[attach_mask]
        adst = dst[attach_mask]
        first_src, first_idx = np.unique(asrc, return_index=True)
        # slots are grouped by source and ascending by destination, so the
        # first qualifying slot per source is the minimum-id core neighbor
        asg[first_src] = comp[adst[first_idx]]
    return Clustering.flat(asg)


# ---------------------------------------------------------------------------
# TECTONIC
# ---------------------------------------------------------------------------

def tectonic_edge_weights(g, *, num_threads=1):
    """Per directed slot: t(u,v) / (deg(u) + deg(v)) with t the exact number
    of triangles containing the edge. Returns (weights, triangle counts)."""
    t = K.set_threads(num_threads)
    chunks = K.balanced_chunks(g.degrees() ** 2 + 1, t * 4)
    tri = K.common_neighbor_counts(g.offsets, g.neighbors, chunks)
    deg = g.degrees()
    src = np.repeat(np.arange(g.n, dtype=np.int64), deg)
    # both endpoints of an edge have degree >= 1, so the denominator is >= 2
    w = tri / (deg[src] + deg[g.neighbors]).astype(np.float64)
    return w, tri


def cluster_tectonic(g, p, *, num_threads=1, deterministic=False, deadline=None):
    """Drop edges with triangle weight below theta; connected components of
    what remains."""
    w, _ = tectonic_edge_weights(g, num_threads=num_threads)
    src = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees())
    keep = (w >= p.theta) & (src < g.neighbors)
    comp = components_from_edges(g.n, src[keep], g.neighbors[keep],
                                 num_threads=num_threads)
    return Clustering.flat(comp, canonical=False)


# ---------------------------------------------------------------------------
# label propagation
# ---------------------------------------------------------------------------

def cluster_label_prop(g, p, *, num_threads=1, deterministic=False, deadline=None):
    """Each vertex repeatedly adopts the most frequent neighbor label (ties:
    numerically smallest). Deterministic mode sweeps vertices sequentially in
    descending id order, which keeps tie cascades from leaking across sparse
    bridges; async mode sweeps in parallel with possibly stale reads. Stops
    at a sweep with no changes or after max_iters sweeps."""
    n = g.n
    labels = np.arange(n, dtype=np.int64)
    if n == 0:
        return Clustering.flat(labels)
    mode = "sequential_deterministic" if deterministic else p.mode
    stamp_base = 0
    if mode == "sequential_deterministic":
        cnt = np.zeros(n, np.int64)
        stamp = np.zeros(n, np.int64)
        cand = np.zeros(max(int(g.degrees().max()) if g.m else 1, 1), np.int64)
        order = np.arange(n - 1, -1, -1, dtype=np.int64)
        for _ in range(p.max_iters):
            _check_deadline(deadline)
            moves = K.lp_sweep_seq(g.offsets, g.neighbors, labels, order,
                                   cnt, stamp, cand, stamp_base)
            stamp_base += n + 1
            if moves == 0:
                break
    else:
        t = K.set_threads(num_threads)
        chunks = K.make_chunks(n, t * 4)
        nchunk = chunks.shape[0] - 1
        cnt = np.zeros((nchunk, n), np.int64)
        stamp = np.zeros((nchunk, n), np.int64)
        cand = np.zeros((nchunk, max(int(g.degrees().max()) if g.m else 1, 1)), np.int64)
        for _ in range(p.max_iters):
            _check_deadline(deadline)
            moves = K.lp_sweep_par(g.offsets, g.neighbors, labels, chunks,
                                   cnt, stamp, cand, stamp_base)
            stamp_base += n + 1
            if moves == 0:
                break
    return Clustering.flat(labels)


# ---------------------------------------------------------------------------
# SLPA
# ---------------------------------------------------------------------------

def _slpa_memories(g, p, num_threads=1, deterministic=False):
    """Run the message rounds and return (memory rows, memory lengths)."""
    n = g.n
    mem = np.repeat(np.arange(n, dtype=np.int64), p.rounds + 1).reshape(n, p.rounds + 1)
    mlen = np.ones(n, dtype=np.int64)
    maxdeg = max(int(g.degrees().max()) if g.m else 1, 1)
    if deterministic or num_threads <= 1:
        cnt = np.zeros(n, np.int64)
        stamp = np.full(n, -1, np.int64)
        cand = np.zeros(maxdeg, np.int64)
        K.slpa_rounds_seq(g.offsets, g.neighbors, mem, mlen, p.rounds,
                          p.seed, cnt, stamp, cand)
    else:
        t = K.set_threads(num_threads)
        chunks = K.make_chunks(n, t)
        nchunk = chunks.shape[0] - 1
        cnt = np.zeros((nchunk, n), np.int64)
        stamp = np.full((nchunk, n), -1, np.int64)
        cand = np.zeros((nchunk, maxdeg), np.int64)
        K.slpa_rounds_par(g.offsets, g.neighbors, mem, mlen, p.rounds,
                          p.seed, chunks, cnt, stamp, cand)
    return mem, mlen


def cluster_slpa(g, p, *, num_threads=1, deterministic=False, deadline=None):
    """Speaker-listener label propagation with per-vertex label memories.

    Every round each vertex receives one frequency-proportional sample from
    each neighbor's memory and appends the most frequent received label
    (ties: smallest). A vertex ends up in the cluster of every label whose
    memory frequency reaches freq_threshold; identical clusters are
    deduplicated and uncovered vertices keep their own-id singleton.
    Returns an overlapping clustering.
    """
    n = g.n
    if n == 0:
        return Clustering.overlapping([])
    mem, mlen = _slpa_memories(g, p, num_threads=num_threads,
                               deterministic=deterministic)
    members = {}
    covered = np.zeros(n, dtype=bool)
    for u in range(n):
        row = mem[u, :mlen[u]]
        labs, counts = np.unique(row, return_counts=True)
        chosen = labs[counts / mlen[u] >= p.freq_threshold]
        for l in chosen:
            members.setdefault(int(l), []).append(u)
            covered[u] = True
    sets = []
    seen = set()
    for l in sorted(members):
        fs = frozenset(members[l])
        if fs not in seen:
            seen.add(fs)
            sets.append(fs)
    for u in np.flatnonzero(~covered):
        fs = frozenset((int(u),))
        if fs not in seen:
            seen.add(fs)
            sets.append(fs)
    return Clustering.overlapping(sets)

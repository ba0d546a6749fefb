"""Clusterers that use edge similarities: affinity, correlation/modularity
via the LambdaCC objective, approximate average-linkage HAC, and threshold
connectivity."""

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .graph import (Clustering, GraphError, components_from_edges,
                    connected_components)

MAX_SWEEPS = 100


class ClusterTimeout(RuntimeError):
    pass


def _check_deadline(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise ClusterTimeout("cooperative timeout hit")


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------

@dataclass
class LambdaCCParams:
    resolution: float = 0.0
    vertex_weight_mode: str = "unit"  # "unit" | "weighted_degree"
    gamma: float = 1.0  # provenance for modularity-derived resolutions
    max_rounds: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.resolution < 0:
            raise ValueError("resolution must be >= 0")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.vertex_weight_mode not in ("unit", "weighted_degree"):
            raise ValueError("vertex_weight_mode must be unit or weighted_degree")


@dataclass
class ParHACParams:
    epsilon: float = 0.1
    weight_threshold: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.weight_threshold < 0:
            raise ValueError("weight_threshold must be >= 0")


@dataclass
class AffinityParams:
    num_rounds: int = 50
    initial_threshold: float = 0.0
    decay: float = 1.0
    linkage: str = "average"

    def __post_init__(self):
        if self.num_rounds < 1:
            raise ValueError("num_rounds must be >= 1")
        if not (0 < self.decay <= 1):
            raise ValueError("decay must be in (0, 1]")
        if self.linkage != "average":
            raise ValueError("only average linkage is supported")


@dataclass
class Dendrogram:
    """Binary merge tree. Leaves are 0..n-1; merge i creates node n+i.
    Each merge records (left node, right node, similarity, new node)."""

    n_leaves: int
    merges: list = field(default_factory=list)
    node_size: np.ndarray = None

    @property
    def num_nodes(self):
        return self.n_leaves + len(self.merges)


def cut_dendrogram(dendrogram, threshold):
    """Apply exactly the merges with similarity >= threshold; the trees of
    the resulting forest are the clusters."""
    total = dendrogram.num_nodes
    if dendrogram.merges:
        m = np.asarray(dendrogram.merges, dtype=np.float64)
        kept = m[m[:, 2] >= threshold]
        children = np.concatenate([kept[:, 0], kept[:, 1]]).astype(np.int64)
        parents = np.concatenate([kept[:, 3], kept[:, 3]]).astype(np.int64)
    else:
        children = parents = np.zeros(0, dtype=np.int64)
    labels = components_from_edges(total, children, parents)
    return Clustering.flat(labels[:dendrogram.n_leaves])


# ---------------------------------------------------------------------------
# LambdaCC objective and Louvain-style local search
# ---------------------------------------------------------------------------

def _vertex_weights(g, mode):
    if mode == "weighted_degree":
        return g.weighted_degrees().astype(np.float64)
    return np.ones(g.n, dtype=np.float64)


def lambda_cc_objective(g, c, p):
    """Exact objective under the unordered-pair convention: for every
    co-clustered pair, w_uv - resolution * k_u * k_v (w_uv = 0 on non-edges),
    summed once per pair. The all-pairs double-counted variant is exactly
    twice this value.
    """
    if not c.is_flat:
        raise GraphError("lambda_cc_objective requires a flat clustering")
    asg = c.assignment
    k = c.num_clusters
    kvert = _vertex_weights(g, p.vertex_weight_mode)
    chunks = K.make_chunks(g.n, 1)
    intra_w, _ = K.intra_edge_weight(g.offsets, g.neighbors, g.weights, asg, max(k, 1), chunks)
    ksum = np.bincount(asg, weights=kvert, minlength=k)
    ksq = np.bincount(asg, weights=kvert * kvert, minlength=k)
    return float(intra_w.sum() - p.resolution * ((ksum * ksum - ksq).sum() / 2.0))


def modularity_score(g, c, gamma=1.0):
    """Weighted modularity sum over clusters of e_C/W - gamma*(d_C/(2W))^2."""
    if not c.is_flat:
        raise GraphError("modularity_score requires a flat clustering")
    w_total = g.total_edge_weight()
    if w_total <= 0:
        raise GraphError("modularity undefined for total edge weight 0")
    asg = c.assignment
    k = c.num_clusters
    chunks = K.make_chunks(g.n, 1)
    intra_w, _ = K.intra_edge_weight(g.offsets, g.neighbors, g.weights, asg, max(k, 1), chunks)
    deg = np.bincount(asg, weights=g.weighted_degrees(), minlength=k)
    return float((intra_w / w_total - gamma * (deg / (2.0 * w_total)) ** 2).sum())


def _local_search(offsets, nbrs, wts, kvert, lam, init, seed, deterministic,
                  num_threads, deadline=None, max_sweeps=MAX_SWEEPS,
                  min_moves=0):
    """Move sweeps until a full sweep makes at most min_moves moves (0 for a
    certified local maximum under single-vertex moves, detaching included).
    Returns (labels in [0, 2n) home space, total moves)."""
    n = offsets.shape[0] - 1
    idspace = 2 * n
    asg = init.astype(np.int64).copy()
    rng = np.random.default_rng(seed)
    total_moves = 0
    stamp_base = 0
    deg = offsets[1:] - offsets[:-1]
    maxdeg = int(deg.max()) if n else 0
    # async mode uses the chunked kernel at every thread count (1 thread =
    # one chunk, race-free); deterministic mode uses seeded sequential sweeps
    use_parallel = (not deterministic) and n > 2048
    if use_parallel:
        t = K.set_threads(num_threads)
        chunks_tbl = K.balanced_chunks(deg + 1, t)
        nchunk = chunks_tbl.shape[0] - 1
        wsum = np.empty((nchunk, idspace), np.float64)
        stamp = np.zeros((nchunk, idspace), np.int64)
        cand = np.empty((nchunk, max(maxdeg, 1)), np.int64)
        ck_chunks = K.make_chunks(n, t)
        for _ in range(max_sweeps):
            _check_deadline(deadline)
            ck = K.cluster_weight_sums(asg, kvert, idspace, ck_chunks)
            moves = K.lambdacc_sweep_par(offsets, nbrs, wts, kvert, lam, asg,
                                         ck, chunks_tbl, wsum, stamp,
                                         cand, stamp_base)
            stamp_base += n + 1
            total_moves += int(moves)
            if moves <= min_moves:
                return asg, total_moves
        # did not converge under races: finish with exact sequential sweeps
    wsum = np.empty(idspace, np.float64)
    stamp = np.zeros(idspace, np.int64)
    cand = np.empty(max(maxdeg, 1), np.int64)
    ck = np.zeros(idspace, np.float64)
    np.add.at(ck, asg, kvert)
    for _ in range(max_sweeps):
        _check_deadline(deadline)
        order = rng.permutation(n).astype(np.int64)
        moves = K.lambdacc_sweep_seq(offsets, nbrs, wts, kvert, lam, asg, ck,
                                     order, wsum, stamp, cand, stamp_base)
        stamp_base += n + 1
        total_moves += int(moves)
        if moves <= min_moves:
            break
    return asg, total_moves


def _multilevel(g, kvert, lam, start, seed, deterministic, num_threads,
                max_levels, deadline):
    offsets, nbrs, wts = g.offsets, g.neighbors, g.weights
    kv = kvert
    init = start
    maps = []
    nchunk = K.effective_threads(num_threads)
    for level in range(max_levels):
        _check_deadline(deadline)
        nlevel = offsets.shape[0] - 1
        # intermediate levels may stop with a trickle of moves left; the
        # final certification pass in cluster_correlation is exact
        slack = nlevel // 10_000
        labels, moves = _local_search(offsets, nbrs, wts, kv, lam, init,
                                      seed + level, deterministic, num_threads,
                                      deadline, min_moves=slack)
        dense, k = K.dense_first_occurrence(labels, 2 * nlevel)
        maps.append(dense)
        if (level > 0 and moves == 0) or k == nlevel:
            break
        K.set_threads(num_threads)
        offsets, nbrs, wts = K.contract_graph(offsets, nbrs, wts, dense, k, nchunk)
        kv = np.bincount(dense, weights=kv, minlength=k)
        init = np.arange(k, dtype=np.int64)
    flat = maps[0]
    for mp in maps[1:]:
        flat = mp[flat]
    return flat


def cluster_correlation(g, p, *, num_threads=1, deterministic=False, deadline=None):
    """Louvain-style maximization of the LambdaCC objective.

    Repeats multilevel (search + contract) cycles from the current flat
    assignment while the objective improves, then certifies the result with
    move sweeps on the original graph so no single-vertex move (including
    splitting off a vertex) can improve the objective.
    """
    kvert = _vertex_weights(g, p.vertex_weight_mode)
    lam = p.resolution
    asg = np.arange(g.n, dtype=np.int64)
    best = -np.inf
    for cycle in range(5):
        _check_deadline(deadline)
        asg = _multilevel(g, kvert, lam, asg, p.seed + 1000 * cycle,
                          deterministic, num_threads, p.max_rounds, deadline)
        obj = _objective_from_arrays(g, asg, kvert, lam)
        if obj <= best + max(1e-12, 1e-9 * abs(best)):
            break
        best = obj
    labels, _ = _local_search(g.offsets, g.neighbors, g.weights, kvert, lam,
                              asg, p.seed + 777, deterministic, num_threads,
                              deadline)
    dense, _ = K.dense_first_occurrence(labels, 2 * g.n)
    return Clustering.flat(dense, canonical=False)


def _objective_from_arrays(g, asg, kvert, lam):
    dense, k = K.dense_first_occurrence(asg, 2 * g.n)
    chunks = K.make_chunks(g.n, 1)
    intra_w, _ = K.intra_edge_weight(g.offsets, g.neighbors, g.weights, dense,
                                     max(k, 1), chunks)
    ksum = np.bincount(dense, weights=kvert, minlength=k)
    ksq = np.bincount(dense, weights=kvert * kvert, minlength=k)
    return float(intra_w.sum() - lam * ((ksum * ksum - ksq).sum() / 2.0))


def cluster_modularity(g, gamma=1.0, *, max_rounds=20, seed=0, num_threads=1,
                       deterministic=False, deadline=None):
    """Generalized modularity clustering: LambdaCC with weighted-degree vertex
    weights and resolution gamma / (2 * total edge weight)."""
    if g.m == 0:
        raise GraphError("modularity clustering needs at least one edge")
    w_total = g.total_edge_weight()
    if w_total <= 0:
        raise GraphError("modularity clustering needs positive total edge weight")
    p = LambdaCCParams(resolution=gamma / (2.0 * w_total),
                       vertex_weight_mode="weighted_degree",
                       gamma=gamma, max_rounds=max_rounds, seed=seed)
    return cluster_correlation(g, p, num_threads=num_threads,
                               deterministic=deterministic, deadline=deadline)


# ---------------------------------------------------------------------------
# affinity clustering (reciprocal best-edge contraction rounds)
# ---------------------------------------------------------------------------

class _MergeRecorder:
    """Accumulates batched binary merges as arrays; new dendrogram node ids
    are handed out in call order starting at n_leaves."""

    def __init__(self, n_leaves):
        self.n_leaves = n_leaves
        self.count = 0
        self.lefts = []
        self.rights = []
        self.sims = []
        self.sizes = []

    def record(self, node_a, node_b, sims, sizes):
        """Record pairwise merges; returns the new node ids (in batch order)."""
        new_nodes = self.n_leaves + self.count + np.arange(len(node_a), dtype=np.int64)
        self.count += len(node_a)
        self.lefts.append(np.minimum(node_a, node_b))
        self.rights.append(np.maximum(node_a, node_b))
        self.sims.append(np.asarray(sims, dtype=np.float64))
        self.sizes.append(np.asarray(sizes, dtype=np.int64))
        return new_nodes

    def dendrogram(self):
        node_size = np.ones(self.n_leaves + self.count, dtype=np.int64)
        merges = []
        if self.count:
            lefts = np.concatenate(self.lefts)
            rights = np.concatenate(self.rights)
            sims = np.concatenate(self.sims)
            sizes = np.concatenate(self.sizes)
            node_size[self.n_leaves:] = sizes
            new_ids = self.n_leaves + np.arange(self.count)
            merges = list(zip(lefts.tolist(), rights.tolist(),
                              sims.tolist(), new_ids.tolist()))
        return Dendrogram(n_leaves=self.n_leaves, merges=merges,
                          node_size=node_size)


def _merged_node_of(node_of, new_id, nxt, merged_ids, rec):
    """Dendrogram node per contracted cluster: merged clusters take the node
    ids just recorded, everything else keeps its old node."""
    out = np.empty(nxt, dtype=np.int64)
    out[new_id] = node_of
    batch = len(merged_ids)
    out[merged_ids] = rec.n_leaves + rec.count - batch + np.arange(batch)
    return out

def cluster_affinity(g, p, *, num_threads=1, deterministic=False, deadline=None):
    """Boruvka-flavored agglomeration with a geometrically decaying weight
    threshold. Per round each cluster nominates its maximum average-linkage
    incident edge with weight >= the round threshold (ties: lower neighbor
    cluster id) and reciprocally nominated pairs merge; contraction keeps the
    summed inter-cluster edge weight so linkage stays total/(size*size).
    Stops after num_rounds or in the first round where no edge qualifies.
    Returns the flat clustering and the merge hierarchy.
    """
    n = g.n
    offsets, nbrs, wts = g.offsets, g.neighbors, g.weights
    sizes = np.ones(n, dtype=np.int64)
    node_of = np.arange(n, dtype=np.int64)
    comp = np.arange(n, dtype=np.int64)
    rec = _MergeRecorder(n)
    t = K.set_threads(num_threads)
    for r in range(p.num_rounds):
        _check_deadline(deadline)
        k = offsets.shape[0] - 1
        if k <= 1 or nbrs.shape[0] == 0:
            break
        tau = p.initial_threshold * (p.decay ** r)
        chunks = K.balanced_chunks(np.diff(offsets) + 1, t)
        sel, selw = K.best_linkage_edges(offsets, nbrs, wts, sizes, tau, chunks)
        if np.all(sel < 0):
            break
        ids = np.arange(k, dtype=np.int64)
        has = sel >= 0
        mutual = has & (ids < sel) & (sel[np.where(has, sel, 0)] == ids)
        lo = np.flatnonzero(mutual)
        if lo.shape[0] == 0:
            break
        hi = sel[lo]
        partner = np.full(k, -1, dtype=np.int64)
        partner[lo] = hi
        partner[hi] = lo
        new_id, nxt = K.pair_merge_relabel(partner)
        rec.record(node_of[lo], node_of[hi], selw[lo], sizes[lo] + sizes[hi])
        node_of = _merged_node_of(node_of, new_id, nxt, new_id[lo], rec)
        offsets, nbrs, wts = K.contract_graph(offsets, nbrs, wts, new_id, nxt, t)
        sizes = np.bincount(new_id, weights=sizes, minlength=nxt).astype(np.int64)
        comp = new_id[comp]
    return Clustering.flat(comp), rec.dendrogram()


# ---------------------------------------------------------------------------
# ParHAC (bucketed approximate average-linkage HAC)
# ---------------------------------------------------------------------------

@K.njit(cache=True)
def _greedy_matching(cu, cv, order, k):
    used = np.zeros(k, np.uint8)
    take = np.zeros(order.shape[0], np.uint8)
    for t in range(order.shape[0]):
        i = order[t]
        a = cu[i]
        b = cv[i]
        if used[a] or used[b]:
            continue
        used[a] = 1
        used[b] = 1
        take[t] = 1
    return take


def cluster_parhac(g, p, *, num_threads=1, deterministic=False, deadline=None):
    """Approximate average-linkage HAC.

    Repeatedly takes the current maximum linkage T, collects every cluster
    pair with linkage >= max(T/(1+epsilon), weight_threshold), greedily picks
    a matching in ascending (min node id, max node id) order, and contracts
    the matched pairs in one batch. Linkage between two clusters depends only
    on those clusters, so batched merges equal performing them one at a time,
    and every recorded merge similarity is >= (current max)/(1+epsilon).
    The flat clustering is the dendrogram cut at weight_threshold.
    """
    n = g.n
    offsets, nbrs, wts = g.offsets, g.neighbors, g.weights
    sizes = np.ones(n, dtype=np.int64)
    node_of = np.arange(n, dtype=np.int64)
    rec = _MergeRecorder(n)
    t = K.set_threads(num_threads)
    while True:
        _check_deadline(deadline)
        k = offsets.shape[0] - 1
        if k <= 1 or nbrs.shape[0] == 0:
            break
        chunks = K.balanced_chunks(np.diff(offsets) + 1, t)
        top = K.max_linkage(offsets, nbrs, wts, sizes, chunks)
        if top < p.weight_threshold:
            break
        lo = max(top / (1.0 + p.epsilon), p.weight_threshold)
        cu, cv, cl = K.linkage_candidates(offsets, nbrs, wts, sizes, lo, chunks)
        if cu.shape[0] == 0:
            break
        if p.epsilon == 0.0:
            # exact mode: one merge at a time, picking the ascending
            # (min node id, max node id) tie winner, so the merge sequence
            # matches sequential exact HAC bit for bit
            a = np.minimum(node_of[cu], node_of[cv])
            b = np.maximum(node_of[cu], node_of[cv])
            sel = np.array([np.argmin(a * np.int64(2 * n) + b)], dtype=np.int64)
        else:
            # candidates are generated ascending by the lower cluster id, a
            # deterministic order under any thread count; greedy maximal
            # matching in that order
            order = np.arange(cu.shape[0], dtype=np.int64)
            take = _greedy_matching(cu, cv, order, k)
            sel = order[take.astype(bool)]
        mu, mv = cu[sel], cv[sel]
        partner = np.full(k, -1, dtype=np.int64)
        partner[mu] = mv
        partner[mv] = mu
        new_id, nxt = K.pair_merge_relabel(partner)
        rec.record(node_of[mu], node_of[mv], cl[sel], sizes[mu] + sizes[mv])
        node_of = _merged_node_of(node_of, new_id, nxt, new_id[mu], rec)
        offsets, nbrs, wts = K.contract_graph(offsets, nbrs, wts, new_id, nxt, t)
        sizes = np.bincount(new_id, weights=sizes, minlength=nxt).astype(np.int64)
    dendro = rec.dendrogram()
    return cut_dendrogram(dendro, p.weight_threshold), dendro


# ---------------------------------------------------------------------------
# threshold connectivity
# ---------------------------------------------------------------------------

def cluster_connectivity(g, tau, *, num_threads=1, deterministic=False, deadline=None):
    """Connected components after removing edges of similarity < tau."""
    return connected_components(g, lambda u, v, w: w >= tau,
                                num_threads=num_threads)

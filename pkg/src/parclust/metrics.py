"""Clustering quality metrics: best-match precision/recall, F-beta, ARI, NMI,
edge and triangle density, objective scores, pair-label evaluation, and
cluster statistics."""

from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels as K
from .weighted import lambda_cc_objective, modularity_score


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class GroundTruth:
    """Possibly-overlapping communities; duplicates removed, none empty."""

    communities: tuple

    @classmethod
    def from_sets(cls, sets):
        seen = set()
        out = []
        for s in sets:
            fs = frozenset(int(x) for x in s)
            if not fs:
                raise MetricsError("empty ground-truth community")
            if fs in seen:
                continue
            seen.add(fs)
            out.append(fs)
        return cls(communities=tuple(out))

    @classmethod
    def load(cls, path):
        from .io import load_community_sets
        return cls.from_sets(load_community_sets(path))

    def __len__(self):
        return len(self.communities)


@dataclass(frozen=True)
class PairLabels:
    """Sampled vertex pairs with similarities; a pair is positive when its
    similarity strictly exceeds the threshold."""

    xs: np.ndarray
    ys: np.ndarray
    ws: np.ndarray
    threshold: float

    def __post_init__(self):
        if np.any(self.xs == self.ys):
            raise MetricsError("pair labels require x != y")
        if self.ws.size and self.ws.min() < 0:
            raise MetricsError("pair similarities must be nonnegative")


@dataclass
class MetricsReport:
    precision: float = None
    recall: float = None
    f_beta: float = None
    beta: float = None
    ari: float = None
    nmi: float = None
    weighted_edge_density: float = None
    triangle_density: float = None
    lambda_cc_score: float = None
    modularity_score: float = None
    cluster_count: int = None
    cluster_size_min: int = None
    cluster_size_max: int = None
    cluster_size_mean: float = None
    diameter_min: int = None
    diameter_max: int = None
    diameter_mean: float = None
    auc: float = None  # populated downstream by frontier analysis

    def to_dict(self):
        return {k: v for k, v in asdict(self).items() if v is not None}


# ---------------------------------------------------------------------------
# best-match precision / recall / F-beta
# ---------------------------------------------------------------------------

def precision_recall(c, gt):
    """For each ground-truth community, match the output cluster with the
    largest intersection (ties: smaller cluster id); per-community precision
    |c & c'|/|c'| and recall |c & c'|/|c|, averaged unweighted."""
    if len(gt) == 0:
        raise MetricsError("empty ground truth")
    if c.is_flat:
        asg = c.assignment
        n = asg.shape[0]
        sizes = np.bincount(asg)
        precisions = []
        recalls = []
        for comm in gt.communities:
            ids = np.fromiter((v for v in comm), dtype=np.int64)
            if ids.min() < 0 or ids.max() >= n:
                raise MetricsError("ground-truth vertex outside clustering universe")
            counts = np.bincount(asg[ids])
            best = int(np.argmax(counts))  # argmax returns the smallest id on ties
            inter = counts[best]
            precisions.append(inter / sizes[best])
            recalls.append(inter / len(comm))
        return float(np.mean(precisions)), float(np.mean(recalls))
    # overlapping output: inverted index vertex -> cluster ids
    inv = {}
    for cid, s in enumerate(c.clusters):
        for v in s:
            inv.setdefault(v, []).append(cid)
    precisions = []
    recalls = []
    for comm in gt.communities:
        counts = {}
        for v in comm:
            for cid in inv.get(v, ()):
                counts[cid] = counts.get(cid, 0) + 1
        if counts:
            best = min(counts, key=lambda cid: (-counts[cid], cid))
            inter = counts[best]
            precisions.append(inter / len(c.clusters[best]))
            recalls.append(inter / len(comm))
        else:
            precisions.append(0.0)
            recalls.append(0.0)
    return float(np.mean(precisions)), float(np.mean(recalls))


def f_beta(precision, recall, beta):
    """(1 + beta^2) * P * R / (beta^2 * P + R), 0 when P + R == 0."""
    if precision < 0 or recall < 0:
        raise MetricsError("precision and recall must be nonnegative")
    if beta <= 0:
        raise MetricsError("beta must be positive")
    if precision + recall == 0:
        return 0.0
    b2 = beta * beta
    return float((1 + b2) * precision * recall / (b2 * precision + recall))


# ---------------------------------------------------------------------------
# ARI and NMI
# ---------------------------------------------------------------------------

def _flat_pair(a, b):
    if not (a.is_flat and b.is_flat):
        raise MetricsError("ARI/NMI are defined for non-overlapping clusterings only")
    if a.n != b.n:
        raise MetricsError("clusterings cover different vertex universes")
    return a.assignment, b.assignment


def _contingency(x, y):
    kx = int(x.max()) + 1 if x.size else 0
    ky = int(y.max()) + 1 if y.size else 0
    flat = x * ky + y
    return np.bincount(flat, minlength=kx * ky).reshape(kx, ky)


def ari(a, b):
    """Adjusted Rand Index via pair counting; 1.0 for the degenerate case
    where the expected index equals the maximum (identical trivial
    partitions)."""
    x, y = _flat_pair(a, b)
    n = x.shape[0]
    if n < 2:
        return 1.0
    nij = _contingency(x, y)

    def comb2(v):
        return v * (v - 1) / 2.0

    sum_ij = comb2(nij.astype(np.float64)).sum()
    sum_a = comb2(nij.sum(axis=1).astype(np.float64)).sum()
    sum_b = comb2(nij.sum(axis=0).astype(np.float64)).sum()
    total = comb2(float(n))
    expected = sum_a * sum_b / total
    max_index = (sum_a + sum_b) / 2.0
    if max_index == expected:
        return 1.0
    return float((sum_ij - expected) / (max_index - expected))


def nmi(a, b):
    """Mutual information normalized by the arithmetic mean of the label
    entropies (natural log); 1.0 when both entropies are zero."""
    x, y = _flat_pair(a, b)
    n = x.shape[0]
    if n == 0:
        return 1.0
    nij = _contingency(x, y).astype(np.float64)
    pij = nij / n
    px = pij.sum(axis=1)
    py = pij.sum(axis=0)
    hx = -np.sum(px[px > 0] * np.log(px[px > 0]))
    hy = -np.sum(py[py > 0] * np.log(py[py > 0]))
    if hx == 0.0 and hy == 0.0:
        return 1.0
    outer = np.outer(px, py)
    mask = pij > 0
    mi = float(np.sum(pij[mask] * np.log(pij[mask] / outer[mask])))
    return float(mi / ((hx + hy) / 2.0))


# ---------------------------------------------------------------------------
# density metrics
# ---------------------------------------------------------------------------

def size_weighted_mean(sizes, values):
    """Mean of per-cluster values weighted by cluster size."""
    sizes = np.asarray(sizes, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    return float((sizes * values).sum() / sizes.sum())


def weighted_edge_density(g, c):
    """Size-weighted mean of per-cluster edge density; singleton clusters
    count as density 1 (documented convention)."""
    if not c.is_flat:
        raise MetricsError("edge density requires a flat clustering")
    asg = c.assignment
    k = c.num_clusters
    sizes = np.bincount(asg, minlength=k).astype(np.float64)
    chunks = K.make_chunks(g.n, 1)
    _, intra_cnt = K.intra_edge_weight(g.offsets, g.neighbors, g.weights, asg, max(k, 1), chunks)
    possible = sizes * (sizes - 1) / 2.0
    density = np.where(possible > 0, intra_cnt / np.maximum(possible, 1.0), 1.0)
    return size_weighted_mean(sizes, density)


def triangle_density(g, c, num_threads=1):
    """Size-weighted mean of per-cluster (3 * triangles / wedges), counting
    only triangles and wedges fully inside the cluster; 1 when a cluster has
    no wedges."""
    if not c.is_flat:
        raise MetricsError("triangle density requires a flat clustering")
    asg = c.assignment
    k = c.num_clusters
    t = K.set_threads(num_threads)
    chunks = K.balanced_chunks(g.degrees() ** 2 + 1, t * 4)
    tri = K.cluster_triangle_counts(g.offsets, g.neighbors, asg, max(k, 1), chunks)
    din = K.intra_degree(g.offsets, g.neighbors, asg, chunks).astype(np.float64)
    wedges = np.bincount(asg, weights=din * (din - 1) / 2.0, minlength=k)
    ratio = np.where(wedges > 0, 3.0 * tri / np.maximum(wedges, 1.0), 1.0)
    sizes = np.bincount(asg, minlength=k)
    return size_weighted_mean(sizes, ratio)


# ---------------------------------------------------------------------------
# pair-label evaluation
# ---------------------------------------------------------------------------

def pair_label_pr(c, labels):
    """Precision/recall over labeled pairs: positive pairs should be
    co-clustered. Zero-denominator cases return 1 by convention."""
    if not c.is_flat:
        raise MetricsError("pair-label evaluation requires a flat clustering")
    asg = c.assignment
    n = asg.shape[0]
    if labels.xs.size and (labels.xs.max() >= n or labels.ys.max() >= n
                           or labels.xs.min() < 0 or labels.ys.min() < 0):
        raise MetricsError("pair vertex outside clustering universe")
    positive = labels.ws > labels.threshold
    same = asg[labels.xs] == asg[labels.ys]
    tp = int(np.sum(positive & same))
    fp = int(np.sum(~positive & same))
    fn = int(np.sum(positive & ~same))
    precision = tp / (tp + fp) if tp + fp > 0 else 1.0
    recall = tp / (tp + fn) if tp + fn > 0 else 1.0
    return float(precision), float(recall)


# ---------------------------------------------------------------------------
# cluster statistics
# ---------------------------------------------------------------------------

def cluster_stats(g, c, with_diameter=False):
    """Cluster count and size distribution; optionally per-cluster diameter
    estimated by double-sweep BFS on the induced subgraph (exact on trees, a
    lower bound in general)."""
    sizes = c.sizes()
    stats = {
        "cluster_count": int(sizes.shape[0]),
        "cluster_size_min": int(sizes.min()) if sizes.size else 0,
        "cluster_size_max": int(sizes.max()) if sizes.size else 0,
        "cluster_size_mean": float(sizes.mean()) if sizes.size else 0.0,
    }
    if with_diameter:
        if not c.is_flat:
            raise MetricsError("diameter statistics require a flat clustering")
        diams = cluster_diameters(g, c)
        stats.update({
            "diameter_min": int(diams.min()) if diams.size else 0,
            "diameter_max": int(diams.max()) if diams.size else 0,
            "diameter_mean": float(diams.mean()) if diams.size else 0.0,
        })
    return stats


def cluster_diameters(g, c):
    """Double-sweep BFS diameter estimate per cluster (lower bound)."""
    asg = c.assignment
    k = c.num_clusters
    dist = np.full(g.n, -1, dtype=np.int64)
    queue = np.empty(g.n, dtype=np.int64)
    first = np.full(k, -1, dtype=np.int64)
    for v in range(g.n - 1, -1, -1):
        first[asg[v]] = v
    diams = np.zeros(k, dtype=np.int64)
    for cid in range(k):
        src = first[cid]
        far, _ = K.bfs_far_in_cluster(g.offsets, g.neighbors, asg, src, dist, queue)
        _, ecc = K.bfs_far_in_cluster(g.offsets, g.neighbors, asg, far, dist, queue)
        diams[cid] = ecc
    return diams


# ---------------------------------------------------------------------------
# report assembly (used by the benchmark runner and eval CLI)
# ---------------------------------------------------------------------------

def evaluate(g, c, gt=None, pairs=None, beta=0.5, resolution=0.0, gamma=1.0,
             compute_precision_recall=False, compute_ari=False,
             compute_nmi=False, compute_edge_density=False,
             compute_triangle_density=False, compute_correlation_objective=False,
             compute_modularity=False, compute_cluster_stats=False,
             compute_diameter=False, num_threads=1):
    from .weighted import LambdaCCParams
    rep = MetricsReport()
    if compute_precision_recall:
        if pairs is not None:
            p, r = pair_label_pr(c, pairs)
        else:
            if gt is None:
                raise MetricsError("precision/recall needs ground truth or pairs")
            p, r = precision_recall(c, gt)
        rep.precision = p
        rep.recall = r
        rep.beta = beta
        rep.f_beta = f_beta(p, r, beta)
    if compute_ari or compute_nmi:
        if gt is None:
            raise MetricsError("ARI/NMI need ground-truth communities")
        gt_flat = _ground_truth_as_flat(gt, c.n if c.is_flat else None)
        if compute_ari:
            rep.ari = ari(c, gt_flat)
        if compute_nmi:
            rep.nmi = nmi(c, gt_flat)
    if compute_edge_density:
        rep.weighted_edge_density = weighted_edge_density(g, c)
    if compute_triangle_density:
        rep.triangle_density = triangle_density(g, c, num_threads=num_threads)
    if compute_correlation_objective:
        rep.lambda_cc_score = lambda_cc_objective(
            g, c, LambdaCCParams(resolution=resolution))
    if compute_modularity:
        rep.modularity_score = modularity_score(g, c, gamma=gamma)
    if compute_cluster_stats or compute_diameter:
        stats = cluster_stats(g, c, with_diameter=compute_diameter)
        rep.cluster_count = stats["cluster_count"]
        rep.cluster_size_min = stats["cluster_size_min"]
        rep.cluster_size_max = stats["cluster_size_max"]
        rep.cluster_size_mean = stats["cluster_size_mean"]
        if compute_diameter:
            rep.diameter_min = stats["diameter_min"]
            rep.diameter_max = stats["diameter_max"]
            rep.diameter_mean = stats["diameter_mean"]
    return rep


def _ground_truth_as_flat(gt, n):
    """Ground truth as a flat Clustering when its communities partition the
    vertex range; raises otherwise (ARI/NMI are non-overlapping metrics)."""
    from .graph import Clustering
    total = sum(len(s) for s in gt.communities)
    universe = set()
    for s in gt.communities:
        universe |= s
    n_eff = n if n is not None else (max(universe) + 1 if universe else 0)
    if len(universe) != total or len(universe) != n_eff:
        raise MetricsError("ground truth is overlapping or incomplete; "
                           "ARI/NMI require a full partition")
    asg = np.empty(n_eff, dtype=np.int64)
    for cid, s in enumerate(gt.communities):
        for v in s:
            asg[v] = cid
    return Clustering.flat(asg)

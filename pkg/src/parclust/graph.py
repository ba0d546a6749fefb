"""Immutable CSR graphs, clustering value types, and basic primitives."""

from dataclasses import dataclass

import numpy as np

from . import _kernels as K


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph in CSR form.

    Each undirected edge is stored twice (one slot per direction); adjacency
    rows are sorted ascending. Weights are nonnegative similarities; for
    unweighted graphs every slot carries 1.0. Instances are immutable and
    safe to share across threads.
    """

    n: int
    m: int
    offsets: np.ndarray
    neighbors: np.ndarray
    weights: np.ndarray
    weighted: bool = False

    @classmethod
    def from_edge_arrays(cls, u, v, w=None, n=None, weighted=None):
        """Build a Graph from (possibly messy) edge arrays.

        Self-loops are dropped, the edge set is symmetrized by union, and
        duplicate edges are merged keeping the maximum weight.
        """
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != v.shape:
            raise GraphError("edge endpoint arrays differ in length")
        if w is None:
            w = np.ones(u.shape[0], dtype=np.float64)
            if weighted is None:
                weighted = False
        else:
            w = np.asarray(w, dtype=np.float64)
            if weighted is None:
                weighted = True
        if u.size and (u.min() < 0 or v.min() < 0):
            raise GraphError("vertex ids must be nonnegative")
        if w.size and w.min() < 0:
            raise GraphError("edge weights must be nonnegative")

        if n is None:
            # max id seen, before sanitizing, so `0 0` still declares vertex 0
            n = int(max(u.max(initial=-1), v.max(initial=-1)) + 1)
        n = int(n)
        keep = u != v
        u, v, w = u[keep], v[keep], w[keep]
        if u.size and max(u.max(), v.max()) >= n:
            raise GraphError("vertex id out of range")

        uu = np.concatenate([u, v])
        vv = np.concatenate([v, u])
        ww = np.concatenate([w, w])
        if uu.size:
            key = uu * np.int64(n) + vv
            order = np.argsort(key, kind="stable")
            key = key[order]
            ww = ww[order]
            boundary = np.empty(key.shape[0], dtype=bool)
            boundary[0] = True
            boundary[1:] = key[1:] != key[:-1]
            starts = np.flatnonzero(boundary)
            wmax = np.maximum.reduceat(ww, starts)
            key = key[starts]
            uu = key // n
            vv = key % n
            ww = wmax
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(uu, minlength=n), out=offsets[1:])
        m = uu.shape[0] // 2
        return cls(n=n, m=int(m), offsets=offsets,
                   neighbors=vv.astype(np.int64), weights=ww.astype(np.float64),
                   weighted=bool(weighted))

    # -- basic accessors ----------------------------------------------------

    def degrees(self):
        return self.offsets[1:] - self.offsets[:-1]

    def degree(self, u):
        return int(self.offsets[u + 1] - self.offsets[u])

    def neighbors_of(self, u):
        return self.neighbors[self.offsets[u]:self.offsets[u + 1]]

    def weights_of(self, u):
        return self.weights[self.offsets[u]:self.offsets[u + 1]]

    def weighted_degrees(self):
        if self.m == 0:
            return np.zeros(self.n)
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        return np.bincount(src, weights=self.weights, minlength=self.n)

    def total_edge_weight(self):
        """Sum of weights over unordered edges."""
        return float(self.weights.sum()) / 2.0

    def edge_slot(self, u, v):
        """Slot index of directed edge (u, v), or -1 when absent."""
        row = self.neighbors_of(u)
        i = np.searchsorted(row, v)
        if i < row.shape[0] and row[i] == v:
            return int(self.offsets[u] + i)
        return -1

    def has_edge(self, u, v):
        return self.edge_slot(u, v) >= 0

    def edge_arrays(self):
        """(u, v, w) arrays over unordered edges with u < v."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        mask = src < self.neighbors
        return src[mask], self.neighbors[mask], self.weights[mask]

    def edges(self):
        eu, ev, ew = self.edge_arrays()
        for i in range(eu.shape[0]):
            yield int(eu[i]), int(ev[i]), float(ew[i])

    # -- invariants ----------------------------------------------------------

    def validate(self):
        if self.offsets.shape[0] != self.n + 1:
            raise GraphError("offsets length must be n+1")
        if self.offsets[0] != 0 or self.offsets[-1] != 2 * self.m:
            raise GraphError("offsets must span [0, 2m]")
        if np.any(np.diff(self.offsets) < 0):
            raise GraphError("offsets must be nondecreasing")
        if self.neighbors.shape[0] != 2 * self.m or self.weights.shape[0] != 2 * self.m:
            raise GraphError("neighbor/weight arrays must have length 2m")
        if self.m == 0:
            return self
        if self.neighbors.min() < 0 or self.neighbors.max() >= self.n:
            raise GraphError("neighbor id out of range")
        if self.weights.min() < 0:
            raise GraphError("weights must be nonnegative")
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        if np.any(src == self.neighbors):
            raise GraphError("self-loop present")
        for u in range(self.n):
            row = self.neighbors_of(u)
            if row.shape[0] > 1 and np.any(np.diff(row) <= 0):
                raise GraphError(f"adjacency row {u} not strictly increasing")
        fwd = np.lexsort((self.neighbors, src))
        bwd = np.lexsort((src, self.neighbors))
        if not (np.array_equal(src[fwd], self.neighbors[bwd])
                and np.array_equal(self.neighbors[fwd], src[bwd])
                and np.array_equal(self.weights[fwd], self.weights[bwd])):
            raise GraphError("adjacency is not symmetric with equal weights")
        return self


# ---------------------------------------------------------------------------
# clusterings
# ---------------------------------------------------------------------------

def canonical_labels(assignment):
    """Relabel to dense ids 0..k-1 ordered by minimum member vertex id."""
    assignment = np.asarray(assignment, dtype=np.int64)
    _, first, inverse = np.unique(assignment, return_index=True, return_inverse=True)
    rank = np.empty(first.shape[0], dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(first.shape[0])
    return rank[inverse]


@dataclass(frozen=True)
class Clustering:
    """Either a flat partition (dense cluster ids per vertex) or an
    overlapping family of vertex sets (SLPA, ground truth style)."""

    form: str
    assignment: np.ndarray = None
    clusters: tuple = None

    @classmethod
    def flat(cls, assignment, canonical=True):
        a = np.asarray(assignment, dtype=np.int64)
        if canonical:
            a = canonical_labels(a)
        return cls(form="flat", assignment=a)

    @classmethod
    def overlapping(cls, sets):
        out = []
        seen = set()
        for s in sets:
            fs = frozenset(int(x) for x in s)
            if not fs:
                raise GraphError("empty cluster in overlapping clustering")
            if fs in seen:
                raise GraphError("duplicate cluster in overlapping clustering")
            seen.add(fs)
            out.append(fs)
        return cls(form="overlapping", clusters=tuple(out))

    @property
    def is_flat(self):
        return self.form == "flat"

    @property
    def n(self):
        if not self.is_flat:
            raise GraphError("n is only defined for flat clusterings")
        return self.assignment.shape[0]

    @property
    def num_clusters(self):
        if self.is_flat:
            return int(self.assignment.max()) + 1 if self.assignment.size else 0
        return len(self.clusters)

    def to_sets(self):
        """Clusters as a list of vertex sets, indexed by cluster id."""
        if self.is_flat:
            order = np.argsort(self.assignment, kind="stable")
            counts = np.bincount(self.assignment, minlength=self.num_clusters)
            out = []
            pos = 0
            for c in counts:
                out.append(frozenset(order[pos:pos + c].tolist()))
                pos += c
            return out
        return list(self.clusters)

    def sizes(self):
        if self.is_flat:
            return np.bincount(self.assignment, minlength=self.num_clusters)
        return np.array([len(s) for s in self.clusters], dtype=np.int64)


# ---------------------------------------------------------------------------
# primitives
# ---------------------------------------------------------------------------

def connected_components(g, keep_edge=None, num_threads=1):
    """Flat clustering by connectivity over the edges passing keep_edge.

    keep_edge receives numpy arrays (u, v, w) over unordered edges and must
    return a boolean mask; None keeps every edge. Cluster ids are dense and
    ordered by minimum member vertex id.
    """
    eu, ev, ew = g.edge_arrays()
    if keep_edge is not None:
        mask = np.asarray(keep_edge(eu, ev, ew), dtype=bool)
        eu, ev = eu[mask], ev[mask]
    labels = components_from_edges(g.n, eu, ev, num_threads=num_threads)
    return Clustering.flat(labels, canonical=False)


def components_from_edges(n, eu, ev, num_threads=1):
    eu = np.ascontiguousarray(eu, dtype=np.int64)
    ev = np.ascontiguousarray(ev, dtype=np.int64)
    if num_threads > 1 and eu.shape[0] > 100_000:
        K.set_threads(num_threads)
        labels, _ = K.components_parallel(n, eu, ev)
    else:
        labels, _ = K.components_seq(n, eu, ev)
    return labels


def core_numbers(g):
    """Coreness of each vertex via bucket-based peeling."""
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    return K.core_numbers_kernel(g.offsets, g.neighbors)

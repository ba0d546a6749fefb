"""Independent reference implementations used to freeze expected values.

Everything here is deliberately naive (BFS, triple enumeration, O(n^2) pair
counting, exhaustive partition search) and shares no code with the package
paths it checks.
"""

import itertools
import math
from collections import Counter, deque

import numpy as np


def bfs_components(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    label = [-1] * n
    nxt = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        label[s] = nxt
        q = deque([s])
        while q:
            u = q.popleft()
            for v in adj[u]:
                if label[v] < 0:
                    label[v] = nxt
                    q.append(v)
        nxt += 1
    return label


def brute_core_numbers(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    core = [0] * n
    alive = set(range(n))
    deg = {u: len(adj[u]) for u in alive}
    k = 0
    while alive:
        while True:
            peel = [u for u in alive if deg[u] < k + 1]
            if not peel:
                break
            for u in peel:
                core[u] = k
                alive.discard(u)
                for v in adj[u]:
                    if v in alive:
                        deg[v] -= 1
        k += 1
    return core


def scan_reference(n, edges, eps, mu):
    """Literal SCAN: similarity graph H over cores, BFS components, non-core
    attachment to the minimum-id similar core, everything else singleton."""
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)

    def sigma(u, v):
        cu = adj[u] | {u}
        cv = adj[v] | {v}
        return len(cu & cv) / math.sqrt(len(cu) * len(cv))

    similar = {}
    for u, v in edges:
        similar[(u, v)] = similar[(v, u)] = sigma(u, v) >= eps
    cores = [u for u in range(n)
             if sum(1 for v in adj[u] if similar[(u, v)]) >= mu]
    core_set = set(cores)
    hadj = {u: [] for u in cores}
    for u, v in edges:
        if u in core_set and v in core_set and similar[(u, v)]:
            hadj[u].append(v)
            hadj[v].append(u)
    comp = {}
    nxt = 0
    for s in cores:
        if s in comp:
            continue
        comp[s] = nxt
        q = deque([s])
        while q:
            u = q.popleft()
            for v in hadj[u]:
                if v not in comp:
                    comp[v] = nxt
                    q.append(v)
        nxt += 1
    label = [-1] * n
    for u in cores:
        label[u] = comp[u]
    for u in range(n):
        if label[u] >= 0:
            continue
        cands = sorted(v for v in adj[u] if v in core_set and similar[(u, v)])
        if cands:
            label[u] = comp[cands[0]]
    for u in range(n):
        if label[u] < 0:
            label[u] = nxt
            nxt += 1
    return canonical(label)


def edge_triangle_counts(n, edges):
    """t(u, v) per undirected edge by enumerating all vertex triples."""
    eset = {frozenset(e) for e in edges}
    t = Counter()
    for a, b, c in itertools.combinations(range(n), 3):
        if (frozenset((a, b)) in eset and frozenset((a, c)) in eset
                and frozenset((b, c)) in eset):
            t[frozenset((a, b))] += 1
            t[frozenset((a, c))] += 1
            t[frozenset((b, c))] += 1
    return {e: t[e] for e in eset}


def triangle_and_wedge_counts(n, edges, labels=None):
    """(triangles, wedges) fully inside each cluster (one cluster when
    labels is None)."""
    if labels is None:
        labels = [0] * n
    eset = {frozenset(e) for e in edges}
    k = max(labels) + 1 if n else 0
    tri = [0] * k
    wedges = [0] * k
    for a, b, c in itertools.combinations(range(n), 3):
        if not (labels[a] == labels[b] == labels[c]):
            continue
        cnt = sum(1 for e in (frozenset((a, b)), frozenset((a, c)), frozenset((b, c)))
                  if e in eset)
        if cnt == 3:
            tri[labels[a]] += 1
        # wedges: count paths of length two among the triple
        for mid, x, y in ((a, b, c), (b, a, c), (c, a, b)):
            if frozenset((mid, x)) in eset and frozenset((mid, y)) in eset:
                wedges[labels[a]] += 1
    return tri, wedges


def pair_counting_ari(a, b):
    n = len(a)
    s00 = s01 = s10 = s11 = 0
    for i, j in itertools.combinations(range(n), 2):
        x = a[i] == a[j]
        y = b[i] == b[j]
        if x and y:
            s11 += 1
        elif x:
            s10 += 1
        elif y:
            s01 += 1
        else:
            s00 += 1
    total = s00 + s01 + s10 + s11
    expected = (s11 + s10) * (s11 + s01) / total
    maximum = ((s11 + s10) + (s11 + s01)) / 2.0
    if maximum == expected:
        return 1.0
    return (s11 - expected) / (maximum - expected)


def joint_nmi(a, b):
    n = len(a)
    pj = Counter(zip(a, b))
    pa = Counter(a)
    pb = Counter(b)
    mi = 0.0
    for (x, y), c in pj.items():
        mi += (c / n) * math.log((c / n) / ((pa[x] / n) * (pb[y] / n)))
    ha = -sum((c / n) * math.log(c / n) for c in pa.values())
    hb = -sum((c / n) * math.log(c / n) for c in pb.values())
    if ha == 0.0 and hb == 0.0:
        return 1.0
    return mi / ((ha + hb) / 2.0)


def dominance_frontier(points):
    """O(n^2) max-max Pareto filter over deduplicated (x, y) pairs."""
    uniq = {}
    for x, y, rid in points:
        if (x, y) not in uniq or rid < uniq[(x, y)]:
            uniq[(x, y)] = rid
    pts = [(x, y, rid) for (x, y), rid in uniq.items()]
    out = []
    for x, y, rid in pts:
        dominated = any((x2 >= x and y2 >= y) and (x2, y2) != (x, y)
                        for x2, y2, _ in pts)
        if not dominated:
            out.append((x, y, rid))
    return sorted(out)


def auc_grid(points, lo=0.5, hi=1.0, steps=200_000):
    """Riemann estimate of 2 * integral of max{recall : precision >= p}."""
    area = 0.0
    dp = (hi - lo) / steps
    for i in range(steps):
        p = lo + (i + 0.5) * dp
        r = max((y for x, y, *_ in points if x >= p), default=0.0)
        area += r * dp
    return 2.0 * area


def exact_hac(n, edges, weight_threshold=0.0):
    """Sequential exact average-linkage HAC on a weighted graph.

    Merges the maximum-linkage pair one at a time (ties: ascending
    (min node id, max node id)); linkage = total inter-cluster edge weight /
    product of cluster sizes. Returns the merge list in (left, right,
    similarity, new node) form with node ids matching the convention
    leaves 0..n-1, internal n+i.
    """
    W = {}
    for u, v, w in edges:
        W[frozenset((u, v))] = W.get(frozenset((u, v)), 0.0) + w
    active = {u: (u, 1) for u in range(n)}  # cluster key -> (node id, size)
    merges = []
    nxt = n
    while True:
        best = None
        for key, wsum in W.items():
            a, b = sorted(key)
            na, sa = active[a]
            nb, sb = active[b]
            link = wsum / (sa * sb)
            pair = (min(na, nb), max(na, nb))
            if best is None or link > best[0] or (link == best[0] and pair < best[1]):
                best = (link, pair, (a, b))
        if best is None or best[0] < weight_threshold:
            break
        link, (nlo, nhi), (a, b) = best
        na, sa = active[a]
        nb, sb = active[b]
        merges.append((nlo, nhi, link, nxt))
        # contract b into a
        del active[b]
        active[a] = (nxt, sa + sb)
        nxt += 1
        newW = {}
        for key, wsum in W.items():
            x, y = sorted(key)
            x2 = a if x == b else x
            y2 = a if y == b else y
            if x2 == y2:
                continue
            k2 = frozenset((x2, y2))
            newW[k2] = newW.get(k2, 0.0) + wsum
        W = newW
    return merges


def enumerate_partitions(n):
    """All set partitions of range(n) as restricted-growth label tuples."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(i, maxl):
        if i == n:
            yield tuple(labels)
            return
        for l in range(maxl + 2):
            labels[i] = l
            yield from rec(i + 1, max(maxl, l))

    yield from rec(1, 0)


def lambdacc_scores(n, edges, partitions, lam, kvert=None):
    """Objective (unordered-pair convention) for many partitions at once."""
    P = np.array(partitions, dtype=np.int64)
    if kvert is None:
        kvert = np.ones(n)
    kvert = np.asarray(kvert, dtype=np.float64)
    intra = np.zeros(P.shape[0])
    for u, v, w in edges:
        intra += w * (P[:, u] == P[:, v])
    pairs = np.zeros(P.shape[0])
    for row in range(P.shape[0]):
        ks = np.bincount(P[row], weights=kvert)
        ksq = np.bincount(P[row], weights=kvert * kvert)
        pairs[row] = ((ks * ks).sum() - ksq.sum()) / 2.0
    return intra - lam * pairs


def modularity_of(n, edges, labels, gamma=1.0):
    w_total = sum(w for _, _, w in edges)
    k = max(labels) + 1
    e = [0.0] * k
    d = [0.0] * k
    for u, v, w in edges:
        if labels[u] == labels[v]:
            e[labels[u]] += w
        d[labels[u]] += w
        d[labels[v]] += w
    return sum(e[c] / w_total - gamma * (d[c] / (2 * w_total)) ** 2 for c in range(k))


def canonical(labels):
    seen = {}
    out = []
    for l in labels:
        if l not in seen:
            seen[l] = len(seen)
        out.append(seen[l])
    return out


def random_graph(rng, n, p, weight_kind=None):
    """Erdos-Renyi edges as (u, v, w) triples; weight kinds: None (unit),
    'int' (1..16, exact in float), 'float' (uniform (0, 1])."""
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                if weight_kind == "int":
                    w = float(rng.integers(1, 17))
                elif weight_kind == "float":
                    w = float(rng.random()) + 1e-3
                else:
                    w = 1.0
                edges.append((u, v, w))
    return edges


def graph_from(edges, n, weighted=True):
    from parclust.graph import Graph
    if edges:
        u, v, w = zip(*edges)
    else:
        u, v, w = (), (), ()
    return Graph.from_edge_arrays(np.array(u, dtype=np.int64),
                                  np.array(v, dtype=np.int64),
                                  np.array(w, dtype=np.float64),
                                  n=n, weighted=weighted)


def bfs_distances(n, edges, src, allowed=None):
    adj = [[] for _ in range(n)]
    for e in edges:
        u, v = e[0], e[1]
        adj[u].append(v)
        adj[v].append(u)
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v in dist:
                continue
            if allowed is not None and v not in allowed:
                continue
            dist[v] = dist[u] + 1
            q.append(v)
    return dist

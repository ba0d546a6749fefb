"""Numba-compiled kernels shared by the clusterers and metrics.

Everything in here works on plain CSR arrays (offsets/neighbors/weights) so
the kernels stay independent of the Graph wrapper. Parallel kernels take an
explicit chunk table instead of relying on numba's scheduler so that each
chunk owns one scratch row (race-free gathers) and so results stay
deterministic for a fixed chunk table wherever the algorithm itself is
deterministic.
"""

import os

# Allow thread counts beyond the detected core count (the benchmark interface
# accepts an explicit thread parameter). Must happen before numba is imported.
os.environ.setdefault("NUMBA_NUM_THREADS", str(max(os.cpu_count() or 1, 16)))

import numba
import numpy as np
from numba import njit, prange

GAIN_EPS = 1e-12


def effective_threads(requested):
    """Clamp a requested thread count to what the numba runtime allows."""
    cap = numba.config.NUMBA_NUM_THREADS
    return max(1, min(int(requested), cap))


def set_threads(requested):
    t = effective_threads(requested)
    numba.set_num_threads(t)
    return t


def make_chunks(n, nchunk):
    """Evenly split range(n) into nchunk half-open intervals."""
    nchunk = max(1, min(nchunk, max(1, n)))
    bounds = np.linspace(0, n, nchunk + 1).astype(np.int64)
    return bounds


def balanced_chunks(work, nchunk):
    """Split range(len(work)) into nchunk intervals of roughly equal total work."""
    n = work.shape[0]
    nchunk = max(1, min(nchunk, max(1, n)))
    cw = np.concatenate(([0], np.cumsum(work, dtype=np.int64)))
    total = cw[-1]
    targets = (np.arange(1, nchunk, dtype=np.int64) * total) // nchunk
    cuts = np.searchsorted(cw, targets, side="left")
    bounds = np.concatenate(([0], cuts, [n])).astype(np.int64)
    return np.maximum.accumulate(bounds)


# ---------------------------------------------------------------------------
# connected components
# ---------------------------------------------------------------------------

@njit(cache=True)
def _dsu_find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def components_seq(n, eu, ev):
    """Dense component labels via union-find; label order = min member id."""
    parent = np.arange(n)
    for i in range(eu.shape[0]):
        a = _dsu_find(parent, eu[i])
        b = _dsu_find(parent, ev[i])
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
    labels = np.empty(n, np.int64)
    next_id = 0
    tmp = np.full(n, -1, np.int64)
    for u in range(n):
        r = _dsu_find(parent, u)
        if tmp[r] < 0:
            tmp[r] = next_id
            next_id += 1
        labels[u] = tmp[r]
    return labels, next_id


@njit(parallel=True, cache=True)
def _cc_hook(eu, ev, parent):
    changed = 0
    for i in prange(eu.shape[0]):
        a = parent[eu[i]]
        b = parent[ev[i]]
        # monotone min-writes; races only delay convergence
        if a < b:
            if a < parent[b]:
                parent[b] = a
                changed += 1
        elif b < a:
            if b < parent[a]:
                parent[a] = b
                changed += 1
    return changed


@njit(parallel=True, cache=True)
def _cc_compress(parent):
    n = parent.shape[0]
    for u in prange(n):
        p = parent[u]
        while parent[p] != p:
            p = parent[p]
        parent[u] = p


def components_parallel(n, eu, ev):
    """FastSV-style hook-and-compress; yields the same labels as components_seq."""
    parent = np.arange(n, dtype=np.int64)
    while True:
        changed = _cc_hook(eu, ev, parent)
        _cc_compress(parent)
        if changed == 0:
            break
    # roots are component minima, so dense relabel by first occurrence
    roots = parent
    labels = np.empty(n, dtype=np.int64)
    tmp = np.full(n, -1, dtype=np.int64)
    next_id = 0
    for u in range(n):
        r = roots[u]
        if tmp[r] < 0:
            tmp[r] = next_id
            next_id += 1
        labels[u] = tmp[r]
    return labels, next_id


# ---------------------------------------------------------------------------
# k-core peeling (Matula-Beck bucket algorithm)
# ---------------------------------------------------------------------------

@njit(cache=True)
def core_numbers_kernel(offsets, nbrs):
    n = offsets.shape[0] - 1
    deg = np.empty(n, np.int64)
    md = 0
    for u in range(n):
        d = offsets[u + 1] - offsets[u]
        deg[u] = d
        if d > md:
            md = d
    bins = np.zeros(md + 2, np.int64)
    for u in range(n):
        bins[deg[u]] += 1
    start = 0
    for d in range(md + 1):
        c = bins[d]
        bins[d] = start
        start += c
    pos = np.empty(n, np.int64)
    vert = np.empty(n, np.int64)
    for u in range(n):
        pos[u] = bins[deg[u]]
        vert[pos[u]] = u
        bins[deg[u]] += 1
    for d in range(md, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0
    core = deg.copy()
    for i in range(n):
        u = vert[i]
        for j in range(offsets[u], offsets[u + 1]):
            v = nbrs[j]
            if core[v] > core[u]:
                dv = core[v]
                pv = pos[v]
                pw = bins[dv]
                w = vert[pw]
                if v != w:
                    vert[pv] = w
                    vert[pw] = v
                    pos[v] = pw
                    pos[w] = pv
                bins[dv] += 1
                core[v] -= 1
    return core


# ---------------------------------------------------------------------------
# sorted-adjacency intersections (triangles, SCAN similarity)
# ---------------------------------------------------------------------------

@njit(parallel=True, cache=True)
def common_neighbor_counts(offsets, nbrs, chunks):
    """For every directed slot (u -> v), |N(u) & N(v)| via sorted merge."""
    out = np.zeros(nbrs.shape[0], np.int64)
    nchunk = chunks.shape[0] - 1
    for ch in prange(nchunk):
        for u in range(chunks[ch], chunks[ch + 1]):
            for j in range(offsets[u], offsets[u + 1]):
                v = nbrs[j]
                a = offsets[u]
                b = offsets[v]
                ea = offsets[u + 1]
                eb = offsets[v + 1]
                c = 0
                while a < ea and b < eb:
                    x = nbrs[a]
                    y = nbrs[b]
                    if x == y:
                        c += 1
                        a += 1
                        b += 1
                    elif x < y:
                        a += 1
                    else:
                        b += 1
                out[j] = c
    return out


@njit(parallel=True, cache=True)
def cluster_triangle_counts(offsets, nbrs, asg, k, chunks):
    """Triangles with all three vertices in the same cluster, per cluster."""
    nchunk = chunks.shape[0] - 1
    acc = np.zeros((nchunk, k), np.int64)
    for ch in prange(nchunk):
        for u in range(chunks[ch], chunks[ch + 1]):
            cu = asg[u]
            for j in range(offsets[u], offsets[u + 1]):
                v = nbrs[j]
                if v <= u or asg[v] != cu:
                    continue
                a = offsets[u]
                b = offsets[v]
                ea = offsets[u + 1]
                eb = offsets[v + 1]
                while a < ea and b < eb:
                    x = nbrs[a]
                    y = nbrs[b]
                    if x == y:
                        if x > v and asg[x] == cu:
                            acc[ch, cu] += 1
                        a += 1
                        b += 1
                    elif x < y:
                        a += 1
                    else:
                        b += 1
    return acc.sum(axis=0)


@njit(parallel=True, cache=True)
def intra_degree(offsets, nbrs, asg, chunks):
    n = offsets.shape[0] - 1
    out = np.zeros(n, np.int64)
    nchunk = chunks.shape[0] - 1
    for ch in prange(nchunk):
        for u in range(chunks[ch], chunks[ch + 1]):
            cu = asg[u]
            d = 0
            for j in range(offsets[u], offsets[u + 1]):
                if asg[nbrs[j]] == cu:
                    d += 1
            out[u] = d
    return out


@njit(parallel=True, cache=True)
def intra_edge_weight(offsets, nbrs, wts, asg, k, chunks):
    """Per-cluster totals of intra-cluster edge weight and edge count (unordered)."""
    nchunk = chunks.shape[0] - 1
    wacc = np.zeros((nchunk, k), np.float64)
    cacc = np.zeros((nchunk, k), np.int64)
    for ch in prange(nchunk):
        for u in range(chunks[ch], chunks[ch + 1]):
            cu = asg[u]
            for j in range(offsets[u], offsets[u + 1]):
                v = nbrs[j]
                if v > u and asg[v] == cu:
                    wacc[ch, cu] += wts[j]
                    cacc[ch, cu] += 1
    return wacc.sum(axis=0), cacc.sum(axis=0)


# ---------------------------------------------------------------------------
# LambdaCC local search (Louvain-style move sweeps)
# ---------------------------------------------------------------------------

@njit(cache=True)
def lambdacc_sweep_seq(offsets, nbrs, wts, kvert, lam, asg, ck, order,
                       wsum, stamp, cand, stamp_base):
    """One sequential move sweep; cluster ids live in [0, 2n) where n+u is
    the private detach target of vertex u. Returns the number of moves."""
    n = offsets.shape[0] - 1
    moves = 0
    for i in range(n):
        u = order[i]
        mk = stamp_base + u + 1
        ndist = 0
        for j in range(offsets[u], offsets[u + 1]):
            c = asg[nbrs[j]]
            if stamp[c] != mk:
                stamp[c] = mk
                wsum[c] = 0.0
                cand[ndist] = c
                ndist += 1
            wsum[c] += wts[j]
        a = asg[u]
        ku = kvert[u]
        w_a = wsum[a] if stamp[a] == mk else 0.0
        remove = -w_a + lam * ku * (ck[a] - ku)
        best = a
        best_gain = 0.0
        for t in range(ndist):
            c = cand[t]
            if c == a:
                continue
            g = remove + wsum[c] - lam * ku * ck[c]
            if g > best_gain + GAIN_EPS or (g > best_gain - GAIN_EPS and c < best):
                best = c
                best_gain = g
        home = n + u
        if a != home:
            g = remove
            if g > best_gain + GAIN_EPS or (g > best_gain - GAIN_EPS and home < best):
                best = home
                best_gain = g
        if best != a and best_gain > GAIN_EPS:
            asg[u] = best
            ck[a] -= ku
            ck[best] += ku
            moves += 1
    return moves


@njit(parallel=True, cache=True)
def lambdacc_sweep_par(offsets, nbrs, wts, kvert, lam, asg, ck, chunks,
                       wsum, stamp, cand, stamp_base):
    """Asynchronous lock-free sweep: neighbor assignments and cluster vertex
    weights may be read stale; the caller recomputes ck before each sweep."""
    n = offsets.shape[0] - 1
    nchunk = chunks.shape[0] - 1
    moved = np.zeros(nchunk, np.int64)
    for ch in prange(nchunk):
        for u in range(chunks[ch], chunks[ch + 1]):
            mk = stamp_base + u + 1
            ndist = 0
            for j in range(offsets[u], offsets[u + 1]):
                c = asg[nbrs[j]]
                if stamp[ch, c] != mk:
                    stamp[ch, c] = mk
                    wsum[ch, c] = 0.0
                    cand[ch, ndist] = c
                    ndist += 1
                wsum[ch, c] += wts[j]
            a = asg[u]
            ku = kvert[u]
            w_a = wsum[ch, a] if stamp[ch, a] == mk else 0.0
            remove = -w_a + lam * ku * (ck[a] - ku)
            best = a
            best_gain = 0.0
            for t in range(ndist):
                c = cand[ch, t]
                if c == a:
                    continue
                g = remove + wsum[ch, c] - lam * ku * ck[c]
                if g > best_gain + GAIN_EPS or (g > best_gain - GAIN_EPS and c < best):
                    best = c
                    best_gain = g
            home = n + u
            if a != home:
                g = remove
                if g > best_gain + GAIN_EPS or (g > best_gain - GAIN_EPS and home < best):
                    best = home
                    best_gain = g
            if best != a and best_gain > GAIN_EPS:
                asg[u] = best
                ck[a] -= ku
                ck[best] += ku
                moved[ch] += 1
    return moved.sum()


@njit(parallel=True, cache=True)
def cluster_weight_sums(asg, kvert, idspace, chunks):
    nchunk = chunks.shape[0] - 1
    acc = np.zeros((nchunk, idspace), np.float64)
    for ch in prange(nchunk):
        for u in range(chunks[ch], chunks[ch + 1]):
            acc[ch, asg[u]] += kvert[u]
    return acc.sum(axis=0)


# ---------------------------------------------------------------------------
# graph contraction (cluster graph with summed inter-cluster weights)
# ---------------------------------------------------------------------------

@njit(cache=True)
def members_by_cluster(asg, k):
    n = asg.shape[0]
    counts = np.zeros(k + 1, np.int64)
    for u in range(n):
        counts[asg[u] + 1] += 1
    for i in range(k):
        counts[i + 1] += counts[i]
    members = np.empty(n, np.int64)
    pos = counts[:-1].copy()
    for u in range(n):
        members[pos[asg[u]]] = u
        pos[asg[u]] += 1
    return counts, members


@njit(parallel=True, cache=True)
def _contract_count(offsets, nbrs, asg, moffsets, members, chunks, stamp, base):
    nchunk = chunks.shape[0] - 1
    k = moffsets.shape[0] - 1
    degs = np.zeros(k, np.int64)
    for ch in prange(nchunk):
        for c in range(chunks[ch], chunks[ch + 1]):
            mk = base + c + 1
            d = 0
            for mi in range(moffsets[c], moffsets[c + 1]):
                u = members[mi]
                for j in range(offsets[u], offsets[u + 1]):
                    cc = asg[nbrs[j]]
                    if cc == c:
                        continue
                    if stamp[ch, cc] != mk:
                        stamp[ch, cc] = mk
                        d += 1
            degs[c] = d
    return degs


@njit(parallel=True, cache=True)
def _contract_fill(offsets, nbrs, wts, asg, moffsets, members, chunks,
                   stamp, wsum, slot, base, new_offsets, new_nbrs, new_wts):
    nchunk = chunks.shape[0] - 1
    for ch in prange(nchunk):
        for c in range(chunks[ch], chunks[ch + 1]):
            mk = base + c + 1
            ptr = new_offsets[c]
            for mi in range(moffsets[c], moffsets[c + 1]):
                u = members[mi]
                for j in range(offsets[u], offsets[u + 1]):
                    cc = asg[nbrs[j]]
                    if cc == c:
                        continue
                    if stamp[ch, cc] != mk:
                        stamp[ch, cc] = mk
                        wsum[ch, cc] = 0.0
                        new_nbrs[ptr] = cc
                        slot[ch, cc] = ptr
                        ptr += 1
                    wsum[ch, cc] += wts[j]
            for t in range(new_offsets[c], new_offsets[c + 1]):
                new_wts[t] = wsum[ch, new_nbrs[t]]


def contract_graph(offsets, nbrs, wts, asg, k, nchunk, scratch=None):
    """Build the cluster graph: vertices = clusters, edge weight = summed
    original weight between clusters, self-loops dropped. Rows keep
    first-encounter order (deterministic, not sorted); none of the consumers
    of contracted graphs need sorted adjacency."""
    moffsets, members = members_by_cluster(asg, k)
    # chunk by summed member degree: member counts alone leave hub-heavy
    # clusters on one thread
    deg = offsets[1:] - offsets[:-1]
    work = np.bincount(asg, weights=deg, minlength=k).astype(np.int64) + 1
    chunks = balanced_chunks(work, nchunk)
    nchunk = chunks.shape[0] - 1
    stamp = np.zeros((nchunk, k), np.int64)
    degs = _contract_count(offsets, nbrs, asg, moffsets, members, chunks, stamp, 0)
    new_offsets = np.zeros(k + 1, np.int64)
    np.cumsum(degs, out=new_offsets[1:])
    nnz = int(new_offsets[-1])
    new_nbrs = np.empty(nnz, np.int64)
    new_wts = np.empty(nnz, np.float64)
    wsum = np.empty((nchunk, k), np.float64)
    slot = np.empty((nchunk, k), np.int64)
    _contract_fill(offsets, nbrs, wts, asg, moffsets, members, chunks,
                   stamp, wsum, slot, k + 1, new_offsets, new_nbrs, new_wts)
    return new_offsets, new_nbrs, new_wts


@njit(cache=True)
def dense_first_occurrence(labels, space):
    """Relabel to dense ids in first-occurrence order (= ordered by minimum
    member); labels must lie in [0, space)."""
    n = labels.shape[0]
    tmp = np.full(space, -1, np.int64)
    out = np.empty(n, np.int64)
    nxt = 0
    for i in range(n):
        l = labels[i]
        if tmp[l] < 0:
            tmp[l] = nxt
            nxt += 1
        out[i] = tmp[l]
    return out, nxt


@njit(cache=True)
def pair_merge_relabel(partner):
    """Dense relabel where partner[c] >= 0 marks matched pairs; both members
    of a pair share the id claimed at the lower index."""
    k = partner.shape[0]
    new_id = np.full(k, -1, np.int64)
    nxt = 0
    for c in range(k):
        if new_id[c] >= 0:
            continue
        new_id[c] = nxt
        p = partner[c]
        if p >= 0:
            new_id[p] = nxt
        nxt += 1
    return new_id, nxt


# ---------------------------------------------------------------------------
# affinity / ParHAC primitives on a cluster graph with summed weights
# ---------------------------------------------------------------------------

@njit(parallel=True, cache=True)
def best_linkage_edges(offsets, nbrs, wts, sizes, tau, chunks):
    """Per cluster, the neighbor of maximum average linkage >= tau (ties:
    lowest neighbor id); -1 when none qualifies. Returns (choice, linkage)."""
    k = offsets.shape[0] - 1
    sel = np.full(k, -1, np.int64)
    selw = np.full(k, -1.0, np.float64)
    nchunk = chunks.shape[0] - 1
    for ch in prange(nchunk):
        for c in range(chunks[ch], chunks[ch + 1]):
            su = float(sizes[c])
            best = -1
            bw = -1.0
            for j in range(offsets[c], offsets[c + 1]):
                d = nbrs[j]
                link = wts[j] / (su * sizes[d])
                if link >= tau and (link > bw or (link == bw and d < best)):
                    bw = link
                    best = d
            sel[c] = best
            selw[c] = bw
    return sel, selw


@njit(parallel=True, cache=True)
def max_linkage(offsets, nbrs, wts, sizes, chunks):
    nchunk = chunks.shape[0] - 1
    best = np.full(nchunk, -1.0, np.float64)
    for ch in prange(nchunk):
        m = -1.0
        for c in range(chunks[ch], chunks[ch + 1]):
            su = float(sizes[c])
            for j in range(offsets[c], offsets[c + 1]):
                link = wts[j] / (su * sizes[nbrs[j]])
                if link > m:
                    m = link
        best[ch] = m
    return best.max()


@njit(parallel=True, cache=True)
def _candidate_counts(offsets, nbrs, wts, sizes, lo, chunks):
    k = offsets.shape[0] - 1
    cnt = np.zeros(k, np.int64)
    nchunk = chunks.shape[0] - 1
    for ch in prange(nchunk):
        for c in range(chunks[ch], chunks[ch + 1]):
            su = float(sizes[c])
            t = 0
            for j in range(offsets[c], offsets[c + 1]):
                d = nbrs[j]
                if d > c and wts[j] / (su * sizes[d]) >= lo:
                    t += 1
            cnt[c] = t
    return cnt


@njit(parallel=True, cache=True)
def _candidate_fill(offsets, nbrs, wts, sizes, lo, starts, chunks, cu, cv, cl):
    nchunk = chunks.shape[0] - 1
    for ch in prange(nchunk):
        for c in range(chunks[ch], chunks[ch + 1]):
            ptr = starts[c]
            su = float(sizes[c])
            for j in range(offsets[c], offsets[c + 1]):
                d = nbrs[j]
                if d > c:
                    link = wts[j] / (su * sizes[d])
                    if link >= lo:
                        cu[ptr] = c
                        cv[ptr] = d
                        cl[ptr] = link
                        ptr += 1


def linkage_candidates(offsets, nbrs, wts, sizes, lo, chunks):
    """All unordered cluster pairs with average linkage >= lo."""
    cnt = _candidate_counts(offsets, nbrs, wts, sizes, lo, chunks)
    starts = np.zeros(cnt.shape[0] + 1, np.int64)
    np.cumsum(cnt, out=starts[1:])
    total = int(starts[-1])
    cu = np.empty(total, np.int64)
    cv = np.empty(total, np.int64)
    cl = np.empty(total, np.float64)
    _candidate_fill(offsets, nbrs, wts, sizes, lo, starts, chunks, cu, cv, cl)
    return cu, cv, cl


# ---------------------------------------------------------------------------
# label propagation
# ---------------------------------------------------------------------------

@njit(cache=True)
def lp_sweep_seq(offsets, nbrs, labels, order, cnt, stamp, cand, base):
    moves = 0
    for i in range(order.shape[0]):
        u = order[i]
        mk = base + u + 1
        ndist = 0
        bestc = 0
        best = -1
        for j in range(offsets[u], offsets[u + 1]):
            l = labels[nbrs[j]]
            if stamp[l] != mk:
                stamp[l] = mk
                cnt[l] = 0
                cand[ndist] = l
                ndist += 1
            cnt[l] += 1
            c = cnt[l]
            if c > bestc or (c == bestc and l < best):
                bestc = c
                best = l
        if ndist > 0 and best != labels[u]:
            labels[u] = best
            moves += 1
    return moves


@njit(parallel=True, cache=True)
def lp_sweep_par(offsets, nbrs, labels, chunks, cnt, stamp, cand, base):
    nchunk = chunks.shape[0] - 1
    moved = np.zeros(nchunk, np.int64)
    for ch in prange(nchunk):
        for u in range(chunks[ch], chunks[ch + 1]):
            mk = base + u + 1
            ndist = 0
            bestc = 0
            best = -1
            for j in range(offsets[u], offsets[u + 1]):
                l = labels[nbrs[j]]
                if stamp[ch, l] != mk:
                    stamp[ch, l] = mk
                    cnt[ch, l] = 0
                    cand[ch, ndist] = l
                    ndist += 1
                cnt[ch, l] += 1
                c = cnt[ch, l]
                if c > bestc or (c == bestc and l < best):
                    bestc = c
                    best = l
            if ndist > 0 and best != labels[u]:
                labels[u] = best
                moved[ch] += 1
    return moved.sum()


# ---------------------------------------------------------------------------
# SLPA (speaker-listener label propagation with per-vertex memories)
# ---------------------------------------------------------------------------

@njit(inline="always")
def _splitmix64(state):
    state = (state + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = state
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True)
def slpa_rounds_seq(offsets, nbrs, mem, mlen, rounds, seed, cnt, stamp, cand):
    """Sequential listener loop: every vertex pulls one frequency-proportional
    sample from each neighbor's live memory and appends the received mode."""
    n = offsets.shape[0] - 1
    state = np.uint64(seed * 2654435761 + 1)
    base = 0
    for r in range(rounds):
        for u in range(n):
            deg = offsets[u + 1] - offsets[u]
            if deg == 0:
                continue
            mk = base + u + 1
            ndist = 0
            bestc = 0
            best = -1
            for j in range(offsets[u], offsets[u + 1]):
                v = nbrs[j]
                state, z = _splitmix64(state)
                idx = np.int64(z % np.uint64(mlen[v]))
                l = mem[v, idx]
                if stamp[l] != mk:
                    stamp[l] = mk
                    cnt[l] = 0
                    cand[ndist] = l
                    ndist += 1
                cnt[l] += 1
                c = cnt[l]
                if c > bestc or (c == bestc and l < best):
                    bestc = c
                    best = l
            mem[u, mlen[u]] = best
            mlen[u] += 1
        base += n


@njit(parallel=True, cache=True)
def slpa_rounds_par(offsets, nbrs, mem, mlen, rounds, seed, chunks, cnt, stamp, cand):
    """Asynchronous variant: listeners in different chunks read neighbor
    memories that may be mid-update; memory rows are pre-filled with the
    owner's id so racy reads still return a valid label."""
    n = offsets.shape[0] - 1
    nchunk = chunks.shape[0] - 1
    for r in range(rounds):
        base = r * n
        for ch in prange(nchunk):
            state = np.uint64((seed + 77 * r) * 2654435761 + 13 * ch + 1)
            for u in range(chunks[ch], chunks[ch + 1]):
                deg = offsets[u + 1] - offsets[u]
                if deg == 0:
                    continue
                mk = base + u + 1
                ndist = 0
                bestc = 0
                best = -1
                for j in range(offsets[u], offsets[u + 1]):
                    v = nbrs[j]
                    state, z = _splitmix64(state)
                    ml = mlen[v]
                    idx = np.int64(z % np.uint64(ml))
                    l = mem[v, idx]
                    if stamp[ch, l] != mk:
                        stamp[ch, l] = mk
                        cnt[ch, l] = 0
                        cand[ch, ndist] = l
                        ndist += 1
                    cnt[ch, l] += 1
                    c = cnt[ch, l]
                    if c > bestc or (c == bestc and l < best):
                        bestc = c
                        best = l
                mem[u, mlen[u]] = best
                mlen[u] += 1


# ---------------------------------------------------------------------------
# low-diameter decomposition (staggered multi-source Dijkstra, unit edges)
# ---------------------------------------------------------------------------

@njit(cache=True)
def ldd_assign(offsets, nbrs, start):
    """Assign each vertex to the center minimizing start[c] + dist(c, v)
    (ties: lower center id). Every vertex is a potential center."""
    n = offsets.shape[0] - 1
    m2 = nbrs.shape[0]
    cap = m2 + n + 1
    ha = np.empty(cap, np.float64)
    hc = np.empty(cap, np.int64)
    hv = np.empty(cap, np.int64)
    size = 0
    best_a = np.full(n, np.inf, np.float64)
    best_c = np.full(n, -1, np.int64)
    assigned = np.zeros(n, np.uint8)
    center = np.full(n, -1, np.int64)

    for u in range(n):
        # push (start[u], u, u)
        i = size
        size += 1
        ha[i] = start[u]
        hc[i] = u
        hv[i] = u
        while i > 0:
            p = (i - 1) >> 1
            if ha[i] < ha[p] or (ha[i] == ha[p] and hc[i] < hc[p]):
                ha[i], ha[p] = ha[p], ha[i]
                hc[i], hc[p] = hc[p], hc[i]
                hv[i], hv[p] = hv[p], hv[i]
                i = p
            else:
                break
        best_a[u] = start[u]
        best_c[u] = u

    while size > 0:
        a0 = ha[0]
        c0 = hc[0]
        v0 = hv[0]
        size -= 1
        ha[0] = ha[size]
        hc[0] = hc[size]
        hv[0] = hv[size]
        i = 0
        while True:
            l = 2 * i + 1
            r = l + 1
            s = i
            if l < size and (ha[l] < ha[s] or (ha[l] == ha[s] and hc[l] < hc[s])):
                s = l
            if r < size and (ha[r] < ha[s] or (ha[r] == ha[s] and hc[r] < hc[s])):
                s = r
            if s == i:
                break
            ha[i], ha[s] = ha[s], ha[i]
            hc[i], hc[s] = hc[s], hc[i]
            hv[i], hv[s] = hv[s], hv[i]
            i = s
        if assigned[v0]:
            continue
        assigned[v0] = 1
        center[v0] = c0
        na = a0 + 1.0
        for j in range(offsets[v0], offsets[v0 + 1]):
            w = nbrs[j]
            if assigned[w]:
                continue
            if na < best_a[w] or (na == best_a[w] and c0 < best_c[w]):
                best_a[w] = na
                best_c[w] = c0
                i = size
                size += 1
                ha[i] = na
                hc[i] = c0
                hv[i] = w
                while i > 0:
                    p = (i - 1) >> 1
                    if ha[i] < ha[p] or (ha[i] == ha[p] and hc[i] < hc[p]):
                        ha[i], ha[p] = ha[p], ha[i]
                        hc[i], hc[p] = hc[p], hc[i]
                        hv[i], hv[p] = hv[p], hv[i]
                        i = p
                    else:
                        break
        # vertex heap entries for v0's own source record are lazily skipped
    return center


# ---------------------------------------------------------------------------
# BFS helpers (cluster diameters)
# ---------------------------------------------------------------------------

@njit(cache=True)
def bfs_far_in_cluster(offsets, nbrs, asg, src, dist, queue):
    """BFS restricted to src's cluster. Returns (farthest vertex, ecc).
    dist must be -1 everywhere it touches; it is cleaned up before return."""
    c = asg[src]
    head = 0
    tail = 0
    queue[tail] = src
    tail += 1
    dist[src] = 0
    far = src
    fd = 0
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if du > fd:
            fd = du
            far = u
        for j in range(offsets[u], offsets[u + 1]):
            v = nbrs[j]
            if asg[v] == c and dist[v] < 0:
                dist[v] = du + 1
                queue[tail] = v
                tail += 1
    for i in range(tail):
        dist[queue[i]] = -1
    return far, fd

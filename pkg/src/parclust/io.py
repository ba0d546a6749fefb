"""File formats: edge lists, binary CSR, community files, clusterings,
vector sets, and pair-label tuples."""

import os
import struct

import numpy as np

from .graph import Clustering, Graph

CSR_MAGIC = b"PCBS-CSR1"


class ParseError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


def atomic_write_bytes(path, data):
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as f:
        f.write(data)
    os.replace(tmp, path)


def atomic_write_text(path, text):
    atomic_write_bytes(path, text.encode())


# ---------------------------------------------------------------------------
# edge lists
# ---------------------------------------------------------------------------

def load_edge_list(path, weighted=False):
    """Parse a whitespace-separated edge list (`u v` or `u v w`, `#` comments).

    The input is symmetrized, self-loops are dropped, and duplicate edges are
    merged keeping the maximum weight. Vertex count is max id + 1; id gaps
    become isolated vertices.
    """
    us, vs, ws = [], [], []
    want = 3 if weighted else 2
    saw_data = False
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            toks = s.split()
            if len(toks) != want:
                raise ParseError(path, lineno,
                                 f"expected {want} tokens, got {len(toks)}")
            try:
                u = int(toks[0])
                v = int(toks[1])
            except ValueError:
                raise ParseError(path, lineno, "vertex ids must be integers") from None
            if u < 0 or v < 0:
                raise ParseError(path, lineno, "vertex ids must be nonnegative")
            w = 1.0
            if weighted:
                try:
                    w = float(toks[2])
                except ValueError:
                    raise ParseError(path, lineno, "weight must be numeric") from None
                if not np.isfinite(w) or w < 0:
                    raise ParseError(path, lineno, "weight must be a nonnegative number")
            saw_data = True
            us.append(u)
            vs.append(v)
            ws.append(w)
    if not saw_data:
        raise ParseError(path, 0, "empty edge list")
    return Graph.from_edge_arrays(np.array(us, dtype=np.int64),
                                  np.array(vs, dtype=np.int64),
                                  np.array(ws, dtype=np.float64),
                                  weighted=weighted)


def save_edge_list(g, path):
    eu, ev, ew = g.edge_arrays()
    lines = []
    if g.weighted:
        for i in range(eu.shape[0]):
            lines.append(f"{eu[i]} {ev[i]} {float(ew[i])!r}")
    else:
        for i in range(eu.shape[0]):
            lines.append(f"{eu[i]} {ev[i]}")
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


# ---------------------------------------------------------------------------
# binary CSR
# ---------------------------------------------------------------------------

def save_csr_binary(g, path):
    """Little-endian layout: magic, weighted flag (u8), n (u64), m (u64),
    offsets (u64 * (n+1)), neighbors (u64 * 2m), weights (f64 * 2m)."""
    parts = [CSR_MAGIC,
             struct.pack("<B", 1 if g.weighted else 0),
             struct.pack("<QQ", g.n, g.m),
             g.offsets.astype("<u8").tobytes(),
             g.neighbors.astype("<u8").tobytes(),
             g.weights.astype("<f8").tobytes()]
    atomic_write_bytes(path, b"".join(parts))


def load_csr_binary(path, validate=False):
    with open(path, "rb") as f:
        data = f.read()
    if data[:len(CSR_MAGIC)] != CSR_MAGIC:
        raise ParseError(path, 0, "bad magic; not a PCBS-CSR1 file")
    pos = len(CSR_MAGIC)
    weighted = bool(data[pos])
    pos += 1
    n, m = struct.unpack_from("<QQ", data, pos)
    pos += 16
    need = pos + 8 * (n + 1) + 16 * (2 * m)
    if len(data) != need:
        raise ParseError(path, 0, f"truncated file: {len(data)} bytes, expected {need}")
    offsets = np.frombuffer(data, dtype="<u8", count=n + 1, offset=pos).astype(np.int64)
    pos += 8 * (n + 1)
    nbrs = np.frombuffer(data, dtype="<u8", count=2 * m, offset=pos).astype(np.int64)
    pos += 8 * 2 * m
    wts = np.frombuffer(data, dtype="<f8", count=2 * m, offset=pos).astype(np.float64)
    g = Graph(n=int(n), m=int(m), offsets=offsets, neighbors=nbrs,
              weights=wts, weighted=weighted)
    if validate:
        g.validate()
    return g


def load_graph(path, weighted=False, binary=False):
    return load_csr_binary(path) if binary else load_edge_list(path, weighted=weighted)


# ---------------------------------------------------------------------------
# community files and clusterings (one cluster per line)
# ---------------------------------------------------------------------------

def load_community_sets(path):
    """Communities as a list of vertex sets, duplicates removed, file order kept."""
    seen = set()
    out = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            s = line.strip()
            if not s:
                continue
            try:
                ids = frozenset(int(t) for t in s.split())
            except ValueError:
                raise ParseError(path, lineno, "community members must be integers") from None
            if ids in seen:
                continue
            seen.add(ids)
            out.append(ids)
    return out


def save_clustering(c, path):
    """One cluster per line, members ascending; flat clusters in id order,
    overlapping clusters sorted by member tuple for reproducibility."""
    sets = c.to_sets()
    rows = [sorted(s) for s in sets]
    if not c.is_flat:
        rows.sort()
    atomic_write_text(path, "\n".join(" ".join(map(str, r)) for r in rows)
                      + ("\n" if rows else ""))


def load_clustering(path, n=None):
    """Read a one-cluster-per-line file back. Returns a flat Clustering when
    the sets form a partition of 0..n-1, otherwise an overlapping one."""
    sets = load_community_sets(path)
    total = sum(len(s) for s in sets)
    universe = set()
    for s in sets:
        universe |= s
    if n is None:
        n = max(universe) + 1 if universe else 0
    if total == len(universe) == n and (not universe or min(universe) >= 0):
        asg = np.empty(n, dtype=np.int64)
        for cid, s in enumerate(sets):
            for v in s:
                asg[v] = cid
        return Clustering.flat(asg)
    return Clustering.overlapping(sets)


# ---------------------------------------------------------------------------
# vector sets and pair labels
# ---------------------------------------------------------------------------

def load_vectors(path, labels_path=None):
    """Text format: header line `n d`, then n rows of d reals."""
    with open(path) as f:
        header = f.readline().split()
        if len(header) != 2:
            raise ParseError(path, 1, "header must be `n d`")
        try:
            n, d = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError(path, 1, "header must be two integers") from None
        if d < 1:
            raise ParseError(path, 1, "dimension must be >= 1")
        data = np.loadtxt(f, dtype=np.float64, ndmin=2)
    if data.shape != (n, d):
        raise ParseError(path, 0, f"expected {n}x{d} values, got {data.shape}")
    labels = None
    if labels_path is not None:
        labels = np.loadtxt(labels_path, dtype=np.int64, ndmin=1)
        if labels.shape[0] != n:
            raise ParseError(labels_path, 0, "label count does not match vectors")
    return data, labels


def load_pairs(path):
    """Pair tuples, one `x y w` per line."""
    xs, ys, ws = [], [], []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            toks = s.split()
            if len(toks) != 3:
                raise ParseError(path, lineno, "expected `x y w`")
            try:
                x, y, w = int(toks[0]), int(toks[1]), float(toks[2])
            except ValueError:
                raise ParseError(path, lineno, "expected two ints and a real") from None
            xs.append(x)
            ys.append(y)
            ws.append(w)
    return (np.array(xs, dtype=np.int64), np.array(ys, dtype=np.int64),
            np.array(ws, dtype=np.float64))

import numpy as np
import pytest

from parclust.datasets import (RmatParams, build_knn_graph, generate_rmat,
                               load_communities)
from parclust.graph import GraphError
from parclust.io import ParseError, load_vectors


# ---------------------------------------------------------------------------
# k-NN graphs
# ---------------------------------------------------------------------------

def test_knn_two_points_on_line():
    g = build_knn_graph(np.array([[0.0], [1.0]]), k=1)
    assert g.m == 1
    assert g.weights[g.edge_slot(0, 1)] == pytest.approx(0.5)  # 1/(1+1)


def test_knn_identical_points_weight_one():
    g = build_knn_graph(np.array([[2.0, 3.0], [2.0, 3.0]]), k=1)
    assert g.weights[g.edge_slot(0, 1)] == pytest.approx(1.0)


def test_knn_three_collinear_points():
    g = build_knn_graph(np.array([[0.0], [1.0], [3.0]]), k=1)
    # directed NNs: 0->1, 1->0, 2->1; union has exactly (0,1) and (1,2)
    assert sorted((u, v) for u, v, _ in g.edges()) == [(0, 1), (1, 2)]
    assert g.weights[g.edge_slot(1, 2)] == pytest.approx(1.0 / 3.0)


def test_knn_rejects_bad_k_and_zero_norm():
    pts = np.array([[0.0], [1.0]])
    with pytest.raises(GraphError):
        build_knn_graph(pts, k=2)
    with pytest.raises(GraphError):
        build_knn_graph(np.array([[0.0, 0.0], [1.0, 0.0]]), k=1, metric="cosine")


def test_knn_cosine_weights_clamped():
    pts = np.array([[1.0, 0.0], [-1.0, 0.001], [0.0, 1.0]])
    g = build_knn_graph(pts, k=2, metric="cosine")
    assert g.weights.min() >= 0.0
    assert g.weights.max() <= 1.0


def test_knn_min_degree_at_least_one():
    rng = np.random.default_rng(50)
    pts = rng.normal(size=(60, 3))
    g = build_knn_graph(pts, k=4)
    assert g.degrees().min() >= 4  # union symmetrization only adds edges


def test_knn_matches_quadratic_reference():
    rng = np.random.default_rng(51)
    pts = rng.normal(size=(500, 2))
    k = 5
    g = build_knn_graph(pts, k)
    # quadratic reference with the same tie rule
    want = set()
    for i in range(len(pts)):
        d = np.sqrt(((pts - pts[i]) ** 2).sum(axis=1))
        d[i] = np.inf
        order = np.lexsort((np.arange(len(pts)), d))[:k]
        for j in order:
            want.add((min(i, int(j)), max(i, int(j))))
    got = {(u, v) for u, v, _ in g.edges()}
    assert got == want


def test_load_vectors_round_trip(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("3 2\n0 1\n2 3\n4 5\n")
    data, labels = load_vectors(p)
    assert data.shape == (3, 2) and labels is None
    lp = tmp_path / "l.txt"
    lp.write_text("0\n0\n1\n")
    _, labels = load_vectors(p, labels_path=lp)
    assert labels.tolist() == [0, 0, 1]
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n0 1\n")
    with pytest.raises(ParseError):
        load_vectors(bad)


# ---------------------------------------------------------------------------
# RMAT
# ---------------------------------------------------------------------------

def test_rmat_single_vertex():
    g = generate_rmat(RmatParams(log2_n=0, edge_factor=4, seed=0))
    assert (g.n, g.m) == (1, 0)


def test_rmat_deterministic_per_seed():
    a = generate_rmat(RmatParams(log2_n=8, edge_factor=8, seed=3))
    b = generate_rmat(RmatParams(log2_n=8, edge_factor=8, seed=3))
    assert np.array_equal(a.neighbors, b.neighbors)
    c = generate_rmat(RmatParams(log2_n=8, edge_factor=8, seed=4))
    assert not np.array_equal(a.offsets, c.offsets)


def test_rmat_satisfies_graph_invariants():
    g = generate_rmat(RmatParams(log2_n=10, edge_factor=8, seed=7))
    g.validate()
    assert not g.weighted


def test_rmat_uniform_quadrants_look_uniform():
    # a = b = c = d = 0.25 should distribute endpoints roughly uniformly
    p = RmatParams(log2_n=8, edge_factor=64, a=0.25, b=0.25, c=0.25, d=0.25,
                   seed=11)
    g = generate_rmat(p)
    deg = g.degrees()
    # coarse sanity: halves of the id space see comparable edge volume
    lo = deg[:128].sum()
    hi = deg[128:].sum()
    assert abs(lo - hi) / (lo + hi) < 0.05
    # and degrees stay near the Erdos-Renyi mean (wide tolerance)
    assert abs(deg.mean() - 2 * g.m / g.n) < 1e-9
    assert deg.std() < 3 * np.sqrt(deg.mean())


def test_rmat_default_quadrants_are_skewed():
    g = generate_rmat(RmatParams(log2_n=10, edge_factor=16, seed=5))
    deg = g.degrees()
    assert deg[:256].sum() > deg[768:].sum() * 1.5  # a=0.5 favors low ids


def test_rmat_rejects_bad_probabilities():
    with pytest.raises(ValueError):
        RmatParams(log2_n=4, edge_factor=2, a=0.5, b=0.5, c=0.5, d=0.5)
    with pytest.raises(ValueError):
        RmatParams(log2_n=4, edge_factor=2, a=-0.1, b=0.5, c=0.3, d=0.3)


# ---------------------------------------------------------------------------
# community files
# ---------------------------------------------------------------------------

def test_load_communities_basic(tmp_path):
    p = tmp_path / "c.cmty"
    p.write_text("0 1 2\n3 4\n")
    gt = load_communities(p)
    assert len(gt) == 2


def test_load_communities_removes_duplicates(tmp_path):
    p = tmp_path / "c.cmty"
    p.write_text("0 1\n0 1\n")
    assert len(load_communities(p)) == 1


def test_load_communities_order_insensitive(tmp_path):
    p = tmp_path / "c.cmty"
    p.write_text("1 0 2\n0 1 2\n")
    assert len(load_communities(p)) == 1


def test_load_communities_skips_blank_rejects_garbage(tmp_path):
    p = tmp_path / "c.cmty"
    p.write_text("0 1\n\n2 3\n")
    assert len(load_communities(p)) == 2
    bad = tmp_path / "bad.cmty"
    bad.write_text("0 x\n")
    with pytest.raises(ParseError):
        load_communities(bad)


def test_vector_set_type(tmp_path):
    from parclust.datasets import VectorSet
    p = tmp_path / "v.txt"
    p.write_text("3 2\n0 0\n1 0\n9 9\n")
    vs = VectorSet.load(p)
    assert (vs.count, vs.dimension) == (3, 2)
    g = build_knn_graph(vs, k=1)
    assert g.n == 3
    with pytest.raises(GraphError):
        VectorSet(data=np.zeros((2, 2)), labels=np.zeros(3, dtype=np.int64))

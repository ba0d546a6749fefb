import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import make_graph
from parclust.graph import (Clustering, Graph, canonical_labels,
                            connected_components, core_numbers)
from parclust.io import (ParseError, load_csr_binary, load_edge_list,
                         save_csr_binary, save_edge_list)


# ---------------------------------------------------------------------------
# edge-list loading
# ---------------------------------------------------------------------------

def test_load_two_edge_path(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("0 1\n1 2\n")
    g = load_edge_list(p, weighted=False)
    assert (g.n, g.m) == (3, 2)
    assert not g.weighted
    assert np.all(g.weights == 1.0)
    g.validate()


def test_load_duplicate_keeps_max_weight(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("0 1 0.5\n1 0 0.9\n")
    g = load_edge_list(p, weighted=True)
    assert g.m == 1
    assert g.weights[g.edge_slot(0, 1)] == 0.9
    assert g.weights[g.edge_slot(1, 0)] == 0.9


def test_load_self_loop_dropped(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("0 0 1.0\n")
    g = load_edge_list(p, weighted=True)
    assert (g.n, g.m) == (1, 0)


def test_load_comments_and_gaps(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# header\n0 5\n")
    g = load_edge_list(p, weighted=False)
    assert g.n == 6
    assert g.degree(3) == 0  # gap becomes an isolated vertex


@pytest.mark.parametrize("content,weighted", [
    ("0 1 2 3\n", False),
    ("0\n", False),
    ("a b\n", False),
    ("0 1 x\n", True),
    ("0 1 -0.5\n", True),
    ("0 1\n", True),          # weighted load expects three tokens
    ("0 1 1.0\n", False),     # unweighted load expects two tokens
])
def test_load_malformed_lines(tmp_path, content, weighted):
    p = tmp_path / "g.txt"
    p.write_text(content)
    with pytest.raises(ParseError) as exc:
        load_edge_list(p, weighted=weighted)
    assert ":1:" in str(exc.value)


def test_load_empty_file_errors(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# nothing\n\n")
    with pytest.raises(ParseError):
        load_edge_list(p, weighted=False)


def _random_graph(rng, n, p, weighted):
    kind = "float" if weighted else None
    edges = oracles.random_graph(rng, n, p, weight_kind=kind)
    return oracles.graph_from(edges, n, weighted=weighted)


@pytest.mark.parametrize("weighted", [False, True])
def test_round_trip_edge_list(tmp_path, weighted):
    rng = np.random.default_rng(7)
    for trial in range(5):
        g = _random_graph(rng, 30, 0.2, weighted)
        path = tmp_path / f"g{trial}.txt"
        save_edge_list(g, path)
        h = load_edge_list(path, weighted=weighted)
        assert h.n == g.n and h.m == g.m and h.weighted == g.weighted
        assert np.array_equal(h.offsets, g.offsets)
        assert np.array_equal(h.neighbors, g.neighbors)
        assert np.array_equal(h.weights, g.weights)


@pytest.mark.parametrize("weighted", [False, True])
def test_round_trip_binary_csr(tmp_path, weighted):
    rng = np.random.default_rng(8)
    g = _random_graph(rng, 40, 0.15, weighted)
    path = tmp_path / "g.csr"
    save_csr_binary(g, path)
    h = load_csr_binary(path, validate=True)
    assert (h.n, h.m, h.weighted) == (g.n, g.m, g.weighted)
    assert np.array_equal(h.offsets, g.offsets)
    assert np.array_equal(h.neighbors, g.neighbors)
    assert np.array_equal(h.weights, g.weights)


def test_binary_csr_rejects_bad_magic(tmp_path):
    path = tmp_path / "g.csr"
    path.write_bytes(b"NOT-A-CSR" + b"\x00" * 32)
    with pytest.raises(ParseError):
        load_csr_binary(path)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 14), st.integers(0, 14),
                          st.sampled_from([0.25, 0.5, 1.0, 2.0])),
                max_size=40))
def test_symmetry_invariant(edge_list):
    g = oracles.graph_from([(u, v, w) for u, v, w in edge_list], 15, weighted=True)
    g.validate()  # validate() checks mirrored slots carry equal weights
    for u, v, w in g.edges():
        j = g.edge_slot(v, u)
        assert j >= 0
        assert g.weights[j] == w


def test_from_edge_arrays_rejects_negative():
    with pytest.raises(ValueError):
        Graph.from_edge_arrays(np.array([0]), np.array([1]),
                               np.array([-1.0]), weighted=True)
    with pytest.raises(ValueError):
        Graph.from_edge_arrays(np.array([-1]), np.array([1]))


# ---------------------------------------------------------------------------
# connected components
# ---------------------------------------------------------------------------

def test_components_path():
    g = make_graph([(0, 1), (1, 2)], weighted=False)
    c = connected_components(g)
    assert c.num_clusters == 1


def test_components_threshold_predicate():
    g = make_graph([(0, 1, 0.9), (1, 2, 0.1)])
    c = connected_components(g, lambda u, v, w: w >= 0.5)
    assert c.assignment.tolist() == [0, 0, 1]


def test_components_empty_edges():
    g = make_graph([], n=5)
    c = connected_components(g)
    assert c.assignment.tolist() == [0, 1, 2, 3, 4]


def test_components_vs_bfs_oracle():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(2, 200))
        edges = oracles.random_graph(rng, n, 1.8 / n)
        g = oracles.graph_from(edges, n, weighted=False)
        got = connected_components(g).assignment.tolist()
        want = oracles.bfs_components(n, [(u, v) for u, v, _ in edges])
        assert got == want  # both use dense ids ordered by minimum member


def test_components_parallel_matches_sequential():
    rng = np.random.default_rng(12)
    n = 3000
    edges = oracles.random_graph(rng, n, 2.5 / n)
    g = oracles.graph_from(edges, n, weighted=False)
    seq = connected_components(g, num_threads=1).assignment
    eu, ev, _ = g.edge_arrays()
    from parclust import _kernels as K
    par, _ = K.components_parallel(n, eu, ev)
    assert np.array_equal(seq, par)


# ---------------------------------------------------------------------------
# core numbers
# ---------------------------------------------------------------------------

def test_core_numbers_k4():
    g = make_graph([(u, v) for u in range(4) for v in range(u + 1, 4)],
                   weighted=False)
    assert core_numbers(g).tolist() == [3, 3, 3, 3]


def test_core_numbers_star():
    g = make_graph([(0, i) for i in range(1, 6)], weighted=False)
    assert core_numbers(g).tolist() == [1, 1, 1, 1, 1, 1]


def test_core_numbers_isolated():
    g = make_graph([(0, 1)], n=3, weighted=False)
    assert core_numbers(g)[2] == 0


def test_core_numbers_vs_brute_force():
    rng = np.random.default_rng(13)
    for _ in range(25):
        n = int(rng.integers(2, 100))
        edges = oracles.random_graph(rng, n, 3.0 / n)
        g = oracles.graph_from(edges, n, weighted=False)
        want = oracles.brute_core_numbers(n, [(u, v) for u, v, _ in edges])
        assert core_numbers(g).tolist() == want


# ---------------------------------------------------------------------------
# clustering values
# ---------------------------------------------------------------------------

def test_canonical_labels_orders_by_min_member():
    assert canonical_labels([5, 5, 2, 2, 5]).tolist() == [0, 0, 1, 1, 0]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=30))
def test_canonical_labels_idempotent_and_dense(labels):
    a = canonical_labels(labels)
    assert np.array_equal(canonical_labels(a), a)
    assert sorted(set(a.tolist())) == list(range(a.max() + 1))


def test_overlapping_rejects_duplicates_and_empty():
    with pytest.raises(ValueError):
        Clustering.overlapping([{0, 1}, {1, 0}])
    with pytest.raises(ValueError):
        Clustering.overlapping([set()])


def test_flat_to_sets():
    c = Clustering.flat([0, 0, 1, 2, 1])
    assert c.to_sets() == [frozenset({0, 1}), frozenset({2, 4}), frozenset({3})]

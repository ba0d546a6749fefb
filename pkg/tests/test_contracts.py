"""Shared output contracts: every clusterer returns a total flat partition
with dense cluster ids (overlapping for SLPA), on weighted and unweighted
random graphs, at any thread count."""

import numpy as np
import pytest

import oracles
import parclust as pc


def _weighted_graph():
    rng = np.random.default_rng(60)
    edges = oracles.random_graph(rng, 80, 0.08, weight_kind="float")
    return oracles.graph_from(edges, 80)


GRAPH = _weighted_graph()

FLAT_RUNS = {
    "affinity": lambda g, t: pc.cluster_affinity(
        g, pc.AffinityParams(num_rounds=10, initial_threshold=0.2),
        num_threads=t)[0],
    "correlation": lambda g, t: pc.cluster_correlation(
        g, pc.LambdaCCParams(resolution=0.2), num_threads=t),
    "modularity": lambda g, t: pc.cluster_modularity(g, 1.0, num_threads=t),
    "parhac": lambda g, t: pc.cluster_parhac(
        g, pc.ParHACParams(epsilon=0.1, weight_threshold=0.1),
        num_threads=t)[0],
    "connectivity": lambda g, t: pc.cluster_connectivity(g, 0.3, num_threads=t),
    "ldd": lambda g, t: pc.cluster_ldd(g, pc.LDDParams(beta=0.2, seed=1),
                                       num_threads=t),
    "kcore": lambda g, t: pc.cluster_kcore(g, 2, num_threads=t),
    "scan": lambda g, t: pc.cluster_scan(
        g, pc.ScanParams(epsilon_sim=0.5, mu=2), num_threads=t),
    "tectonic": lambda g, t: pc.cluster_tectonic(
        g, pc.TectonicParams(theta=0.05), num_threads=t),
    "label_prop": lambda g, t: pc.cluster_label_prop(
        g, pc.LabelPropParams(), num_threads=t),
}


@pytest.mark.parametrize("name", sorted(FLAT_RUNS))
@pytest.mark.parametrize("threads", [1, 4])
def test_flat_output_contract(name, threads):
    c = FLAT_RUNS[name](GRAPH, threads)
    assert c.is_flat
    asg = c.assignment
    assert asg.shape[0] == GRAPH.n          # total assignment
    k = c.num_clusters
    assert sorted(set(asg.tolist())) == list(range(k))  # dense ids
    # canonical order: cluster ids ascend with their minimum member
    firsts = [int(np.flatnonzero(asg == cid)[0]) for cid in range(k)]
    assert firsts == sorted(firsts)


@pytest.mark.parametrize("threads", [1, 4])
def test_slpa_output_contract(threads):
    c = pc.cluster_slpa(GRAPH, pc.SlpaParams(rounds=10, freq_threshold=0.3,
                                             seed=2), num_threads=threads)
    assert c.form == "overlapping"
    seen = set()
    covered = set()
    for s in c.clusters:
        assert s, "empty cluster"
        assert s not in seen, "duplicate cluster"
        seen.add(s)
        covered |= s
    assert covered == set(range(GRAPH.n))

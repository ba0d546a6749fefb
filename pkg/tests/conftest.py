import pytest

import oracles


def make_graph(edges, n=None, weighted=True):
    if n is None:
        n = 1 + max(max(u, v) for u, v, *_ in edges) if edges else 0
    norm = [(e[0], e[1], e[2] if len(e) > 2 else 1.0) for e in edges]
    return oracles.graph_from(norm, n, weighted=weighted)


@pytest.fixture
def two_triangles_bridge():
    """The canonical 6-vertex graph: triangles {0,1,2} and {3,4,5} joined by
    the bridge (2,3), all weights 1."""
    edges = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]
    return make_graph(edges, weighted=False)

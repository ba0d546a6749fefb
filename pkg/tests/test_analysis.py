import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from parclust.analysis import (AnalysisError, auc_high_precision,
                               pareto_frontier)


def test_frontier_single_point():
    f = pareto_frontier([(0.5, 0.5, 0)])
    assert [(p.x, p.y, p.run_id) for p in f] == [(0.5, 0.5, 0)]


def test_frontier_all_non_dominated():
    pts = [(0.9, 0.2, 0), (0.5, 0.5, 1), (0.6, 0.4, 2)]
    f = pareto_frontier(pts)
    assert [(p.x, p.y) for p in f] == [(0.5, 0.5), (0.6, 0.4), (0.9, 0.2)]


def test_frontier_drops_dominated():
    pts = [(0.5, 0.5, 0), (0.6, 0.6, 1), (0.4, 0.7, 2)]
    f = pareto_frontier(pts)
    assert [(p.x, p.y) for p in f] == [(0.4, 0.7), (0.6, 0.6)]


def test_frontier_empty_errors():
    with pytest.raises(AnalysisError):
        pareto_frontier([])


def test_frontier_rejects_non_finite():
    with pytest.raises(AnalysisError):
        pareto_frontier([(float("nan"), 0.5, 0)])


def test_frontier_duplicates_keep_lowest_run_id():
    f = pareto_frontier([(0.5, 0.5, 7), (0.5, 0.5, 3)])
    assert len(f) == 1 and f[0].run_id == 3


def test_frontier_matches_dominance_oracle():
    rng = np.random.default_rng(41)
    for _ in range(10):
        pts = [(float(x), float(y), i)
               for i, (x, y) in enumerate(rng.random((200, 2)).round(2))]
        got = sorted((p.x, p.y, p.run_id) for p in pareto_frontier(pts))
        want = oracles.dominance_frontier(pts)
        assert got == want


def test_frontier_min_x_orientation():
    pts = [(1.0, 0.9, 0), (2.0, 0.95, 1), (3.0, 0.9, 2)]
    f = pareto_frontier(pts, orientation="min-x-max-y")
    assert [(p.x, p.y) for p in f] == [(1.0, 0.9), (2.0, 0.95)]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1, width=16), st.floats(0, 1, width=16)),
                min_size=1, max_size=60))
def test_frontier_strictly_monotone(coords):
    pts = [(float(x), float(y), i) for i, (x, y) in enumerate(coords)]
    f = pareto_frontier(pts)
    xs = [p.x for p in f]
    ys = [p.y for p in f]
    assert xs == sorted(xs)
    assert all(a < b for a, b in zip(xs, xs[1:]))
    assert all(a > b for a, b in zip(ys, ys[1:]))


# ---------------------------------------------------------------------------
# high-precision AUC
# ---------------------------------------------------------------------------

def test_auc_perfect_point_is_one():
    f = pareto_frontier([(1.0, 1.0, 0)])
    assert auc_high_precision(f) == pytest.approx(1.0)


def test_auc_no_high_precision_points():
    f = pareto_frontier([(0.4, 0.9, 0)])
    assert auc_high_precision(f) == 0.0


def test_auc_two_point_staircase():
    pts = [(0.5, 0.8, 0), (1.0, 0.4, 1)]
    f = pareto_frontier(pts)
    want = oracles.auc_grid(pts)
    got = auc_high_precision(f)
    assert got == pytest.approx(want, abs=1e-4)
    # the (1.0, 0.4) point carries the whole closed interval
    assert got == pytest.approx(0.4)


def test_auc_interior_point():
    pts = [(0.7, 0.9, 0), (1.0, 0.1, 1)]
    f = pareto_frontier(pts)
    assert auc_high_precision(f) == pytest.approx(2 * (0.2 * 0.9 + 0.3 * 0.1))
    assert auc_high_precision(f) == pytest.approx(oracles.auc_grid(pts), abs=1e-4)


def test_auc_monotone_under_domination():
    base = [(0.7, 0.5, 0)]
    better = base + [(0.8, 0.6, 1)]
    a0 = auc_high_precision(pareto_frontier(base))
    a1 = auc_high_precision(pareto_frontier(better))
    assert a1 >= a0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1, width=16), st.floats(0, 1, width=16)),
                min_size=1, max_size=30))
def test_auc_in_unit_interval_and_matches_grid(coords):
    pts = [(float(x), float(y), i) for i, (x, y) in enumerate(coords)]
    f = pareto_frontier(pts)
    a = auc_high_precision(f)
    assert 0.0 <= a <= 1.0
    assert a == pytest.approx(oracles.auc_grid(pts, steps=20_000), abs=2e-3)


def test_auc_trapezoid_mode_runs():
    f = pareto_frontier([(0.6, 0.8, 0), (1.0, 0.2, 1)])
    step = auc_high_precision(f, mode="step")
    trap = auc_high_precision(f, mode="trapezoid")
    assert 0.0 <= step <= trap <= 1.0

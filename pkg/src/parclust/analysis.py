"""Pareto frontier extraction and high-precision AUC over benchmark results."""

import math
from dataclasses import dataclass


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class FrontierPoint:
    x: float
    y: float
    run_id: int


def pareto_frontier(points, orientation="max-max"):
    """Non-dominated subset of (x, y, run_id) triples.

    Orientations: "max-max" (both coordinates better when larger, e.g.
    precision/recall) or "min-x-max-y" (e.g. runtime vs quality). Duplicate
    (x, y) points collapse to the lowest run_id. The result is sorted
    ascending by x; in max-max orientation y is strictly decreasing.
    """
    pts = [FrontierPoint(float(x), float(y), rid) for x, y, rid in points]
    if not pts:
        raise AnalysisError("pareto_frontier needs at least one point")
    for p in pts:
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise AnalysisError(f"non-finite point {p}")
    if orientation not in ("max-max", "min-x-max-y"):
        raise AnalysisError(f"unknown orientation {orientation!r}")
    flip = orientation == "min-x-max-y"

    best = {}
    for p in pts:
        key = (p.x, p.y)
        if key not in best or p.run_id < best[key].run_id:
            best[key] = p
    uniq = list(best.values())

    def sort_key(p):
        x = -p.x if not flip else p.x
        return (x, -p.y, p.run_id)

    uniq.sort(key=sort_key)
    kept = []
    ymax = -math.inf
    for p in uniq:
        if p.y > ymax:
            kept.append(p)
            ymax = p.y
    kept.sort(key=lambda p: p.x)
    return kept


def auc_high_precision(frontier, mode="step"):
    """Twice the area under the achievable-recall staircase for precision in
    [0.5, 1]: at requirement p the staircase value is the maximum recall
    among frontier points with precision >= p (0 when none), so a single
    perfect point yields 1. The trapezoid mode interpolates linearly between
    frontier points instead and exists for comparison only.
    """
    pts = sorted(((p.x, p.y) for p in frontier))
    if mode == "step":
        area = 0.0
        prev = 0.5
        for x, y in pts:
            if x < 0.5:
                continue
            hi = min(x, 1.0)
            if hi > prev:
                area += (hi - prev) * y
                prev = hi
            elif hi == prev and x >= 0.5:
                prev = hi
        return 2.0 * area
    if mode == "trapezoid":
        if not pts:
            return 0.0
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]

        def recall_at(p):
            if p <= xs[0]:
                return ys[0]
            for i in range(1, len(xs)):
                if p <= xs[i]:
                    t = (p - xs[i - 1]) / (xs[i] - xs[i - 1])
                    return ys[i - 1] + t * (ys[i] - ys[i - 1])
            return 0.0

        lo, hi = 0.5, 1.0
        steps = 4096
        area = 0.0
        for i in range(steps):
            a = lo + (hi - lo) * i / steps
            b = lo + (hi - lo) * (i + 1) / steps
            area += (recall_at(a) + recall_at(b)) / 2.0 * (b - a)
        return 2.0 * area
    raise AnalysisError(f"unknown AUC mode {mode!r}")

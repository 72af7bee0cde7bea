from __future__ import annotations

import numpy as np
import pytest

from dicut_sketch.multigraph import Multigraph
from dicut_sketch.partition import (
    NarrowIntervalWarning,
    ThresholdVector,
    bias_index,
    bias_thresholds,
    db_index,
    degree_index,
    degree_thresholds,
    index_of,
    index_of_array,
    is_lambda_wide,
    refine_partition,
    refinement_parent_classes,
)


def test_threshold_validation():
    with pytest.raises(ValueError):
        ThresholdVector((-1.0, -1.0, 1.0), "bias")
    with pytest.raises(ValueError):
        ThresholdVector((-0.5, 1.0), "bias")
    with pytest.raises(ValueError):
        ThresholdVector((0.0, 1.0), "degree")
    t = bias_thresholds([-1, -1 / 3, 1 / 3, 1])
    assert t.ell == 3
    assert t.min_gap == pytest.approx(2 / 3)


def test_index_of_examples():
    t = bias_thresholds([-1, -1 / 3, 1 / 3, 1])
    assert index_of(t, 0.0) == 2
    assert index_of(t, 1.0) == 3  # top endpoint maps to ell
    assert index_of(bias_thresholds([-1, 0, 1]), -1.0) == 1
    with pytest.raises(ValueError):
        index_of(t, 1.5)


def test_index_of_monotone_and_tiling(gen):
    t = bias_thresholds(sorted({-1.0, 1.0, *(float(x) for x in gen.uniform(-1, 1, size=6))}))
    xs = np.sort(gen.uniform(-1, 1, size=200))
    idx = index_of_array(t, xs)
    assert (np.diff(idx) >= 0).all()
    assert idx.min() >= 1 and idx.max() <= t.ell
    # every breakpoint starts its upper class
    for i, b in enumerate(t.breakpoints[:-1], start=1):
        assert index_of(t, b) == i


def test_db_index_example():
    g = Multigraph(2, [(1, 2)])
    t = bias_thresholds([-1, 0, 1])
    d = degree_thresholds([1, 2])
    assert db_index(g, d, t, 1, 2) == (1, 1, 2, 1)


def test_db_index_isolated_and_cycle():
    g = Multigraph(4, [(1, 2), (2, 3), (3, 1)])
    t = bias_thresholds([-1, 0, 1])
    d = degree_thresholds([1, 2, 4])
    assert bias_index(g, t, 4) is None
    assert degree_index(g, d, 4) is None
    assert db_index(g, d, t, 1, 4) is None
    assert bias_index(g, t, 1) == 2  # bias 0 -> upper class


def test_db_index_components_match_single_ops(gen):
    from conftest import random_graph

    g = random_graph(gen, 8, 20)
    t = bias_thresholds([-1, -0.5, 0, 0.5, 1])
    d = degree_thresholds([1, 2, 4, 8, 16, 32])
    for u in range(1, 9):
        for v in range(1, 9):
            got = db_index(g, d, t, u, v)
            assert got == (
                degree_index(g, d, u),
                degree_index(g, d, v),
                bias_index(g, t, u),
                bias_index(g, t, v),
            )


def test_refine_partition_examples():
    assert refine_partition(bias_thresholds([-1, 1]), 0.5).breakpoints == (-1.0, -0.5, 0.0, 0.5, 1.0)
    assert refine_partition(bias_thresholds([-1, 0, 1]), 2 / 3).breakpoints == (-1.0, -0.5, 0.0, 0.5, 1.0)
    t = bias_thresholds([-1, 0, 1])
    assert refine_partition(t, 2.0).breakpoints == t.breakpoints


def test_refine_partition_properties(gen):
    for _ in range(30):
        cuts = sorted({-1.0, 1.0, *(float(x) for x in gen.uniform(-1, 1, size=int(gen.integers(0, 5))))})
        t = bias_thresholds(cuts)
        lam = float(gen.uniform(0.05, 1.5))
        r = refine_partition(t, lam)
        # original breakpoints survive
        assert set(t.breakpoints) <= set(r.breakpoints)
        widths = np.diff(r.breakpoints)
        assert (widths <= lam + 1e-12).all()
        # interval count bound for the canonical equal-split rule
        total = t.breakpoints[-1] - t.breakpoints[0]
        assert r.ell <= t.ell + np.ceil(total / lam)
        if t.min_gap >= lam / 2:
            assert is_lambda_wide(r, lam)


def test_refine_partition_warns_on_narrow():
    t = bias_thresholds([-1, -0.999, 1])
    with pytest.warns(NarrowIntervalWarning):
        refine_partition(t, 1.0)


def test_refinement_parent_classes():
    t = bias_thresholds([-1, 0, 1])
    r = refine_partition(t, 0.25)
    parents = refinement_parent_classes(t, r)
    assert len(parents) == r.ell
    mid = r.ell // 2
    assert all(p == 1 for p in parents[:mid])
    assert all(p == 2 for p in parents[mid:])


def test_is_lambda_wide():
    assert is_lambda_wide(bias_thresholds([-1, 0, 1]), 1.0)
    assert not is_lambda_wide(bias_thresholds([-1, 0, 1]), 0.5)
    assert is_lambda_wide(refine_partition(bias_thresholds([-1, 1]), 0.5), 0.5)

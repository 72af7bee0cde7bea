from __future__ import annotations

import numpy as np
import pytest

from dicut_sketch.errors import UndefinedValueError
from dicut_sketch.multigraph import Multigraph
from dicut_sketch.partition import bias_thresholds, db_index, degree_thresholds
from dicut_sketch.snapshot import compute_refined_snapshot, compute_snapshot, project

from conftest import random_graph

T3 = bias_thresholds([-1, 0, 1])


def test_snapshot_single_edge():
    snap = compute_snapshot(Multigraph(2, [(1, 2)]), T3)
    expect = np.zeros((2, 2))
    expect[1, 0] = 1.0  # class pair (2, 1)
    assert np.array_equal(snap, expect)


def test_snapshot_cycle():
    snap = compute_snapshot(Multigraph(3, [(1, 2), (2, 3), (3, 1)]), T3)
    assert snap[1, 1] == 1.0 and snap.sum() == 1.0


def test_snapshot_normalized_and_order_free(gen):
    g = random_graph(gen, 10, 40)
    snap = compute_snapshot(g, T3)
    assert snap.sum() == pytest.approx(1.0, abs=1e-12)
    perm = gen.permutation(g.num_edges)
    g2 = Multigraph(g.n, np.column_stack([g.us[perm], g.vs[perm]]))
    assert np.allclose(snap, compute_snapshot(g2, T3), atol=1e-15)
    with pytest.raises(UndefinedValueError):
        compute_snapshot(Multigraph(3), T3)


def test_refined_snapshot_single_edge():
    d = degree_thresholds([1, 2])
    arr = compute_refined_snapshot(Multigraph(2, [(1, 2)]), d, T3)
    assert arr.shape == (1, 1, 2, 2)
    assert arr[0, 0, 1, 0] == 1.0


def test_refined_snapshot_matches_db_index(gen):
    d = degree_thresholds([1, 2, 4, 8, 16, 32])
    t = bias_thresholds([-1, -0.5, 0, 0.5, 1])
    g = random_graph(gen, 8, 25)
    arr = compute_refined_snapshot(g, d, t)
    assert arr.sum() == pytest.approx(1.0, abs=1e-12)
    ref = np.zeros_like(arr)
    for u, v in g.edge_list():
        a, b, i, j = db_index(g, d, t, u, v)
        ref[a - 1, b - 1, i - 1, j - 1] += 1 / g.num_edges
    assert np.allclose(arr, ref, atol=1e-12)


def test_refined_snapshot_projection_is_snapshot(gen):
    d = degree_thresholds([1, 2, 4, 8, 16, 32, 64])
    t = bias_thresholds([-1, -0.5, 0, 0.5, 1])
    for _ in range(10):
        g = random_graph(gen, int(gen.integers(3, 12)), int(gen.integers(5, 40)))
        arr = compute_refined_snapshot(g, d, t)
        assert np.allclose(project(arr), compute_snapshot(g, t), atol=1e-12)


def test_refined_snapshot_degree_precondition():
    d = degree_thresholds([1, 2])
    g = Multigraph(3, [(1, 2), (1, 2), (1, 3)])  # vertex 1 has degree 3 > 2
    with pytest.raises(ValueError, match="vertex 1"):
        compute_refined_snapshot(g, d, T3)


def test_project_examples():
    arr = np.zeros((4, 6, 5, 7))
    assert np.array_equal(project(arr), np.zeros((5, 7)))
    arr[2, 4, 1, 3] = 1.0
    out = project(arr)
    assert out[1, 3] == 1.0 and out.sum() == 1.0
    with pytest.raises(ValueError):
        project(np.zeros((3, 3)))

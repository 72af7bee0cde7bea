"""Exact snapshot matrices and refined snapshot arrays.

A snapshot is the ell x ell matrix of edge-weight fractions between
pairs of bias classes; the refined snapshot is the k x k x ell x ell
array additionally keyed by the endpoints' degree classes. Both are
plain numpy arrays; class pair (i, j) lives at entry [i-1, j-1] (and
(a, b, i, j) at [a-1, b-1, i-1, j-1]).
"""

from __future__ import annotations

import numpy as np

from .errors import UndefinedValueError
from .multigraph import Multigraph
from .partition import ThresholdVector, index_of_array


def _edge_bias_classes(g: Multigraph, t: ThresholdVector) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(i, j, weights) arrays over edge rows with positive weight.
    Endpoints of such rows are never isolated, so classes are defined."""
    bias = g.biases()
    live = g.ws > 0
    us, vs, ws = g.us[live], g.vs[live], g.ws[live]
    bind = np.zeros(g.n + 1, dtype=np.int64)
    noniso = g.nonisolated()
    bind[noniso] = index_of_array(t, bias[noniso])
    return bind[us], bind[vs], ws


def compute_snapshot(g: Multigraph, t: ThresholdVector) -> np.ndarray:
    m = g.total_weight
    if m <= 0:
        raise UndefinedValueError("snapshot undefined on a graph with no edge weight")
    i, j, ws = _edge_bias_classes(g, t)
    ell = t.ell
    snap = np.zeros((ell, ell), dtype=np.float64)
    np.add.at(snap, (i - 1, j - 1), ws)
    return snap / m


def compute_refined_snapshot(
    g: Multigraph, d: ThresholdVector, t: ThresholdVector
) -> np.ndarray:
    m = g.total_weight
    if m <= 0:
        raise UndefinedValueError("refined snapshot undefined on a graph with no edge weight")
    deg = g.degrees()
    noniso = g.nonisolated()
    lo, hi = d.breakpoints[0], d.breakpoints[-1]
    bad = noniso[(deg[noniso] < lo) | (deg[noniso] > hi)]
    if bad.size:
        raise ValueError(
            f"vertex {int(bad[0])} has degree {deg[bad[0]]} outside [{lo}, {hi}]"
        )
    dind = np.zeros(g.n + 1, dtype=np.int64)
    dind[noniso] = index_of_array(d, deg[noniso])

    bias = g.biases()
    bind = np.zeros(g.n + 1, dtype=np.int64)
    bind[noniso] = index_of_array(t, bias[noniso])

    live = g.ws > 0
    us, vs, ws = g.us[live], g.vs[live], g.ws[live]
    k, ell = d.ell, t.ell
    arr = np.zeros((k, k, ell, ell), dtype=np.float64)
    np.add.at(arr, (dind[us] - 1, dind[vs] - 1, bind[us] - 1, bind[vs] - 1), ws)
    return arr / m


def project(a: np.ndarray) -> np.ndarray:
    """Sum out the two degree axes of a k x k x ell x ell array."""
    a = np.asarray(a)
    if a.ndim != 4:
        raise ValueError(f"expected a 4-dimensional array, got shape {a.shape}")
    return a.sum(axis=(0, 1))


def to_jsonable(arr: np.ndarray) -> list:
    return arr.tolist()

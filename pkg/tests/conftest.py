from __future__ import annotations

import itertools

import numpy as np
import pytest

from dicut_sketch.multigraph import Multigraph, cut_value


def random_graph(gen, n: int, m: int) -> Multigraph:
    us = gen.integers(1, n + 1, size=m)
    vs = gen.integers(1, n, size=m)
    vs = vs + (vs >= us)
    return Multigraph(n, np.column_stack([us, vs]))


def bruteforce_by_enumeration(g: Multigraph) -> tuple[float, tuple[int, ...]]:
    """Independent oracle: plain enumeration over all assignments using
    cut_value, ties broken lexicographically."""
    best_val, best_cut = -1.0, None
    for bits in itertools.product((0, 1), repeat=g.n):
        v = cut_value(g, np.array(bits))
        if v > best_val:
            best_val, best_cut = v, bits
    return best_val, best_cut


@pytest.fixture
def gen():
    return np.random.default_rng(20260810)

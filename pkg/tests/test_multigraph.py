from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from dicut_sketch.errors import ResourceGuardError, UndefinedValueError
from dicut_sketch.multigraph import (
    Multigraph,
    blowup_graph,
    blowup_labels,
    cut_value,
    max_dicut_bruteforce,
    sparsify,
    vertex_stats,
)
from dicut_sketch.partition import bias_thresholds, index_of
from dicut_sketch.smoothing import window_1d

from conftest import bruteforce_by_enumeration, random_graph


def test_vertex_stats_single_edge():
    g = Multigraph(2, [(1, 2)])
    s1 = vertex_stats(g, 1)
    assert (s1.deg_out, s1.deg_in, s1.deg, s1.bias) == (1, 0, 1, 1.0)
    assert vertex_stats(g, 2).bias == -1.0


def test_vertex_stats_cycle_and_isolated():
    g = Multigraph(4, [(1, 2), (2, 3), (3, 1)])
    for v in (1, 2, 3):
        s = vertex_stats(g, v)
        assert s.deg == 2 and s.bias == 0.0
    assert vertex_stats(g, 4).bias is None
    with pytest.raises(ValueError):
        vertex_stats(g, 5)


def test_degree_sums_match_total_weight(gen):
    g = random_graph(gen, 12, 40)
    out, inn = g._degree_arrays()
    assert out.sum() == pytest.approx(g.total_weight)
    assert inn.sum() == pytest.approx(g.total_weight)


def test_cut_value_examples():
    g = Multigraph(2, [(1, 2)])
    assert cut_value(g, [1, 0]) == 1.0
    assert cut_value(g, [0, 1]) == 0.0
    cyc = Multigraph(3, [(1, 2), (2, 3), (3, 1)])
    assert cut_value(cyc, [1, 0, 0]) == pytest.approx(1 / 3)
    with pytest.raises(UndefinedValueError):
        cut_value(Multigraph(2), [0, 0])


def test_random_cut_expectation_quarter(gen):
    # A uniformly random cut has expected value 1/4.
    g = random_graph(gen, 30, 150)
    samples = np.array([cut_value(g, gen.integers(0, 2, size=30)) for _ in range(4000)])
    se = samples.std() / np.sqrt(len(samples))
    assert abs(samples.mean() - 0.25) <= 3 * se + 1e-12


def test_bruteforce_examples():
    assert max_dicut_bruteforce(Multigraph(2, [(1, 2)]))[0] == 1.0
    val, cut = max_dicut_bruteforce(Multigraph(3, [(1, 2), (2, 3), (3, 1)]))
    assert val == pytest.approx(1 / 3)
    star = Multigraph(6, [(1, v) for v in range(2, 7)])
    val, cut = max_dicut_bruteforce(star)
    assert val == 1.0 and cut[0] == 1 and cut[1:].sum() == 0


def test_bruteforce_matches_enumeration(gen):
    for _ in range(15):
        n = int(gen.integers(2, 9))
        g = random_graph(gen, n, int(gen.integers(1, 3 * n)))
        val, cut = max_dicut_bruteforce(g)
        ref_val, ref_cut = bruteforce_by_enumeration(g)
        assert val == pytest.approx(ref_val, abs=1e-12)
        assert tuple(cut) == ref_cut  # lexicographically smallest maximizer
        assert cut_value(g, cut) == pytest.approx(val)


def test_bruteforce_guards():
    with pytest.raises(ResourceGuardError):
        max_dicut_bruteforce(Multigraph(30, [(1, 2)]))
    with pytest.raises(UndefinedValueError):
        max_dicut_bruteforce(Multigraph(3))


def test_sparsify_identity_and_determinism(gen):
    g = random_graph(gen, 20, 60)
    same = sparsify(g, 1.0, 7)
    assert np.array_equal(same.us, g.us) and np.array_equal(same.ws, g.ws)
    a = sparsify(g, 0.4, 123)
    b = sparsify(g, 0.4, 123)
    assert np.array_equal(a.us, b.us) and np.array_equal(a.vs, b.vs)
    with pytest.raises(ValueError):
        sparsify(g, 0.0, 1)
    with pytest.raises(ValueError):
        sparsify(g, 1.5, 1)


def test_sparsify_keeps_expected_weight(gen):
    g = random_graph(gen, 100, 2000)
    kept = np.array([sparsify(g, 0.5, int(s)).total_weight for s in range(60)])
    assert abs(kept.mean() - 1000) <= 4 * kept.std() / np.sqrt(len(kept))


def test_multigraph_validation():
    with pytest.raises(ValueError):
        Multigraph(3, [(1, 1)])
    with pytest.raises(ValueError):
        Multigraph(3, [(0, 2)])
    with pytest.raises(ValueError):
        Multigraph(3, [(1, 2)], [-1.0])


# ---------------------------------------------------------------------------
# Blowup oracle


def _blowup_exact_total_weight(g, t, w) -> Fraction:
    """Recompute the blowup's total weight in exact rationals."""
    bias = g.biases()
    total = Fraction(0)
    for u, v, wt in zip(g.us.tolist(), g.vs.tolist(), g.ws.tolist()):
        su = len(window_1d(w, t.ell, index_of(t, float(bias[u]))))
        sv = len(window_1d(w, t.ell, index_of(t, float(bias[v]))))
        total += Fraction(wt) * su * sv * Fraction(1, su * sv)
    return total


def _no_isolated(g: Multigraph, gen) -> Multigraph:
    deg = g.degrees()
    extra = [(int(v), 1 if v != 1 else 2) for v in np.flatnonzero(deg == 0) if v >= 1]
    if extra:
        g = Multigraph(g.n, g.edge_list() + extra)
    return g


def test_blowup_w0_is_isomorphic(gen):
    g = _no_isolated(random_graph(gen, 6, 12), gen)
    t = bias_thresholds([-1, -0.5, 0, 0.5, 1])
    k = blowup_graph(g, t, 0)
    assert k.n == g.n
    assert k.total_weight == pytest.approx(g.total_weight)
    assert max_dicut_bruteforce(k)[0] == pytest.approx(max_dicut_bruteforce(g)[0])


def test_blowup_preserves_weight_bias_value(gen):
    t = bias_thresholds([-1, -0.5, 0, 0.5, 1])
    for _ in range(6):
        n = int(gen.integers(2, 7))
        g = _no_isolated(random_graph(gen, n, int(gen.integers(n, 3 * n))), gen)
        k = blowup_graph(g, t, 1)
        labels = blowup_labels(g, t, 1)
        assert k.n == len(labels)
        # total weight preserved: exactly in rationals, to 1e-12 in floats
        assert _blowup_exact_total_weight(g, t, 1) == Fraction(int(g.total_weight))
        assert k.total_weight == pytest.approx(g.total_weight, rel=1e-12)
        gb, kb = g.biases(), k.biases()
        for pos, (v, _) in enumerate(labels, start=1):
            assert abs(float(kb[pos]) - float(gb[v])) <= 1e-12
        assert max_dicut_bruteforce(k)[0] == pytest.approx(max_dicut_bruteforce(g)[0], abs=1e-9)


def test_blowup_single_edge_structure():
    g = Multigraph(2, [(1, 2)])
    t = bias_thresholds([-1, -1 / 3, 1 / 3, 1])
    # bias classes: (+1 -> 3, -1 -> 1); windows of radius 1 have size 2 at
    # both boundary classes, so each endpoint gets 2 copies.
    k = blowup_graph(g, t, 1)
    assert k.n == 4
    assert k.num_edges == 4
    assert np.allclose(k.ws, 0.25)
    assert k.total_weight == pytest.approx(1.0)


def test_blowup_cycle_value():
    g = Multigraph(3, [(1, 2), (2, 3), (3, 1)])
    t = bias_thresholds([-1, -0.5, 0, 0.5, 1])
    k = blowup_graph(g, t, 1)
    assert max_dicut_bruteforce(k)[0] == pytest.approx(1 / 3, abs=1e-9)


def test_blowup_rejects_isolated():
    g = Multigraph(3, [(1, 2)])
    with pytest.raises(ValueError):
        blowup_graph(g, bias_thresholds([-1, 0, 1]), 1)

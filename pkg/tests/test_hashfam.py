from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

from dicut_sketch.hashfam import KWiseHash, _is_irreducible, irreducible_poly, sample_hash


def test_irreducible_polys():
    for s in range(2, 32):
        f = irreducible_poly(s)
        assert f.bit_length() == s + 1
        assert _is_irreducible(f, s)


def test_validation():
    with pytest.raises(ValueError):
        sample_hash(4, 64, 3, 0)  # not a power of two
    with pytest.raises(ValueError):
        sample_hash(0, 64, 4, 0)
    h = sample_hash(4, 64, 4, 0)
    with pytest.raises(ValueError):
        h.eval(0)
    with pytest.raises(ValueError):
        h.eval(65)


def test_determinism_and_range():
    h1 = sample_hash(4, 100, 8, 12345)
    h2 = sample_hash(4, 100, 8, 12345)
    xs = np.arange(1, 101)
    assert np.array_equal(h1.eval_array(xs), h2.eval_array(xs))
    assert h1.eval(7) == h1.eval(7)
    b = h1.eval_array(xs)
    assert b.min() >= 0 and b.max() < 8


def test_constant_range_one():
    h = sample_hash(4, 50, 1, 9)
    assert (h.eval_array(np.arange(1, 51)) == 0).all()


def test_seed_bits_bound():
    import math

    for n, m in ((256, 16), (10_000, 2), (64, 64)):
        h = sample_hash(4, n, m, 0)
        assert h.seed_bits <= 2 * 4 * (math.log2(n) + math.log2(m) + 1)


def test_marginal_uniformity_binomial():
    """Per-cell exact binomial test with Bonferroni correction at overall
    significance 1e-3, over 200 sampled functions on [256] -> [16]."""
    n, m, reps = 256, 16, 200
    xs = np.arange(1, n + 1)
    counts = np.zeros((n, m))
    for rep in range(reps):
        h = sample_hash(4, n, m, 1000 + rep)
        counts[np.arange(n), h.eval_array(xs)] += 1
    alpha = 1e-3 / (n * m)
    dist = stats.binom(reps, 1.0 / m)
    for c in np.unique(counts):
        p = 2 * min(dist.cdf(c), dist.sf(c - 1))
        if p < alpha:
            bad = np.argwhere(counts == c)[0]
            pytest.fail(f"cell x={bad[0] + 1}, bucket={bad[1]} count={c} p={p:.2e}")


def test_marginal_uniformity_m2():
    reps = 400
    xs = np.arange(1, 65)
    freq = np.zeros(64)
    for rep in range(reps):
        h = sample_hash(4, 64, 2, 5000 + rep)
        freq += h.eval_array(xs) == 0
    sigma = np.sqrt(0.25 * reps)
    assert (np.abs(freq - reps / 2) <= 4 * sigma).all()


def test_four_wise_joint_uniformity():
    """For random 4-tuples of distinct points, the joint distribution of
    (h(x1), ..., h(x4)) over sampled functions is uniform on [4]^4 by an
    aggregated chi-square test at significance 1e-3."""
    n, m, funcs, tuples = 64, 4, 500, 60
    gen = np.random.default_rng(77)
    xs = np.arange(1, n + 1)
    table = np.zeros((funcs, n), dtype=np.int64)
    for f in range(funcs):
        table[f] = sample_hash(4, n, m, 20_000 + f).eval_array(xs)
    stat = 0.0
    df = 0
    expected = funcs / m**4
    for _ in range(tuples):
        pts = gen.choice(n, size=4, replace=False)
        joint = (
            table[:, pts[0]] * m**3 + table[:, pts[1]] * m**2 + table[:, pts[2]] * m + table[:, pts[3]]
        )
        counts = np.bincount(joint, minlength=m**4)
        stat += ((counts - expected) ** 2 / expected).sum()
        df += m**4 - 1
    threshold = stats.chi2.ppf(1 - 1e-3, df)
    assert stat < threshold, f"chi2 {stat:.1f} >= {threshold:.1f} (df {df})"

"""Window geometry and smoothing of matrices and arrays.

Windows are infinity-norm balls of radius w clipped to the index box,
with no wraparound. Smoothing spreads each entry over its own window
with weight 1/|window|, which preserves the entry sum. The lower/upper
arrays use radius w-1 / w+1 windows with min/max-perturbed normalizers
and sandwich the smoothed array entrywise; the gap between them shrinks
like 1/w, which is what makes "off by one class" estimation errors
harmless downstream.

All public index arguments are 1-based (classes); arrays are indexed
0-based as usual.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def window_1d(w: int, ell: int, i: int) -> list[int]:
    """{i' in [ell] : |i' - i| <= w} as a sorted list (1-based)."""
    if not 1 <= i <= ell:
        raise ValueError(f"index {i} out of range [1, {ell}]")
    if w < 0:
        raise ValueError(f"window radius must be >= 0, got {w}")
    return list(range(max(1, i - w), min(ell, i + w) + 1))


def window_4d(
    w: int, k: int, ell: int, a: int, b: int, i: int, j: int
) -> list[tuple[int, int, int, int]]:
    """Product of per-axis 1-dimensional windows (1-based index tuples)."""
    return [
        (ap, bp, ip, jp)
        for ap in window_1d(w, k, a)
        for bp in window_1d(w, k, b)
        for ip in window_1d(w, ell, i)
        for jp in window_1d(w, ell, j)
    ]


def _sizes_1d(w: int, length: int) -> np.ndarray:
    """len(window_1d(w, length, i)) for i = 1..length, as a float array."""
    pos = np.arange(1, length + 1)
    return (np.minimum(length, pos + w) - np.maximum(1, pos - w) + 1).astype(np.float64)


def _axis_factors(kind: str, w: int, length: int) -> np.ndarray:
    """Per-axis normalizer factor for each position (1/window-size for
    'smooth'; extremized over radius-1 neighbors for 'lower'/'upper').
    Factorizes over axes because windows are axis products."""
    sizes = _sizes_1d(w, length)
    if kind == "smooth":
        return 1.0 / sizes
    padded = np.concatenate([[np.nan], sizes, [np.nan]])
    stacked = np.stack([padded[:-2], padded[1:-1], padded[2:]])
    if kind == "lower":
        return 1.0 / np.nanmax(stacked, axis=0)
    if kind == "upper":
        return 1.0 / np.nanmin(stacked, axis=0)
    raise ValueError(f"unknown normalizer kind {kind!r}")


def _nu_2d(kind: str, w: int, ell: int) -> np.ndarray:
    f = _axis_factors(kind, w, ell)
    return np.multiply.outer(f, f)


def _nu_4d(kind: str, w: int, k: int, ell: int) -> np.ndarray:
    fk = _axis_factors(kind, w, k)
    fl = _axis_factors(kind, w, ell)
    return np.einsum("a,b,i,j->abij", fk, fk, fl, fl)


def normalizer(kind: str, w: int, k: int, ell: int, a: int, b: int, i: int, j: int) -> float:
    """Normalization factor at 4-index (a, b, i, j): 'smooth' is
    1/|window|; 'lower'/'upper' extremize that over radius-1 neighbors."""
    if not (1 <= a <= k and 1 <= b <= k and 1 <= i <= ell and 1 <= j <= ell):
        raise ValueError(f"index ({a},{b},{i},{j}) out of range for k={k}, ell={ell}")
    fk = _axis_factors(kind, w, k)
    fl = _axis_factors(kind, w, ell)
    return float(fk[a - 1] * fk[b - 1] * fl[i - 1] * fl[j - 1])


def _box_sum_axis(arr: np.ndarray, radius: int, axis: int) -> np.ndarray:
    """Clipped sliding-window sum of width 2*radius+1 along one axis."""
    if radius == 0:
        return arr
    length = arr.shape[axis]
    c = np.cumsum(arr, axis=axis)
    pos = np.arange(length)
    hi = np.minimum(length - 1, pos + radius)
    lo = pos - radius - 1
    upper = np.take(c, hi, axis=axis)
    lower = np.take(c, np.maximum(lo, 0), axis=axis)
    shape = [1] * arr.ndim
    shape[axis] = length
    lower = lower * (lo >= 0).astype(arr.dtype).reshape(shape)
    return upper - lower


def _box_sum(arr: np.ndarray, radius: int) -> np.ndarray:
    out = arr
    for axis in range(arr.ndim):
        out = _box_sum_axis(out, radius, axis)
    return out


def _check_radius(w: int, dims: tuple[int, ...]) -> None:
    if w < 0:
        raise ValueError(f"window radius must be >= 0, got {w}")
    if w >= min(dims):
        raise ValueError(f"window radius {w} must be < min dimension {min(dims)}")


def smooth_matrix(m: np.ndarray, w: int) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    _check_radius(w, m.shape)
    return _box_sum(m * _nu_2d("smooth", w, m.shape[0]), w)


def smooth_array(a: np.ndarray, w: int) -> np.ndarray:
    a = _as_array4(a)
    _check_radius(w, a.shape)
    return _box_sum(a * _nu_4d("smooth", w, a.shape[0], a.shape[2]), w)


def lower_array(a: np.ndarray, w: int) -> np.ndarray:
    a = _as_array4(a)
    if w < 1:
        raise ValueError(f"lower/upper arrays need w >= 1, got {w}")
    _check_radius(w + 1, a.shape)
    return _box_sum(a * _nu_4d("lower", w, a.shape[0], a.shape[2]), w - 1)


def upper_array(a: np.ndarray, w: int) -> np.ndarray:
    a = _as_array4(a)
    if w < 1:
        raise ValueError(f"lower/upper arrays need w >= 1, got {w}")
    _check_radius(w + 1, a.shape)
    return _box_sum(a * _nu_4d("upper", w, a.shape[0], a.shape[2]), w + 1)


def _as_array4(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 4 or a.shape[0] != a.shape[1] or a.shape[2] != a.shape[3]:
        raise ValueError(f"expected a k x k x ell x ell array, got shape {a.shape}")
    return a


@dataclass
class PointwiseReport:
    passed: bool
    max_excess: float  # smallest delta' that would pass (0 if inside)
    violations: list[tuple[tuple[int, int, int, int], float]] = field(default_factory=list)
    n_violations: int = 0


def check_pointwise_estimate(
    a: np.ndarray, a_hat: np.ndarray, w: int, delta: float, max_reported: int = 20
) -> PointwiseReport:
    """Check lower - delta <= a_hat <= upper + delta entrywise (closed
    bounds). Reports the violating entries and the smallest delta' that
    would pass."""
    a = _as_array4(a)
    a_hat = np.asarray(a_hat, dtype=np.float64)
    if a_hat.shape != a.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {a_hat.shape}")
    lo = lower_array(a, w)
    hi = upper_array(a, w)
    ok = (a_hat >= lo - delta) & (a_hat <= hi + delta)
    excess = np.maximum(lo - a_hat, a_hat - hi)
    max_excess = float(max(0.0, excess.max())) if excess.size else 0.0
    bad = np.argwhere(~ok)
    violations = [
        (tuple(int(x) + 1 for x in idx), float(excess[tuple(idx)]))
        for idx in bad[:max_reported]
    ]
    return PointwiseReport(
        passed=bool(ok.all()),
        max_excess=max_excess,
        violations=violations,
        n_violations=int(len(bad)),
    )


def sandwich_gap(a: np.ndarray, w: int) -> float:
    """Entrywise 1-norm of upper_array(a, w) - lower_array(a, w)."""
    return float(np.abs(upper_array(a, w) - lower_array(a, w)).sum())

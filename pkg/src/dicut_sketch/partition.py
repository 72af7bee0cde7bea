"""Threshold vectors over biases and degrees, index functions, and the
canonical width-bounded refinement.

A threshold vector t_0 < ... < t_ell partitions [t_0, t_ell] into ell
half-open classes [t_{i-1}, t_i), except that the top endpoint belongs
to class ell. Bias vectors run from -1 to +1 exactly; degree vectors use
positive integer breakpoints and exact integer comparison.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .multigraph import Multigraph


class NarrowIntervalWarning(UserWarning):
    """Refinement kept an original interval narrower than lambda/2."""


@dataclass(frozen=True)
class ThresholdVector:
    breakpoints: tuple[float, ...]
    kind: str  # "bias" | "degree"

    def __post_init__(self):
        bp = self.breakpoints
        if len(bp) < 2:
            raise ValueError("threshold vector needs at least 2 breakpoints")
        if any(b >= a for a, b in zip(bp[1:], bp[:-1])):
            raise ValueError(f"breakpoints must be strictly increasing: {bp}")
        if self.kind == "bias":
            if bp[0] != -1.0 or bp[-1] != 1.0:
                raise ValueError(f"bias vector endpoints must be -1 and +1, got {bp[0]}, {bp[-1]}")
        elif self.kind == "degree":
            if any(b != int(b) or b < 1 for b in bp):
                raise ValueError(f"degree breakpoints must be positive integers: {bp}")
        else:
            raise ValueError(f"unknown threshold kind {self.kind!r}")

    @property
    def ell(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def min_gap(self) -> float:
        bp = self.breakpoints
        return min(b - a for a, b in zip(bp[:-1], bp[1:]))


def bias_thresholds(breakpoints: Sequence[float]) -> ThresholdVector:
    return ThresholdVector(tuple(float(b) for b in breakpoints), "bias")


def degree_thresholds(breakpoints: Sequence[int]) -> ThresholdVector:
    return ThresholdVector(tuple(float(b) for b in breakpoints), "degree")


def index_of(t: ThresholdVector, x: float) -> int:
    """Class index in 1..ell of x; the top endpoint maps to ell."""
    bp = t.breakpoints
    if not bp[0] <= x <= bp[-1]:
        raise ValueError(f"value {x} outside [{bp[0]}, {bp[-1]}]")
    if x == bp[-1]:
        return t.ell
    import bisect

    return bisect.bisect_right(bp, x)


def index_of_array(t: ThresholdVector, xs: np.ndarray) -> np.ndarray:
    """Vectorized index_of. Raises if any value falls outside the range."""
    bp = np.asarray(t.breakpoints)
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size and (xs.min() < bp[0] or xs.max() > bp[-1]):
        bad = xs[(xs < bp[0]) | (xs > bp[-1])][0]
        raise ValueError(f"value {bad} outside [{bp[0]}, {bp[-1]}]")
    idx = np.searchsorted(bp, xs, side="right")
    return np.minimum(idx, t.ell).astype(np.int64)


def bias_index(g: Multigraph, t: ThresholdVector, v: int) -> Optional[int]:
    """Bias class of vertex v, or None if v is isolated."""
    from .multigraph import vertex_stats

    stats = vertex_stats(g, v)
    if stats.bias is None:
        return None
    return index_of(t, stats.bias)


def degree_index(g: Multigraph, d: ThresholdVector, v: int) -> Optional[int]:
    """Degree class of vertex v, or None if v is isolated."""
    from .multigraph import vertex_stats

    stats = vertex_stats(g, v)
    if stats.deg <= 0:
        return None
    return index_of(d, stats.deg)


def db_index(
    g: Multigraph, d: ThresholdVector, t: ThresholdVector, u: int, v: int
) -> Optional[tuple[int, int, int, int]]:
    """(degree class of u, degree class of v, bias class of u, bias class
    of v), or None if either endpoint is isolated."""
    au = degree_index(g, d, u)
    av = degree_index(g, d, v)
    if au is None or av is None:
        return None
    return (au, av, bias_index(g, t, u), bias_index(g, t, v))


def refine_partition(t: ThresholdVector, lam: float) -> ThresholdVector:
    """Canonical refinement: split each original interval of width W into
    ceil(W/lam) equal parts. Original breakpoints survive verbatim; an
    original interval narrower than lam/2 is kept as-is (warned)."""
    if lam <= 0:
        raise ValueError(f"width bound must be positive, got {lam}")
    bp = t.breakpoints
    out: list[float] = [bp[0]]
    narrow = False
    for lo, hi in zip(bp[:-1], bp[1:]):
        width = hi - lo
        if width < lam / 2:
            narrow = True
        c = max(1, math.ceil(width / lam))
        if width / c > lam:  # guard against float dust in the ceiling
            c += 1
        step = width / c
        out.extend(lo + j * step for j in range(1, c))
        out.append(hi)
    if narrow:
        warnings.warn(
            f"interval narrower than lambda/2 = {lam / 2} kept as-is",
            NarrowIntervalWarning,
            stacklevel=2,
        )
    return ThresholdVector(tuple(out), t.kind)


def refinement_parent_classes(t_orig: ThresholdVector, t_ref: ThresholdVector) -> tuple[int, ...]:
    """parent[j-1] = original class containing refined class j. Exact
    because the refinement preserves original breakpoints, so each
    refined interval's midpoint lies strictly inside one original one."""
    parents = []
    bp = t_ref.breakpoints
    for lo, hi in zip(bp[:-1], bp[1:]):
        parents.append(index_of(t_orig, (lo + hi) / 2.0))
    return tuple(parents)


def is_lambda_wide(t: ThresholdVector, lam: float) -> bool:
    """True iff every interval width lies in [lam/2, lam]."""
    bp = t.breakpoints
    return all(lam / 2 <= b - a <= lam for a, b in zip(bp[:-1], bp[1:]))

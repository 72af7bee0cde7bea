"""Directed multigraphs without self-loops and their exact statistics.

Vertices are labeled 1..n. Edges are an ordered multiset of (u, v) pairs
with nonnegative real weights; integer weights correspond to the
multigraph case used on the streaming path, general weights arise from
the blowup construction. A cut x in {0,1}^n satisfies edge (u, v) iff
x_u = 1 and x_v = 0; cut values are normalized by the total edge weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ResourceGuardError, UndefinedValueError

BRUTE_FORCE_CEILING = 24


@dataclass(frozen=True)
class VertexStats:
    deg_out: float
    deg_in: float
    deg: float
    bias: Optional[float]  # None for isolated vertices


class Multigraph:
    """Weighted directed multigraph. Edge rows are kept in insertion
    (stream) order; statistics are order-free."""

    def __init__(
        self,
        n: int,
        edges: Sequence[tuple[int, int]] | np.ndarray = (),
        weights: Sequence[float] | np.ndarray | None = None,
    ):
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {n}")
        self.n = int(n)
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.us = edges[:, 0].copy()
        self.vs = edges[:, 1].copy()
        if weights is None:
            self.ws = np.ones(len(edges), dtype=np.float64)
        else:
            self.ws = np.asarray(weights, dtype=np.float64).copy()
            if self.ws.shape != (len(edges),):
                raise ValueError("weights length must match edge count")
        if len(edges):
            if self.us.min() < 1 or self.us.max() > n or self.vs.min() < 1 or self.vs.max() > n:
                raise ValueError(f"edge endpoint out of range [1, {n}]")
            if np.any(self.us == self.vs):
                raise ValueError("self-loops are not allowed")
            if np.any(self.ws < 0):
                raise ValueError("edge weights must be nonnegative")
        self._deg_out: np.ndarray | None = None
        self._deg_in: np.ndarray | None = None

    @property
    def num_edges(self) -> int:
        """Number of stored edge rows (stream length for unit weights)."""
        return len(self.us)

    @property
    def total_weight(self) -> float:
        """m_G: the total edge weight."""
        return float(self.ws.sum())

    def edge_list(self) -> list[tuple[int, int]]:
        return list(zip(self.us.tolist(), self.vs.tolist()))

    def _degree_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Weighted (deg_out, deg_in) arrays indexed 0..n; slot 0 unused."""
        if self._deg_out is None:
            self._deg_out = np.bincount(self.us, weights=self.ws, minlength=self.n + 1)
            self._deg_in = np.bincount(self.vs, weights=self.ws, minlength=self.n + 1)
        return self._deg_out, self._deg_in

    def degrees(self) -> np.ndarray:
        out, inn = self._degree_arrays()
        return out + inn

    def biases(self) -> np.ndarray:
        """Per-vertex bias array indexed 0..n; NaN for isolated vertices."""
        out, inn = self._degree_arrays()
        deg = out + inn
        with np.errstate(invalid="ignore", divide="ignore"):
            b = (out - inn) / deg
        b[deg == 0] = np.nan
        return b

    def nonisolated(self) -> np.ndarray:
        return np.flatnonzero(self.degrees() > 0)


def vertex_stats(g: Multigraph, v: int) -> VertexStats:
    if not 1 <= v <= g.n:
        raise ValueError(f"vertex id {v} out of range [1, {g.n}]")
    out, inn = g._degree_arrays()
    do, di = float(out[v]), float(inn[v])
    deg = do + di
    bias = (do - di) / deg if deg > 0 else None
    return VertexStats(do, di, deg, bias)


def cut_value(g: Multigraph, x: Sequence[int] | np.ndarray) -> float:
    """Fraction of edge weight satisfied by cut x: edge (u, v) counts iff
    x_u = 1 and x_v = 0."""
    m = g.total_weight
    if m <= 0:
        raise UndefinedValueError("cut value undefined on a graph with no edge weight")
    x = np.asarray(x)
    if x.shape != (g.n,):
        raise ValueError(f"cut must assign all {g.n} vertices, got shape {x.shape}")
    sat = (x[g.us - 1] == 1) & (x[g.vs - 1] == 0)
    return float(g.ws[sat].sum() / m)


def _aggregate_weights(g: Multigraph) -> dict[tuple[int, int], float]:
    agg: dict[tuple[int, int], float] = {}
    for u, v, w in zip(g.us.tolist(), g.vs.tolist(), g.ws.tolist()):
        if w != 0.0:
            agg[(u, v)] = agg.get((u, v), 0.0) + w
    return agg


def max_dicut_bruteforce(g: Multigraph, ceiling: int = BRUTE_FORCE_CEILING) -> tuple[float, np.ndarray]:
    """Exact Max-DICUT value and one maximizing cut.

    Enumerates all 2^n assignments via an incremental table: vertices are
    added one at a time and the satisfied-weight of every partial
    assignment is carried along, so the total cost is O(2^n) vector
    operations rather than O(2^n * m). Ties break to the
    lexicographically smallest maximizing assignment (x_1 first).
    """
    if g.total_weight <= 0:
        raise UndefinedValueError("Max-DICUT undefined on a graph with no edge weight")
    if g.n > ceiling:
        raise ResourceGuardError(
            f"brute force refused: n = {g.n} exceeds ceiling {ceiling}"
        )
    n = g.n
    w = _aggregate_weights(g)
    # Process vertices n, n-1, ..., 1 so vertex 1 lands in the most
    # significant bit: numeric index order is then lexicographic order.
    vals = np.zeros(1, dtype=np.float64)
    for v in range(n, 0, -1):
        s_in = np.zeros(1, dtype=np.float64)
        s_out = np.zeros(1, dtype=np.float64)
        t_out = 0.0
        # Processed vertices u = n, n-1, ..., v+1 occupy bits 0, 1, ...
        for u in range(n, v, -1):
            w_in = w.get((u, v), 0.0)
            w_out = w.get((v, u), 0.0)
            s_in = np.concatenate([s_in, s_in + w_in]) if w_in else np.tile(s_in, 2)
            s_out = np.concatenate([s_out, s_out + w_out]) if w_out else np.tile(s_out, 2)
            t_out += w_out
        # New bit b for v: b=0 gains incoming-satisfied weight, b=1 gains
        # outgoing weight toward already-assigned zeros.
        vals = np.concatenate([vals + s_in, vals + (t_out - s_out)])
    best = int(np.argmax(vals))
    cut = np.array([(best >> (n - u)) & 1 for u in range(1, n + 1)], dtype=np.int64)
    return float(vals[best] / g.total_weight), cut


def sparsify(g: Multigraph, p_spar: float, rng_seed: int) -> Multigraph:
    """Keep each edge row independently with probability p_spar."""
    if not 0 < p_spar <= 1:
        raise ValueError(f"keep probability must be in (0, 1], got {p_spar}")
    if p_spar == 1.0:
        return Multigraph(g.n, np.column_stack([g.us, g.vs]), g.ws)
    rng = np.random.default_rng(rng_seed)
    keep = rng.random(g.num_edges) < p_spar
    return Multigraph(g.n, np.column_stack([g.us[keep], g.vs[keep]]), g.ws[keep])


def blowup_labels(g: Multigraph, t, w: int) -> list[tuple[int, int]]:
    """Canonical vertex labels of the blowup graph: (original vertex,
    window position) sorted by original vertex then position. The i-th
    label corresponds to blowup vertex i+1."""
    from .partition import index_of
    from .smoothing import window_1d

    deg = g.degrees()
    bias = g.biases()
    ell = len(t.breakpoints) - 1
    labels: list[tuple[int, int]] = []
    for v in range(1, g.n + 1):
        if deg[v] <= 0:
            raise ValueError(f"blowup requires no isolated vertices; vertex {v} is isolated")
        i = index_of(t, float(bias[v]))
        labels.extend((v, ip) for ip in window_1d(w, ell, i))
    return labels


def blowup_graph(g: Multigraph, t, w: int) -> Multigraph:
    """Weighted blowup: each vertex v becomes one copy per window position
    around its bias class; each edge's weight is split evenly over all
    copy pairs of its endpoints. Preserves total weight, per-copy bias,
    and the Max-DICUT value.
    """
    from .partition import index_of
    from .smoothing import window_1d

    labels = blowup_labels(g, t, w)
    pos = {lab: idx + 1 for idx, lab in enumerate(labels)}
    bias = g.biases()
    ell = len(t.breakpoints) - 1
    bind = {v: index_of(t, float(bias[v])) for v in range(1, g.n + 1)}
    wins = {v: window_1d(w, ell, bind[v]) for v in range(1, g.n + 1)}

    new_edges: list[tuple[int, int]] = []
    new_weights: list[float] = []
    for u, v, wt in zip(g.us.tolist(), g.vs.tolist(), g.ws.tolist()):
        if wt == 0.0:
            continue
        win_u, win_v = wins[u], wins[v]
        nu = 1.0 / (len(win_u) * len(win_v))
        for ip in win_u:
            for jp in win_v:
                new_edges.append((pos[(u, ip)], pos[(v, jp)]))
                new_weights.append(nu * wt)
    return Multigraph(len(labels), new_edges, new_weights)

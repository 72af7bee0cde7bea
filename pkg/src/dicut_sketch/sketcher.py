"""The streaming Max-DICUT estimator.

State is a mergeable sketch: per degree-layer a, a set of stored
vertices (hash-selected with probability ~p_a among endpoints of
edge-subsampled stream edges, kept with probability q_a) plus the stored
edges incident to them, both behind hard cutoffs. Estimation rescales
the stored edge counts into a pointwise smoothed estimate of the refined
snapshot, projects to a snapshot estimate, and applies an oblivious
algorithm minus a slack.

Determinism contract: per-edge coins are keyed by (seed, branch, layer,
stream index) and vertex storage by per-layer hash functions, so a run
is reproducible and independent of how the stream is batched or merged.
The edge-retention rule of a combined sketch is canonical: an edge is
retained iff, replaying retained edges in stream-index order, at least
one endpoint is stored with retained degree < eCutoff at that edge's
turn. Replay-pruning is compositional (pruned in a sub-sketch implies
pruned in any super-sketch), which makes combine associative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import rng
from .errors import ResourceGuardError, UndefinedValueError
from .hashfam import KWiseHash, sample_hash
from .multigraph import Multigraph, max_dicut_bruteforce
from .oblivious import ObliviousAlg, alg_to_dict, evaluate, refine_alg
from .partition import ThresholdVector, degree_thresholds, index_of_array
from .smoothing import _axis_factors, _box_sum_axis
from .snapshot import compute_snapshot, project

DEFAULT_C_SPAR = 400.0
GRID_BASE = 1.9


# ---------------------------------------------------------------------------
# Parameters


@dataclass(frozen=True)
class ParamSet:
    epsilon: float
    n: int
    m_hat: float
    scale: float
    w: int
    lam: float
    thresholds: ThresholdVector  # refined bias vector, ell classes
    ell: int
    alg: ObliviousAlg  # refined oblivious algorithm over `thresholds`
    m_min: int
    m_max: int
    k_star: int
    big_d: int
    e_cutoff: int
    e_cutoff_raised: bool
    k: int
    rho: float
    p0: float
    v_cutoff: int
    degrees: ThresholdVector  # (1, 2, 4, ..., 2^k)
    q: tuple[float, ...]  # per layer edge-sampling probability
    p_nominal: tuple[float, ...]  # per layer vertex-sampling probability
    p_range_bits: tuple[int, ...]  # hash range 2^bits after rounding 1/p up
    p_effective: tuple[float, ...]  # 2^-bits, used in the estimator rescale
    slack: float
    c_spar: float

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "n": self.n,
            "m_hat": self.m_hat,
            "scale": self.scale,
            "w": self.w,
            "lambda": self.lam,
            "thresholds": list(self.thresholds.breakpoints),
            "ell": self.ell,
            "oblivious": alg_to_dict(self.alg),
            "m_min": self.m_min,
            "m_max": self.m_max,
            "k_star": self.k_star,
            "D": self.big_d,
            "e_cutoff": self.e_cutoff,
            "e_cutoff_raised": self.e_cutoff_raised,
            "k": self.k,
            "rho": self.rho,
            "p0": self.p0,
            "v_cutoff": self.v_cutoff,
            "degree_thresholds": [int(b) for b in self.degrees.breakpoints],
            "q": list(self.q),
            "p_nominal": list(self.p_nominal),
            "p_range_bits": list(self.p_range_bits),
            "p_effective": list(self.p_effective),
            "slack": self.slack,
            "c_spar": self.c_spar,
        }


def _pow2_bits_at_least(x: float) -> int:
    """Smallest b >= 0 with 2^b >= x, exact on exact powers of two."""
    if x <= 1.0:
        return 0
    mant, exp = math.frexp(x)  # x = mant * 2^exp, mant in [0.5, 1)
    return exp - 1 if mant == 0.5 else exp


def derive_params(
    epsilon: float,
    n: int,
    m_hat: float,
    scale: float = 1.0,
    alg: Optional[ObliviousAlg] = None,
    slack: Optional[float] = None,
    c_spar: float = DEFAULT_C_SPAR,
) -> ParamSet:
    """All derived constants for one sketch instance.

    ``scale`` multiplies rho (hence p0 and vCutoff); scale = 1 is the
    analysis constant, which degenerates to p_a = 1 at desk-scale n.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if m_hat < 1:
        raise ValueError(f"need m_hat >= 1, got {m_hat}")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    if alg is None:
        from .oblivious import default_alg

        alg = default_alg()

    w = math.ceil(1.0 / epsilon)
    lam = epsilon / w
    refined = refine_alg(alg, lam)
    ell = refined.ell
    k = max(1, math.ceil(math.log2(2.0 * m_hat)))
    if k <= w + 1:
        raise ValueError(
            f"degree axis too short for the window radius: k = {k} <= w + 1 = {w + 1} "
            f"(m_hat = {m_hat}, epsilon = {epsilon}); increase m_hat or epsilon"
        )
    log2n = math.log2(n)
    k_star = max(0, math.ceil(6.0 * math.log2(log2n))) if log2n > 1 else 0
    big_d = 2 ** (k_star + w + 2)
    e_cutoff = math.ceil(log2n**7)
    e_cutoff_raised = e_cutoff < big_d
    if e_cutoff_raised:
        e_cutoff = big_d
    rho = 1000.0 * math.sqrt(big_d) * (k * ell) ** 3 / epsilon * scale
    p0 = rho / math.sqrt(m_hat)
    v_cutoff = math.ceil(10.0 * rho * math.sqrt(2.0 * m_hat))

    q = tuple(min(2.0 ** (k_star - a), 1.0) for a in range(1, k + 1))
    p_nominal = tuple(min(p0 / qa, 1.0) for qa in q)
    p_range_bits = tuple(_pow2_bits_at_least(1.0 / p) for p in p_nominal)
    p_effective = tuple(2.0**-b for b in p_range_bits)

    return ParamSet(
        epsilon=epsilon,
        n=n,
        m_hat=float(m_hat),
        scale=scale,
        w=w,
        lam=lam,
        thresholds=refined.thresholds,
        ell=ell,
        alg=refined,
        m_min=math.ceil(math.sqrt(n)),
        m_max=math.ceil(c_spar * n / epsilon**2),
        k_star=k_star,
        big_d=big_d,
        e_cutoff=e_cutoff,
        e_cutoff_raised=e_cutoff_raised,
        k=k,
        rho=rho,
        p0=p0,
        v_cutoff=v_cutoff,
        degrees=degree_thresholds([2**a for a in range(0, k + 1)]),
        q=q,
        p_nominal=p_nominal,
        p_range_bits=p_range_bits,
        p_effective=p_effective,
        slack=epsilon / 4.0 if slack is None else slack,
        c_spar=c_spar,
    )


def full_sampling_params(
    epsilon: float,
    n: int,
    m: int,
    alg: Optional[ObliviousAlg] = None,
    slack: Optional[float] = None,
) -> ParamSet:
    """Degenerate instance for exactness tests: q_a = p_a = 1 everywhere
    and cutoffs far above the graph size, so the sketch stores everything
    and the estimate collapses to the smoothed refined snapshot."""
    params = derive_params(epsilon, n, float(m), scale=1.0, alg=alg, slack=slack)
    k = params.k
    return replace(
        params,
        q=(1.0,) * k,
        p_nominal=(1.0,) * k,
        p_range_bits=(0,) * k,
        p_effective=(1.0,) * k,
        e_cutoff=max(params.e_cutoff, 4 * m + 4),
        v_cutoff=max(params.v_cutoff, 2 * n + 2),
    )


# ---------------------------------------------------------------------------
# Sketch state


@dataclass
class LayerSketch:
    """One layer's state: stored vertices (vertex -> first stream index)
    and stored edges as an (L, 3) int64 array of (index, u, v) rows
    sorted by index. ``vertices is None`` marks overflow; then edges is
    None too."""

    vertices: Optional[dict[int, int]]
    edges: Optional[np.ndarray]
    overflow_at: Optional[int] = None

    @property
    def is_overflow(self) -> bool:
        return self.vertices is None

    @staticmethod
    def empty() -> "LayerSketch":
        return LayerSketch({}, np.zeros((0, 3), dtype=np.int64))

    @staticmethod
    def overflowed(at: Optional[int]) -> "LayerSketch":
        return LayerSketch(None, None, at)


@dataclass
class FullSketch:
    m: int
    layers: list[LayerSketch]


def empty_sketch(params: ParamSet) -> FullSketch:
    return FullSketch(0, [LayerSketch.empty() for _ in range(params.k)])


def layer_hashes(params: ParamSet, seed: int, namespace: str = "main") -> list[KWiseHash]:
    """Per-layer 4-wise independent vertex hashes; a vertex is stored in
    layer a iff it hashes to bucket 0 (probability p_effective[a])."""
    return [
        sample_hash(4, params.n, 1 << params.p_range_bits[a], rng.child_seed(seed, f"{namespace}/vertex-hash", a + 1))
        for a in range(params.k)
    ]


def _coin_key(seed: int, layer: int, namespace: str) -> int:
    return rng.derive_key(seed, f"{namespace}/edge-coin", layer)


def sketch_edge(
    edge: tuple[int, int],
    stream_index: int,
    params: ParamSet,
    hashes: Sequence[KWiseHash],
    seed: int,
    namespace: str = "main",
) -> FullSketch:
    """Single-edge sketch: per layer, with probability q_a store the
    endpoints that hash to bucket 0 and, if any did, the edge itself."""
    u, v = edge
    if u == v:
        raise ValueError(f"self-loop {u} -> {v} not allowed")
    layers = []
    for a in range(params.k):
        if params.q[a] < 1.0:
            coin = rng.uniform(_coin_key(seed, a + 1, namespace), stream_index)
            if coin >= params.q[a]:
                layers.append(LayerSketch.empty())
                continue
        stored = {x: stream_index for x in (u, v) if hashes[a].eval(x) == 0}
        if stored:
            edges = np.array([[stream_index, u, v]], dtype=np.int64)
        else:
            edges = np.zeros((0, 3), dtype=np.int64)
        layers.append(LayerSketch(stored, edges))
    return FullSketch(1, layers)


def _replay_prune(edges: np.ndarray, vertices: dict[int, int], e_cutoff: int) -> np.ndarray:
    """Canonical retention: replay edges in stream-index order, keeping an
    edge iff some endpoint is stored with retained degree < e_cutoff."""
    if len(edges) == 0:
        return edges
    # Fast path: if no vertex can reach the cutoff, nothing can be pruned.
    counts: dict[int, int] = {}
    for u in edges[:, 1].tolist():
        counts[u] = counts.get(u, 0) + 1
    for v in edges[:, 2].tolist():
        counts[v] = counts.get(v, 0) + 1
    if max(counts.values()) < e_cutoff:
        return edges
    deg: dict[int, int] = {}
    keep = np.zeros(len(edges), dtype=bool)
    for row, (u, v) in enumerate(zip(edges[:, 1].tolist(), edges[:, 2].tolist())):
        du = deg.get(u, 0)
        dv = deg.get(v, 0)
        if (u in vertices and du < e_cutoff) or (v in vertices and dv < e_cutoff):
            keep[row] = True
            deg[u] = du + 1
            deg[v] = dv + 1
    return edges[keep]


def _overflow_trigger(vertices: dict[int, int], v_cutoff: int) -> int:
    """Stream index at which the (v_cutoff + 1)-th distinct vertex arrived."""
    firsts = sorted(vertices.values())
    return int(firsts[v_cutoff])


def combine(s1: FullSketch, s2: FullSketch, params: ParamSet) -> FullSketch:
    """Merge two sketches; commutative and associative."""
    if len(s1.layers) != params.k or len(s2.layers) != params.k:
        raise ValueError("sketch layer count does not match params")
    layers = []
    for a in range(params.k):
        l1, l2 = s1.layers[a], s2.layers[a]
        if l1.is_overflow or l2.is_overflow:
            triggers = [l.overflow_at for l in (l1, l2) if l.is_overflow and l.overflow_at is not None]
            layers.append(LayerSketch.overflowed(min(triggers) if triggers else None))
            continue
        merged = dict(l1.vertices)
        for vtx, first in l2.vertices.items():
            if vtx not in merged or first < merged[vtx]:
                merged[vtx] = first
        if len(merged) > params.v_cutoff:
            layers.append(LayerSketch.overflowed(_overflow_trigger(merged, params.v_cutoff)))
            continue
        edges = np.concatenate([l1.edges, l2.edges])
        edges = edges[np.argsort(edges[:, 0], kind="stable")]
        layers.append(LayerSketch(merged, _replay_prune(edges, merged, params.e_cutoff)))
    return FullSketch(s1.m + s2.m, layers)


def sketch_stream(
    n: int,
    us: np.ndarray,
    vs: np.ndarray,
    indices: np.ndarray,
    params: ParamSet,
    seed: int,
    namespace: str = "main",
    hashes: Optional[Sequence[KWiseHash]] = None,
) -> FullSketch:
    """Sketch a whole (sub)stream at once. Equals folding sketch_edge
    through combine, but vectorized."""
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    if hashes is None:
        hashes = layer_hashes(params, seed, namespace)
    touched = np.unique(np.concatenate([us, vs])) if len(us) else np.zeros(0, dtype=np.int64)
    layers = []
    for a in range(params.k):
        if params.q[a] < 1.0 and len(us):
            coins = rng.uniforms(_coin_key(seed, a + 1, namespace), indices)
            kept = coins < params.q[a]
        else:
            kept = np.ones(len(us), dtype=bool)
        stored_lookup = np.zeros(n + 1, dtype=bool)
        if len(touched):
            hv = hashes[a].eval_array(touched) == 0
            stored_lookup[touched[hv]] = True
        su = stored_lookup[us] & kept
        sv = stored_lookup[vs] & kept
        cand_verts = np.concatenate([us[su], vs[sv]])
        cand_idx = np.concatenate([indices[su], indices[sv]])
        order = np.argsort(cand_idx, kind="stable")
        verts_sorted = cand_verts[order]
        uniq, first_pos = np.unique(verts_sorted, return_index=True)
        vertices = dict(zip(uniq.tolist(), cand_idx[order][first_pos].tolist()))
        if len(vertices) > params.v_cutoff:
            layers.append(LayerSketch.overflowed(_overflow_trigger(vertices, params.v_cutoff)))
            continue
        keep_edge = kept & (stored_lookup[us] | stored_lookup[vs])
        edges = np.column_stack([indices[keep_edge], us[keep_edge], vs[keep_edge]])
        edges = edges[np.argsort(edges[:, 0], kind="stable")]
        if len(edges):
            occ = np.bincount(np.concatenate([edges[:, 1], edges[:, 2]]))
            if occ.max() >= params.e_cutoff:
                edges = _replay_prune(edges, vertices, params.e_cutoff)
        layers.append(LayerSketch(vertices, edges))
    return FullSketch(len(us), layers)


# ---------------------------------------------------------------------------
# Estimate extraction


@dataclass
class EstimateReport:
    overflow: bool
    overflowed_layers: list[int]
    a_hat: Optional[np.ndarray]
    m_hat_matrix: Optional[np.ndarray]
    v_hat: Optional[float]
    per_layer: list[dict]
    m: int
    params: ParamSet
    seeds: dict = field(default_factory=dict)


def _layer_stats(sketch: FullSketch) -> list[dict]:
    out = []
    for a, layer in enumerate(sketch.layers, start=1):
        if layer.is_overflow:
            out.append(
                {
                    "layer": a,
                    "overflow": True,
                    "overflow_at": layer.overflow_at,
                    "v_stored": None,
                    "e_stored": None,
                }
            )
        else:
            out.append(
                {
                    "layer": a,
                    "overflow": False,
                    "overflow_at": None,
                    "v_stored": len(layer.vertices),
                    "e_stored": int(len(layer.edges)),
                }
            )
    return out


def finalize(sketch: FullSketch, params: ParamSet) -> EstimateReport:
    """Estimate extraction. Returns the overflow outcome if any layer
    overflowed, else the refined-snapshot estimate, its projection, and
    the oblivious value minus the slack (clamped to [0, 1])."""
    stats = _layer_stats(sketch)
    overflowed = [s["layer"] for s in stats if s["overflow"]]
    if overflowed:
        return EstimateReport(True, overflowed, None, None, None, stats, sketch.m, params)

    k, ell, w = params.k, params.ell, params.w
    n = params.n
    d_bp = np.asarray(params.degrees.breakpoints)
    d_top = float(d_bp[-1])
    sk = _axis_factors("smooth", w, k)  # per-position 1/window-size, k axis
    sl = _axis_factors("smooth", w, ell)

    # Per-layer vertex statistics measured from the stored edges.
    counted = np.zeros((k, n + 1), dtype=bool)
    dind = np.zeros((k, n + 1), dtype=np.int64)
    bind = np.zeros((k, n + 1), dtype=np.int64)
    for a in range(k):
        layer = sketch.layers[a]
        stats[a]["v_counted"] = 0
        if len(layer.edges) == 0 or not layer.vertices:
            continue
        eu, ev = layer.edges[:, 1], layer.edges[:, 2]
        out_deg = np.bincount(eu, minlength=n + 1).astype(np.float64)
        in_deg = np.bincount(ev, minlength=n + 1).astype(np.float64)
        deg = out_deg + in_deg
        stored = np.zeros(n + 1, dtype=bool)
        stored[np.fromiter(layer.vertices.keys(), dtype=np.int64, count=len(layer.vertices))] = True
        live = stored & (deg > 0) & (deg < params.e_cutoff)
        if not live.any():
            continue
        d_est = np.minimum(deg[live] / params.q[a], d_top)
        dind[a, live] = index_of_array(params.degrees, d_est)
        bias = (out_deg[live] - in_deg[live]) / deg[live]
        bind[a, live] = index_of_array(params.thresholds, bias)
        counted[a, live] = True
        stats[a]["v_counted"] = int(live.sum())

    a_est = np.zeros((k, k, ell, ell), dtype=np.float64)
    for a in range(k):
        for b in range(k):
            c = min(a, b)
            edges = sketch.layers[c].edges
            if len(edges) == 0:
                continue
            eu, ev = edges[:, 1], edges[:, 2]
            mask = (
                counted[a, eu]
                & counted[b, ev]
                & (np.abs(dind[a, eu] - (a + 1)) <= w)
                & (np.abs(dind[b, ev] - (b + 1)) <= w)
            )
            if not mask.any():
                continue
            du = dind[a, eu[mask]] - 1
            dv = dind[b, ev[mask]] - 1
            bu = bind[a, eu[mask]] - 1
            bv = bind[b, ev[mask]] - 1
            wts = sk[du] * sk[dv] * sl[bu] * sl[bv]
            hist = np.bincount(bu * ell + bv, weights=wts, minlength=ell * ell).reshape(ell, ell)
            # An edge with stored bias classes (p, q) is counted at every
            # (i, j) with p, q inside the radius-w windows of i, j.
            a_est[a, b] = _box_sum_axis(_box_sum_axis(hist, w, 0), w, 1)

    p_eff = np.asarray(params.p_effective)
    q_arr = np.asarray(params.q)
    q_min = np.minimum.outer(q_arr, q_arr)
    denom = max(sketch.m, 1) * q_min * np.multiply.outer(p_eff, p_eff)
    a_hat = a_est / denom[:, :, None, None]

    m_hat_matrix = project(a_hat)
    v_raw = evaluate(params.alg, m_hat_matrix) - params.slack
    v_hat = float(min(1.0, max(0.0, v_raw)))

    # Space accounting (provable bounds from the retention rule).
    for a, layer in enumerate(sketch.layers):
        assert len(layer.vertices) <= params.v_cutoff
        assert len(layer.edges) <= params.v_cutoff * (params.e_cutoff + 1)

    return EstimateReport(False, [], a_hat, m_hat_matrix, v_hat, stats, sketch.m, params)


def space_report(sketch: FullSketch, params: ParamSet) -> dict:
    """Per-layer storage counts with the cutoff bounds asserted."""
    layers = []
    for a, layer in enumerate(sketch.layers, start=1):
        if layer.is_overflow:
            layers.append({"layer": a, "overflow": True, "overflow_at": layer.overflow_at})
            continue
        nv, ne = len(layer.vertices), int(len(layer.edges))
        entry = {
            "layer": a,
            "overflow": False,
            "vertices": nv,
            "edges": ne,
            "v_cutoff": params.v_cutoff,
            "edge_bound": params.v_cutoff * (params.e_cutoff + 1),
        }
        assert nv <= params.v_cutoff, f"layer {a}: {nv} vertices > vCutoff {params.v_cutoff}"
        assert ne <= params.v_cutoff * (params.e_cutoff + 1), f"layer {a}: edge bound violated"
        layers.append(entry)
    return {"m": sketch.m, "layers": layers}


# ---------------------------------------------------------------------------
# Full wrapper: buffer, m-hat grid, sparsified sub-streams


@dataclass
class RunReport:
    outcome: str  # estimate | exact | snapshot-lower-bound | overflow
    v_hat: Optional[float]
    m: int
    n: int
    selected_t: Optional[int]
    selected_m_hat: Optional[float]
    params: Optional[dict]
    per_layer: list
    overflow: list
    branches: list
    seeds: dict
    warnings: list
    config: dict

    def to_json_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "v_hat": self.v_hat,
            "m": self.m,
            "n": self.n,
            "selected_t": self.selected_t,
            "selected_m_hat": self.selected_m_hat,
            "params": self.params,
            "per_layer": self.per_layer,
            "overflow": self.overflow,
            "branches": self.branches,
            "seeds": self.seeds,
            "warnings": self.warnings,
            "config": self.config,
        }


def _grid_range(m_min: int, n: int, mbound_exp: float) -> tuple[int, int]:
    """t range of the 1.9^t estimate grid. Starts at floor (not ceil) of
    log_1.9(m_min) so every m > m_min has a grid point with
    m_hat <= m < 1.9 m_hat."""
    t_lo = math.floor(math.log(m_min) / math.log(GRID_BASE)) if m_min > 1 else 0
    t_hi = math.ceil(mbound_exp * math.log(n) / math.log(GRID_BASE))
    return t_lo, max(t_lo, t_hi)


def run_stream(
    n: int,
    edges: Sequence[tuple[int, int]],
    epsilon: float,
    alg: Optional[ObliviousAlg] = None,
    seed: int = 0,
    scale: float = 1.0,
    slack: Optional[float] = None,
    mbound_exp: float = 2.0,
    c_spar: float = DEFAULT_C_SPAR,
    brute_force_ceiling: int = 24,
) -> RunReport:
    """End-to-end estimator: exact edge counter, buffer of the first
    m_min edges, and one sparsified sketch per grid estimate m_hat(t) =
    1.9^t; afterwards either solve the buffered instance exactly (m <=
    m_min) or return the finalize output of the t with
    m_hat(t) <= m < 1.9 m_hat(t)."""
    if alg is None:
        from .oblivious import default_alg

        alg = default_alg()
    edges = list(edges)
    m = len(edges)
    m_min = math.ceil(math.sqrt(n))
    warnings_list: list[str] = []
    config = {
        "epsilon": epsilon,
        "seed": seed,
        "scale": scale,
        "slack": slack,
        "mbound_exp": mbound_exp,
        "c_spar": c_spar,
        "oblivious": alg_to_dict(alg),
    }

    if m <= m_min:
        return _buffer_path(n, edges, epsilon, alg, m_min, brute_force_ceiling, warnings_list, config, seed)

    us = np.array([e[0] for e in edges], dtype=np.int64)
    vs = np.array([e[1] for e in edges], dtype=np.int64)
    indices = np.arange(m, dtype=np.int64)
    m_max = math.ceil(c_spar * n / epsilon**2)

    t_lo, t_hi = _grid_range(m_min, n, mbound_exp)
    branches = []
    sketches: dict[int, tuple[FullSketch, ParamSet]] = {}
    for t in range(t_lo, t_hi + 1):
        m_hat = GRID_BASE**t
        m_hat_spar = min(float(m_max), m_hat)
        p_spar = m_hat_spar / m_hat
        info: dict = {"t": t, "m_hat": m_hat, "m_hat_spar": m_hat_spar, "p_spar": p_spar}
        try:
            params_t = derive_params(epsilon, n, m_hat_spar, scale, alg, slack, c_spar)
        except ValueError as exc:
            info["skipped"] = str(exc)
            branches.append(info)
            continue
        if p_spar < 1.0:
            kept = rng.uniforms(rng.derive_key(seed, f"branch-{t}/sparsify"), indices) < p_spar
        else:
            kept = np.ones(m, dtype=bool)
        info["kept_edges"] = int(kept.sum())
        sketch = sketch_stream(
            n, us[kept], vs[kept], indices[kept], params_t, seed, namespace=f"branch-{t}"
        )
        info["overflowed_layers"] = [
            a + 1 for a, layer in enumerate(sketch.layers) if layer.is_overflow
        ]
        branches.append(info)
        sketches[t] = (sketch, params_t)

    overflow_census = [
        {"t": b["t"], "m_hat": b["m_hat"], "overflowed_layers": b.get("overflowed_layers", [])}
        for b in branches
        if b.get("overflowed_layers")
    ]

    selected_t = None
    for b in branches:
        if "skipped" in b:
            continue
        if b["m_hat"] <= m < GRID_BASE * b["m_hat"]:
            selected_t = b["t"]
            break
    if selected_t is None:
        usable = [b["t"] for b in branches if "skipped" not in b]
        if not usable:
            raise ValueError("no usable estimate branch; epsilon too small for this n")
        selected_t = max(usable)
        warnings_list.append(
            f"m = {m} exceeds the assumed bound n^{mbound_exp} = {n**mbound_exp:.0f}; "
            f"using the top grid branch t = {selected_t}"
        )

    sketch, params_sel = sketches[selected_t]
    report = finalize(sketch, params_sel)
    seeds = {"master": seed, "selected_namespace": f"branch-{selected_t}"}
    if report.overflow:
        return RunReport(
            outcome="overflow",
            v_hat=None,
            m=m,
            n=n,
            selected_t=selected_t,
            selected_m_hat=GRID_BASE**selected_t,
            params=params_sel.to_dict(),
            per_layer=report.per_layer,
            overflow=overflow_census,
            branches=branches,
            seeds=seeds,
            warnings=warnings_list,
            config=config,
        )
    return RunReport(
        outcome="estimate",
        v_hat=report.v_hat,
        m=m,
        n=n,
        selected_t=selected_t,
        selected_m_hat=GRID_BASE**selected_t,
        params=params_sel.to_dict(),
        per_layer=report.per_layer,
        overflow=overflow_census,
        branches=branches,
        seeds=seeds,
        warnings=warnings_list,
        config=config,
    )


def _buffer_path(
    n: int,
    edges: list[tuple[int, int]],
    epsilon: float,
    alg: ObliviousAlg,
    m_min: int,
    ceiling: int,
    warnings_list: list[str],
    config: dict,
    seed: int,
) -> RunReport:
    """m <= m_min: the buffered graph is the whole input; solve it."""
    if not edges:
        warnings_list.append("empty stream: value reported as 0")
        return RunReport(
            outcome="exact",
            v_hat=0.0,
            m=0,
            n=n,
            selected_t=None,
            selected_m_hat=None,
            params=None,
            per_layer=[],
            overflow=[],
            branches=[],
            seeds={"master": seed},
            warnings=warnings_list,
            config=config,
        )
    g = Multigraph(n, edges)
    noniso = g.nonisolated()
    if len(noniso) <= ceiling:
        # Exact value depends only on the nonisolated induced subgraph.
        relabel = {int(v): i + 1 for i, v in enumerate(noniso)}
        sub = Multigraph(len(noniso), [(relabel[u], relabel[v]) for u, v in edges])
        value, _ = max_dicut_bruteforce(sub, ceiling)
        outcome = "exact"
    else:
        value = evaluate(alg, compute_snapshot(g, alg.thresholds))
        outcome = "snapshot-lower-bound"
        warnings_list.append(
            f"buffered graph has {len(noniso)} nonisolated vertices > brute-force "
            f"ceiling {ceiling}; reporting the oblivious value on the exact snapshot "
            "(a lower bound on the optimum)"
        )
    return RunReport(
        outcome=outcome,
        v_hat=float(value),
        m=len(edges),
        n=n,
        selected_t=None,
        selected_m_hat=None,
        params=None,
        per_layer=[],
        overflow=[],
        branches=[],
        seeds={"master": seed},
        warnings=warnings_list,
        config=config,
    )

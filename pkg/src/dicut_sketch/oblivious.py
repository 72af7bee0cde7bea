"""Oblivious snapshot algorithms: linear functionals of the snapshot that
never exceed the true Max-DICUT value.

An algorithm is a bias threshold vector plus one probability per bias
class; it assigns each nonisolated vertex to 1 independently with the
probability of its class, and its value on a snapshot M,
sum_ij r_i (1 - r_j) M(i, j), equals the expected cut value of that
random assignment (hence is a lower bound on the optimum). The
probability table achieving the known 0.483-approximation is not
reproduced here; instances are loaded from JSON config and the shipped
default is an explicitly-labeled stand-in step function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .multigraph import Multigraph
from .partition import (
    ThresholdVector,
    bias_thresholds,
    index_of_array,
    refine_partition,
    refinement_parent_classes,
)

# Stand-in table: symmetric two-class step function. NOT the published
# optimal oblivious table; supply that via --oblivious-config.
DEFAULT_THRESHOLDS = (-1.0, 0.0, 1.0)
DEFAULT_PROBABILITIES = (0.2, 0.8)


@dataclass(frozen=True)
class ObliviousAlg:
    thresholds: ThresholdVector
    probabilities: tuple[float, ...]

    def __post_init__(self):
        if self.thresholds.kind != "bias":
            raise ValueError("oblivious algorithm needs a bias threshold vector")
        if len(self.probabilities) != self.thresholds.ell:
            raise ValueError(
                f"need {self.thresholds.ell} probabilities, got {len(self.probabilities)}"
            )
        if any(not 0.0 <= r <= 1.0 for r in self.probabilities):
            raise ValueError(f"probabilities must lie in [0, 1]: {self.probabilities}")

    @property
    def ell(self) -> int:
        return self.thresholds.ell


def default_alg() -> ObliviousAlg:
    return ObliviousAlg(bias_thresholds(DEFAULT_THRESHOLDS), DEFAULT_PROBABILITIES)


def load_config(path: str) -> ObliviousAlg:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return alg_from_dict(data)


def alg_from_dict(data: dict) -> ObliviousAlg:
    try:
        thresholds = data["thresholds"]
        probabilities = data["probabilities"]
    except KeyError as exc:
        raise ValueError(f"oblivious config missing key {exc}") from None
    return ObliviousAlg(bias_thresholds(thresholds), tuple(float(r) for r in probabilities))


def alg_to_dict(alg: ObliviousAlg) -> dict:
    return {
        "thresholds": list(alg.thresholds.breakpoints),
        "probabilities": list(alg.probabilities),
    }


def evaluate(alg: ObliviousAlg, m: np.ndarray) -> float:
    """sum_ij r_i (1 - r_j) M(i, j)."""
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (alg.ell, alg.ell):
        raise ValueError(f"snapshot shape {m.shape} does not match ell = {alg.ell}")
    r = np.asarray(alg.probabilities)
    return float(r @ m @ (1.0 - r))


def oblivious_sample(alg: ObliviousAlg, g: Multigraph, rng_seed: int) -> np.ndarray:
    """One independent per-vertex assignment; isolated vertices get 0."""
    rng = np.random.default_rng(rng_seed)
    bias = g.biases()
    noniso = g.nonisolated()
    probs = np.zeros(g.n + 1)
    r = np.asarray(alg.probabilities)
    if noniso.size:
        probs[noniso] = r[index_of_array(alg.thresholds, bias[noniso]) - 1]
    draws = rng.random(g.n + 1)
    cut = (draws < probs).astype(np.int64)
    return cut[1:]


def refine_alg(alg: ObliviousAlg, lam: float) -> ObliviousAlg:
    """Refine the thresholds to width <= lam; each refined class inherits
    its parent class's probability, so the value on any graph's snapshot
    is unchanged."""
    t_ref = refine_partition(alg.thresholds, lam)
    if t_ref.breakpoints == alg.thresholds.breakpoints:
        return alg
    parents = refinement_parent_classes(alg.thresholds, t_ref)
    probs = tuple(alg.probabilities[p - 1] for p in parents)
    return ObliviousAlg(t_ref, probs)


def check_continuity(alg: ObliviousAlg, m: np.ndarray, n: np.ndarray) -> bool:
    """|A(M) - A(N)| <= ||M - N||_1; holds for any coefficient table in
    [0, 1], so this is an assertable sanity check."""
    m = np.asarray(m, dtype=np.float64)
    n = np.asarray(n, dtype=np.float64)
    if m.shape != n.shape:
        raise ValueError(f"shape mismatch: {m.shape} vs {n.shape}")
    return abs(evaluate(alg, m) - evaluate(alg, n)) <= np.abs(m - n).sum() + 1e-12

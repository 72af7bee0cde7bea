"""Stateless counter-based randomness for the streaming path.

Per-edge coins are a pure function of (master seed, purpose tag, layer,
stream index), so sketching is reproducible and independent of batching
or merge order: any partition of the stream into segments yields the
same coins for the same edges.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_M1 = np.uint64(0xFF51AFD7ED558CCD)
_M2 = np.uint64(0xC4CEB9FE1A85EC53)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def tag64(text: str) -> int:
    """Stable 64-bit tag for a purpose string."""
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big")


def _mix64(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64)
    x ^= x >> np.uint64(33)
    x *= _M1
    x ^= x >> np.uint64(33)
    x *= _M2
    x ^= x >> np.uint64(33)
    return x


def derive_key(seed: int, purpose: str, layer: int = 0) -> int:
    """64-bit stream key for (seed, purpose, layer)."""
    mask = 0xFFFFFFFFFFFFFFFF
    golden = 0x9E3779B97F4A7C15
    acc = 0
    for part in (seed & mask, tag64(purpose), layer & mask):
        acc = int(_mix64(np.array([((acc + golden) & mask) ^ part], dtype=np.uint64))[0])
    return acc


def uniforms(key: int, indices: np.ndarray) -> np.ndarray:
    """U[0,1) doubles keyed by (key, index); vectorized and stateless."""
    idx = np.asarray(indices, dtype=np.uint64)
    mixed = _mix64(np.uint64(key) ^ (idx + np.uint64(1)) * _GOLDEN)
    return (mixed >> np.uint64(11)).astype(np.float64) * (2.0**-53)


def uniform(key: int, index: int) -> float:
    return float(uniforms(key, np.array([index], dtype=np.uint64))[0])


def child_seed(seed: int, purpose: str, layer: int = 0) -> int:
    """Derived integer seed for numpy generators (hash sampling etc.)."""
    return derive_key(seed, purpose, layer)

"""k-wise independent hash families [n] -> [m] with m a power of two.

Construction: degree-(k-1) polynomials with uniform coefficients over
the binary extension field GF(2^s), s = ceil(log2 max(n, m)), with the
output truncated to the low log2(m) bits. Truncation of a uniform field
element is uniform and preserves k-wise independence. Irreducible
moduli are found at first use by a Rabin irreducibility search over
low-weight candidates and cached.

Buckets are 0-based: eval returns values in {0, ..., m-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np


# ---------------------------------------------------------------------------
# GF(2)[x] arithmetic on Python ints (bit i = coefficient of x^i)


def _poly_degree(f: int) -> int:
    return f.bit_length() - 1


def _poly_mulmod(a: int, b: int, f: int) -> int:
    """Carry-less multiply of a and b reduced modulo f."""
    res = 0
    while b:
        if b & 1:
            res ^= a
        b >>= 1
        a <<= 1
        if a.bit_length() == f.bit_length():
            a ^= f
    return res


def _poly_powmod_x(e: int, f: int) -> int:
    """x^e mod f via square-and-multiply."""
    result = 1
    base = 2  # the polynomial x
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f)
        base = _poly_mulmod(base, base, f)
        e >>= 1
    return result


def _poly_gcd(a: int, b: int) -> int:
    while b:
        if _poly_degree(a) < _poly_degree(b):
            a, b = b, a
        while a.bit_length() >= b.bit_length() and a:
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return a


def _prime_factors(s: int) -> list[int]:
    out = []
    p = 2
    while p * p <= s:
        if s % p == 0:
            out.append(p)
            while s % p == 0:
                s //= p
        p += 1
    if s > 1:
        out.append(s)
    return out


def _is_irreducible(f: int, s: int) -> bool:
    """Rabin's test: x^(2^s) == x mod f, and gcd(x^(2^(s/r)) - x, f) = 1
    for every prime r dividing s."""
    if _poly_powmod_x(1 << s, f) != 2:
        return False
    for r in _prime_factors(s):
        h = _poly_powmod_x(1 << (s // r), f) ^ 2
        if _poly_gcd(f, h) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def irreducible_poly(s: int) -> int:
    """Lowest-weight irreducible polynomial of degree s over GF(2)."""
    if s < 1:
        raise ValueError(f"degree must be >= 1, got {s}")
    if s == 1:
        return 0b11  # x + 1
    base = 1 << s
    for t in range(1, s):
        f = base | (1 << t) | 1
        if _is_irreducible(f, s):
            return f
    for taps in combinations(range(1, s), 3):
        f = base | 1
        for t in taps:
            f |= 1 << t
        if _is_irreducible(f, s):
            return f
    raise RuntimeError(f"no irreducible tri/pentanomial of degree {s} found")


# ---------------------------------------------------------------------------
# Vectorized GF(2^s) arithmetic on uint64 arrays (s <= 31)


def _gf_mul_vec(x: np.ndarray, acc: np.ndarray, f: int, s: int) -> np.ndarray:
    """Elementwise product of two arrays of field elements."""
    res = np.zeros_like(acc)
    for bit in range(s):
        mask = ((x >> np.uint64(bit)) & np.uint64(1)).astype(bool)
        res[mask] ^= acc[mask] << np.uint64(bit)
    # reduce degree 2s-2 .. s down to < s
    for d in range(2 * s - 2, s - 1, -1):
        mask = ((res >> np.uint64(d)) & np.uint64(1)).astype(bool)
        res[mask] ^= np.uint64(f << (d - s))
    return res


@dataclass(frozen=True)
class KWiseHash:
    """A sampled member of a k-wise independent family [n] -> [m]."""

    independence: int
    domain: int
    range_size: int
    field_bits: int
    modulus: int
    coefficients: tuple[int, ...]  # degree k-1 polynomial, constant first

    @property
    def seed_bits(self) -> int:
        """Stored randomness: k field elements of s bits each; with
        s = ceil(log2 max(n, m)) this is <= 2k(log n + log m)."""
        return self.independence * self.field_bits

    def eval(self, x: int) -> int:
        if not 1 <= x <= self.domain:
            raise ValueError(f"input {x} outside [1, {self.domain}]")
        return int(self.eval_array(np.array([x], dtype=np.int64))[0])

    def eval_array(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation; returns buckets in {0, ..., m-1}."""
        xs = np.asarray(xs)
        if xs.size and (xs.min() < 1 or xs.max() > self.domain):
            raise ValueError(f"input outside [1, {self.domain}]")
        pts = (xs - 1).astype(np.uint64)  # injective into the field
        s, f = self.field_bits, self.modulus
        acc = np.full(pts.shape, self.coefficients[-1], dtype=np.uint64)
        for c in reversed(self.coefficients[:-1]):
            acc = _gf_mul_vec(pts, acc, f, s)
            acc ^= np.uint64(c)
        return (acc & np.uint64(self.range_size - 1)).astype(np.int64)


def sample_hash(k: int, n: int, m: int, rng_seed) -> KWiseHash:
    """Draw a uniform member of the k-wise independent family.

    ``rng_seed`` may be anything ``numpy.random.default_rng`` accepts.
    """
    if k < 1:
        raise ValueError(f"independence must be >= 1, got {k}")
    if n < 1:
        raise ValueError(f"domain size must be >= 1, got {n}")
    if m < 1 or (m & (m - 1)) != 0:
        raise ValueError(f"range size must be a power of two, got {m}")
    s = max(1, math.ceil(math.log2(max(n, m))))
    if s > 31:
        raise ValueError(f"domain/range too large: need field degree {s} > 31")
    rng = np.random.default_rng(rng_seed)
    coeffs = tuple(int(c) for c in rng.integers(0, 1 << s, size=k, dtype=np.uint64))
    return KWiseHash(
        independence=k,
        domain=n,
        range_size=m,
        field_bits=s,
        modulus=irreducible_poly(s),
        coefficients=coeffs,
    )

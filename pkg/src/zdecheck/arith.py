"""Prime tables via numpy sieves."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = ["is_prime_array", "primes_up_to", "von_mangoldt_array", "prime_powers_up_to", "mobius"]


@lru_cache(maxsize=8)
def is_prime_array(n: int) -> np.ndarray:
    """Boolean array ``a`` with ``a[k]`` true iff ``k`` is prime, for ``0 <= k <= n``."""
    a = np.ones(max(n + 1, 2), dtype=bool)
    a[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if a[p]:
            a[p * p::p] = False
    a.setflags(write=False)
    return a[: n + 1]


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(is_prime_array(n)).astype(np.int64)


def prime_powers_up_to(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Sorted prime powers ``p^k <= n`` together with their base prime ``p``."""
    ps = primes_up_to(n)
    pows, bases = [], []
    for p in ps.tolist():
        x = p
        while x <= n:
            pows.append(x)
            bases.append(p)
            x *= p
    order = np.argsort(pows, kind="stable")
    return np.asarray(pows, dtype=np.int64)[order], np.asarray(bases, dtype=np.int64)[order]


def von_mangoldt_array(n: int) -> np.ndarray:
    """``Lambda(k)`` for ``0 <= k <= n`` as float64."""
    out = np.zeros(n + 1)
    pows, bases = prime_powers_up_to(n)
    out[pows] = np.log(bases.astype(float))
    return out


def mobius(n: int) -> int:
    if n == 1:
        return 1
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    return -result if m > 1 else result

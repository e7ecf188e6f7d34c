"""Seeded, byte-stable randomness for sampling and dataset splitting.

SplitMix64 (Steele, Lea & Flood 2014) drives a Fisher-Yates shuffle with
rejection sampling, so identical seeds give identical draws on every
platform and Python version. The stdlib generator is deliberately not
used: its shuffle internals are not guaranteed stable across versions.
"""
from __future__ import annotations

from typing import Sequence, TypeVar

from .errors import ValidationError

_MASK = (1 << 64) - 1

T = TypeVar("T")


class SplitMix64:
    """Minimal 64-bit generator with a one-word state."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValidationError(f"seed must be a non-negative integer, got {seed}")
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4B7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), unbiased via rejection."""
        if bound <= 0:
            raise ValidationError(f"bound must be positive, got {bound}")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound


def fisher_yates(items: Sequence[T], rng: SplitMix64, k: int | None = None) -> list[T]:
    """First ``k`` elements of a Fisher-Yates shuffle (full shuffle if k is None)."""
    pool = list(items)
    n = len(pool)
    steps = n if k is None else min(k, n)
    for i in range(steps):
        if i == n - 1:
            break
        j = i + rng.below(n - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[: n if k is None else k]

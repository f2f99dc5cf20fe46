"""Seeded deterministic random generator (splitmix64).

Every randomized step in the platform (k-means++ seeding, the mock story
provider, the synthetic corpus generator) draws from this generator so that
identical seeds reproduce identical bytes on any machine.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 PRNG; tiny, fast, and stable across platforms."""

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n

    def choice(self, items):
        return items[self.next_below(len(items))]

    def sample(self, items, k: int) -> list:
        """k distinct items, order of first appearance in the draw."""
        if k > len(items):
            raise ValueError("sample larger than population")
        pool = list(items)
        picked = []
        for _ in range(k):
            picked.append(pool.pop(self.next_below(len(pool))))
        return picked

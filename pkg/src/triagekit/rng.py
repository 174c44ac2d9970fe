"""Deterministic 64-bit PRNG shared by every randomized component.

All shuffles, dropout masks, weight initializations and negative-sampling
draws in this package go through :class:`Xorshift64Star` so that a given
seed produces bit-identical results on any platform. The generator is
Marsaglia's xorshift64* (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D);
zero seeds are remapped through a splitmix64 step so the state never
collapses.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF

_MULTIPLIER = 0x2545F4914F6CDD1D
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 mixing step; used for seeding and stream derivation."""
    x = (x + _SPLITMIX_GAMMA) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return (x ^ (x >> 31)) & MASK64


def derive_seed(master_seed: int, stream: int) -> int:
    """Derive an independent child seed (e.g. one PRNG stream per grid cell)."""
    return splitmix64((master_seed & MASK64) ^ splitmix64(stream & MASK64))


class Xorshift64Star:
    """xorshift64* stream with convenience draws used across the package."""

    def __init__(self, seed: int):
        state = splitmix64(seed & MASK64)
        self._state = state if state != 0 else _SPLITMIX_GAMMA

    def next_u64(self) -> int:
        x = self._state
        x ^= (x >> 12)
        x ^= (x << 25) & MASK64
        x ^= (x >> 27)
        self._state = x
        return (x * _MULTIPLIER) & MASK64

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via the multiply-shift reduction."""
        if n <= 0:
            raise ValueError(f"below() needs a positive bound, got {n}")
        return (self.next_u64() * n) >> 64

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle (descending form)."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def uniforms(self, n: int) -> list[float]:
        return [self.uniform() for _ in range(n)]

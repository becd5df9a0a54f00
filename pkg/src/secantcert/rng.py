"""Portable seeded pseudo-random integers (SplitMix64).

The generator is fully specified here so seeds reproduce across platforms and
implementations:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z <- (z xor (z >> 27)) * 0x94D049BB133111EB mod 2^64
    output z xor (z >> 31)

Bounded integers use rejection sampling on the top bits, so they are unbiased.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MUL1) & _MASK
        z = ((z ^ (z >> 27)) * _MUL2) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError("n must be positive")
        if n == 1:
            return 0
        bits = (n - 1).bit_length()
        while True:
            v = self.next_u64() >> (64 - bits)
            if v < n:
                return v

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def symmetric(self, bound: int) -> int:
        """Uniform integer in ``{-bound, ..., bound}``."""
        return self.integer(-bound, bound)

    def nonzero(self, bound: int) -> int:
        """Uniform integer in ``{-bound, ..., bound} \\ {0}``."""
        if bound < 1:
            raise ValueError("bound must be at least 1")
        v = self.below(2 * bound)
        return v - bound if v < bound else v - bound + 1

    def vector(self, size: int, bound: int) -> list[int]:
        return [self.symmetric(bound) for _ in range(size)]

    def nonzero_vector(self, size: int, bound: int) -> list[int]:
        """Entries in ``{-bound..bound}``, resampled until not all zero."""
        while True:
            v = self.vector(size, bound)
            if any(v):
                return v


def derive_seed(seed: int, *labels: int) -> int:
    """Independent sub-stream seed for (seed, label...) pairs."""
    g = SplitMix64(seed)
    out = g.next_u64()
    for lab in labels:
        g = SplitMix64(out ^ ((lab * _GAMMA) & _MASK))
        out = g.next_u64()
    return out

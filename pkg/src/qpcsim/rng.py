"""Deterministic, splittable pseudorandom generator.

All randomness in the simulator flows through :class:`Rng`, a SplitMix64
stream.  The generator is a pure function of its 64-bit seed, so every
protocol run, Monte Carlo batch, and CLI invocation replays bit-exactly on
any platform.  Independent child generators are derived from the parent
*seed* (not the stream position), which keeps parallel and lazy consumers
reproducible no matter how much of the parent stream was used.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

# SplitMix64 increment (the 64-bit golden ratio constant).
GOLDEN64 = 0x9E3779B97F4A7C15

_MIX_MUL_1 = 0xBF58476D1CE4E5B9
_MIX_MUL_2 = 0x94D049BB133111EB


def u64(x: int) -> int:
    """Reduce an integer into the unsigned 64-bit domain."""
    return x & MASK64


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a deterministic 64-bit avalanche mixer.

    Args:
        z: Input value (masked to 64 bits).

    Returns:
        Well-mixed unsigned 64-bit integer.
    """
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_MUL_1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_MUL_2) & MASK64
    return z ^ (z >> 31)


class Rng:
    """SplitMix64 generator with deterministic splitting.

    One instance must be owned by a single sequential consumer; concurrent
    work should use :meth:`child` generators, whose streams are independent
    of the parent's consumption state.
    """

    __slots__ = ("seed", "_state")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._state = self.seed

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed:#x})"

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN64) & MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def bit(self) -> int:
        """Uniform bit in {0, 1}."""
        return self.next_u64() >> 63

    def pm_one(self) -> int:
        """Uniform outcome in {+1, -1}."""
        return 1 if self.next_u64() >> 63 else -1

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling (no modulo bias)."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        limit = MASK64 - (MASK64 + 1) % n
        while True:
            v = self.next_u64()
            if v <= limit:
                return v % n

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in the inclusive range [a, b]."""
        if b < a:
            raise ValueError("empty range")
        return a + self.below(b - a + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def child(self, index: int) -> "Rng":
        """Derive an independent child generator.

        Child ``index`` is seeded with ``mix64(parent_seed XOR index)``, a
        pure function of the parent seed, so children can be created lazily
        and in any order.
        """
        return Rng(mix64(self.seed ^ u64(index)))

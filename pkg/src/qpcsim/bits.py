"""Fixed-length bit strings compared by the protocols."""

from __future__ import annotations

from .rng import Rng


class BitString:
    """Immutable string of bits, leftmost bit first.

    The text form is a run of ``'0'``/``'1'`` characters, e.g. ``"1011"``;
    it is used for CLI flags and JSON transcripts.  Equality is positional.
    """

    __slots__ = ("bits",)

    def __init__(self, bits):
        bits = tuple(bits)
        if len(bits) < 1:
            raise ValueError("a BitString needs at least one bit")
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bit values must be 0 or 1, got {b!r}")
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("BitString is immutable")

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(c) for c in text)

    @classmethod
    def from_int(cls, value: int, width: int) -> "BitString":
        """Big-endian encoding of ``value`` into ``width`` bits."""
        if width < 1:
            raise ValueError("width must be >= 1")
        if value < 0 or value >> width:
            raise ValueError(f"{value} does not fit in {width} bits")
        return cls((value >> (width - 1 - i)) & 1 for i in range(width))

    @classmethod
    def random(cls, n: int, rng: Rng) -> "BitString":
        return cls(rng.bit() for _ in range(n))

    @property
    def n(self) -> int:
        return len(self.bits)

    def to_int(self) -> int:
        v = 0
        for b in self.bits:
            v = (v << 1) | b
        return v

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, BitString) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __repr__(self) -> str:
        return f"BitString('{self}')"


def hamming_distance(x: BitString, y: BitString) -> int:
    """Number of positions where two equal-length bit strings differ."""
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} vs {y.n}")
    return sum(a != b for a, b in zip(x.bits, y.bits))

"""Keyed bijective n-bit hash.

The comparison protocols need a public hash ``H`` that both parties apply to
their secrets before comparing, and the only structural requirement on ``H``
is that it is a 1-to-1 mapping of n-bit strings onto n-bit strings.  An
unbalanced Feistel network delivers that by construction: each round XORs one
half of the input with a mix of the other half and the key, so every round is
invertible and the whole network is a permutation of {0,1}^n for every key.

Construction (bit-exact across platforms): split the input into a left half
of floor(n/2) bits and a right half of the remaining bits, both read as
big-endian unsigned integers (an empty half is 0).  Four rounds r = 0..3 are
applied with no half-swap:

    even r:  L ^= low(|L|, mix64(key XOR (r+1)*GOLDEN64 XOR R))
    odd  r:  R ^= low(|R|, mix64(key XOR (r+1)*GOLDEN64 XOR L))

where ``mix64`` is the SplitMix64 finalizer and ``low(w, v)`` keeps the low
``w`` bits of ``v``.  All arithmetic is unsigned 64-bit with wraparound.

The key is an ordinary 64-bit integer shared by both parties; varying it
selects a different permutation.  No cryptographic strength is claimed.
"""

from __future__ import annotations

from .bits import BitString
from .rng import GOLDEN64, MASK64, mix64

# Each Feistel half must fit in one 64-bit word.
MAX_BITS = 64

HashKey = int


def _check_length(n: int) -> None:
    if not 1 <= n <= MAX_BITS:
        raise ValueError(f"bit length {n} outside supported range 1..{MAX_BITS}")


def _round_value(key: int, r: int, other_half: int, width: int) -> int:
    mixed = mix64((key ^ ((r + 1) * GOLDEN64) ^ other_half) & MASK64)
    return mixed & ((1 << width) - 1)


def hash_bits(key: HashKey, x: BitString) -> BitString:
    """Apply the keyed bijection to ``x``.

    Args:
        key: 64-bit hash key (both parties must hold the same value).
        x: Input bit string, 1 to 64 bits.

    Returns:
        A bit string of the same length; for a fixed key and length the
        map is a permutation of all bit strings of that length.
    """
    n = x.n
    _check_length(n)
    key &= MASK64
    nl = n // 2
    nr = n - nl
    bits = x.bits
    left = 0
    for b in bits[:nl]:
        left = (left << 1) | b
    right = 0
    for b in bits[nl:]:
        right = (right << 1) | b
    for r in range(4):
        if r % 2 == 0:
            left ^= _round_value(key, r, right, nl)
        else:
            right ^= _round_value(key, r, left, nr)
    merged = (left << nr) | right
    return BitString.from_int(merged, n)


def unhash_bits(key: HashKey, y: BitString) -> BitString:
    """Invert :func:`hash_bits` for the same key (rounds undone in reverse)."""
    n = y.n
    _check_length(n)
    key &= MASK64
    nl = n // 2
    nr = n - nl
    bits = y.bits
    left = 0
    for b in bits[:nl]:
        left = (left << 1) | b
    right = 0
    for b in bits[nl:]:
        right = (right << 1) | b
    for r in (3, 2, 1, 0):
        if r % 2 == 0:
            left ^= _round_value(key, r, right, nl)
        else:
            right ^= _round_value(key, r, left, nr)
    merged = (left << nr) | right
    return BitString.from_int(merged, n)

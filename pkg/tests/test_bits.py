import pytest

from qpcsim.bits import BitString, hamming_distance
from qpcsim.rng import Rng


def test_text_round_trip():
    s = BitString.from_text("10110")
    assert str(s) == "10110"
    assert s.bits == (1, 0, 1, 1, 0)
    assert s.n == 5


def test_leftmost_bit_is_first():
    assert BitString.from_text("100").to_int() == 4
    assert BitString.from_int(4, 3) == BitString.from_text("100")


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        BitString([])
    with pytest.raises(ValueError):
        BitString([0, 2])
    with pytest.raises(ValueError):
        BitString.from_text("")
    with pytest.raises(ValueError):
        BitString.from_text("10a")
    with pytest.raises(ValueError):
        BitString.from_int(8, 3)


def test_equality_is_positional():
    assert BitString.from_text("101") == BitString.from_text("101")
    assert BitString.from_text("101") != BitString.from_text("110")
    assert hash(BitString.from_text("101")) == hash(BitString.from_text("101"))


def test_immutability():
    s = BitString.from_text("10")
    with pytest.raises(AttributeError):
        s.bits = (0, 0)


def test_random_has_requested_length():
    s = BitString.random(17, Rng(1))
    assert s.n == 17
    assert set(s.bits) <= {0, 1}


def test_hamming_examples():
    assert hamming_distance(BitString.from_text("1010"), BitString.from_text("1001")) == 2
    s = BitString.from_text("0110")
    assert hamming_distance(s, s) == 0
    assert hamming_distance(BitString.from_text("0000"), BitString.from_text("1111")) == 4


def test_hamming_is_symmetric_and_zero_iff_equal():
    rng = Rng(2)
    for _ in range(200):
        x = BitString.random(9, rng)
        y = BitString.random(9, rng)
        assert hamming_distance(x, y) == hamming_distance(y, x)
        assert (hamming_distance(x, y) == 0) == (x == y)


def test_hamming_length_mismatch():
    with pytest.raises(ValueError):
        hamming_distance(BitString.from_text("10"), BitString.from_text("100"))

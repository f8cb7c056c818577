from qpcsim.rng import Rng, mix64

import pytest


def test_same_seed_same_stream():
    a = Rng(12345)
    b = Rng(12345)
    assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]


def test_different_seeds_differ():
    assert [Rng(1).next_u64() for _ in range(4)] != [Rng(2).next_u64() for _ in range(4)]


def test_child_derivation_is_seed_based():
    parent = Rng(777)
    parent.next_u64()  # consuming the parent must not affect children
    child = parent.child(3)
    assert child.seed == mix64(777 ^ 3)
    assert child.next_u64() == Rng(mix64(777 ^ 3)).next_u64()


def test_children_are_distinct():
    parent = Rng(9)
    seeds = {parent.child(i).seed for i in range(1000)}
    assert len(seeds) == 1000


def test_random_in_unit_interval():
    rng = Rng(4)
    values = [rng.random() for _ in range(10000)]
    assert all(0.0 <= v < 1.0 for v in values)
    assert abs(sum(values) / len(values) - 0.5) < 0.02


def test_bit_and_pm_one_balance():
    rng = Rng(5)
    n = 20000
    ones = sum(rng.bit() for _ in range(n))
    assert abs(ones / n - 0.5) < 0.02
    plus = sum(rng.pm_one() == 1 for _ in range(n))
    assert abs(plus / n - 0.5) < 0.02


def test_below_bounds_and_uniformity():
    rng = Rng(6)
    counts = [0] * 7
    for _ in range(70000):
        counts[rng.below(7)] += 1
    assert all(abs(c - 10000) < 500 for c in counts)
    with pytest.raises(ValueError):
        rng.below(0)


def test_randint_inclusive():
    rng = Rng(8)
    values = {rng.randint(3, 5) for _ in range(200)}
    assert values == {3, 4, 5}

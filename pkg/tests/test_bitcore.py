import statistics

import pytest
from hypothesis import given, strategies as st

from onemaxmin.bitcore import (
    BitString, RngStream, count_ones, derive_seed, one_bit_mutation, random_bitstring,
    standard_bitwise_mutation,
)


@pytest.mark.parametrize("text,a,b,expected", [
    ("111000", 1, 6, 3),
    ("111000", 1, 3, 3),
    ("110101", 4, 6, 2),
])
def test_count_ones_examples(text, a, b, expected):
    assert count_ones(BitString.from_str(text), a, b) == expected


@pytest.mark.parametrize("a,b", [(0, 3), (2, 7), (4, 3)])
def test_count_ones_range_errors(a, b):
    with pytest.raises(IndexError):
        count_ones(BitString.from_str("110101"), a, b)


def test_forced_one_bit_flip():
    assert str(one_bit_mutation(BitString.from_str("000"), RngStream(0), index=2)) == "010"


def test_bitstring_parsing_rejects_junk():
    with pytest.raises(ValueError):
        BitString.from_str("01a1")


def test_rng_words_are_frozen():
    r = RngStream(42)
    assert [r.raw() for _ in range(3)] == [
        14276969152011380360, 8095878257575067585, 15838336090824644132]
    r = RngStream(42)
    assert [r.randbelow(10) for _ in range(10)] == [0, 5, 2, 7, 1, 4, 1, 8, 9, 0]


def test_flip_positions_frozen():
    r = RngStream(7)
    assert [r.flip_positions(20) for _ in range(3)] == [[9, 12, 17], [], [2]]


def test_derive_seed_frozen_and_distinct():
    assert derive_seed(0) == 16294208416658607535
    assert derive_seed(0, 1, 2) == 11994755310158905061
    assert derive_seed(123, 4) == 9878109639887025734
    seeds = {derive_seed(5, cell, trial) for cell in range(20) for trial in range(50)}
    assert len(seeds) == 1000


def test_random_bitstring_frozen():
    assert str(random_bitstring(16, RngStream(3))) == "0001111101000011"


def test_same_seed_same_bits():
    assert random_bitstring(100, RngStream(11)) == random_bitstring(100, RngStream(11))


def test_single_bit_is_fair():
    r = RngStream(5)
    ones = sum(random_bitstring(1, r).bits[0] for _ in range(20000))
    assert abs(ones / 20000 - 0.5) < 0.02


def test_mean_ones_at_n10():
    r = RngStream(1)
    mean = statistics.fmean(sum(random_bitstring(10, r).bits) for _ in range(10 ** 5))
    assert abs(mean - 5.0) < 0.05


def test_bitwise_mutation_rate():
    n, r = 50, RngStream(2)
    x = BitString.zeros(n)
    flips = [sum(standard_bitwise_mutation(x, r).bits) for _ in range(20000)]
    assert abs(statistics.fmean(flips) - 1.0) < 0.03
    # no-flip probability (1 - 1/n)^n
    assert abs(flips.count(0) / len(flips) - (1 - 1 / n) ** n) < 0.015


def test_flip_positions_n1_draws_nothing():
    r1, r2 = RngStream(9), RngStream(9)
    assert r1.flip_positions(1) == [0]
    assert r1.raw() == r2.raw()


@given(st.integers(0, 2 ** 64 - 1), st.integers(1, 1000))
def test_randbelow_in_range(seed, m):
    r = RngStream(seed)
    assert all(0 <= r.randbelow(m) < m for _ in range(20))


@given(st.integers(0, 2 ** 32), st.integers(1, 200))
def test_flip_positions_sorted_and_distinct(seed, n):
    pos = RngStream(seed).flip_positions(n)
    assert pos == sorted(set(pos))
    assert all(0 <= p < n for p in pos)


@given(st.text(alphabet="01", min_size=1, max_size=40), st.integers(0, 1000))
def test_one_bit_mutation_distance(text, seed):
    x = BitString.from_str(text)
    assert one_bit_mutation(x, RngStream(seed)).hamming(x) == 1

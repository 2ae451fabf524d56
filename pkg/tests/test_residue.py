import random

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from wvgpower.residue import (
    LARGE_PRIMES,
    ResidueSystem,
    ResidueVector,
    add_mod,
    addmod,
    addmod_into,
    default_system,
    exact_sum,
    prefix_sums_inplace,
    reconstruct,
    sub_mod,
    submod,
    submod_into,
)

TOP_THREE = (2**63 - 25, 2**63 - 165, 2**63 - 259)


def test_embedded_primes_are_the_largest_below_2_63():
    p = 2**63
    for expected in LARGE_PRIMES:
        p = sympy.prevprime(p)
        assert p == expected


def test_default_system_sizes():
    assert default_system(188).primes == TOP_THREE
    assert default_system(60).primes == (2**63 - 25,)
    assert len(default_system(1000)) == 16


def test_default_system_capacity_covers_all_coalitions():
    for n in range(1, 1001):
        sys_ = default_system(n)
        assert sys_.capacity > 2**n
        # minimal: dropping a prime loses the guarantee
        if len(sys_) > 1:
            assert ResidueSystem(sys_.primes[:-1]).capacity <= 2**n


def test_default_system_rejects_bad_sizes():
    with pytest.raises(ValueError):
        default_system(0)
    with pytest.raises(ValueError):
        default_system(63 * 32 + 1)


def test_small_system_add_sub_and_reconstruct():
    s = ResidueSystem((7, 11))
    a, b = ResidueVector((3, 10)), ResidueVector((5, 2))
    assert add_mod(a, b, s).residues == (1, 1)
    assert add_mod(s.zero(), a, s) == a
    assert sub_mod(ResidueVector((1, 1)), b, s).residues == (3, 10)
    assert reconstruct(a, s) == 10
    assert reconstruct(s.zero(), s) == 0


def test_two_to_64_under_top_three_primes():
    s = ResidueSystem(TOP_THREE)
    assert reconstruct([2**64 % p for p in TOP_THREE], s) == 2**64


def test_system_validation():
    with pytest.raises(ValueError):
        ResidueSystem((7, 7))
    with pytest.raises(ValueError):
        ResidueSystem((2**63 + 1,))
    with pytest.raises(ValueError):
        ResidueSystem(())
    with pytest.raises(ValueError):
        reconstruct((1,), ResidueSystem((7, 11)))


def test_round_trip_ten_thousand_values():
    s = ResidueSystem(TOP_THREE)
    rng = random.Random(12345)
    for _ in range(10_000):
        x = rng.randrange(s.capacity)
        assert s.reconstruct(s.residues(x)) == x


@given(st.integers(min_value=0), st.integers(min_value=0))
def test_residues_are_additive(x, y):
    s = ResidueSystem(TOP_THREE)
    x, y = x % s.capacity, y % s.capacity
    assert add_mod(s.residues(x), s.residues(y), s) == s.residues((x + y) % s.capacity)
    assert sub_mod(s.residues(x), s.residues(y), s) == s.residues((x - y) % s.capacity)


@given(st.lists(st.integers(0, 2**63 - 26), min_size=1, max_size=50), st.lists(st.integers(0, 2**63 - 26), min_size=50, max_size=50))
def test_vector_kernels_match_python(xs, ys):
    p = TOP_THREE[0]
    a = np.array(xs, dtype=np.uint64)
    b = np.array(ys[: len(xs)], dtype=np.uint64)
    pp = np.uint64(p)
    assert addmod(a, b, pp).tolist() == [(x + y) % p for x, y in zip(xs, ys)]
    assert submod(a, b, pp).tolist() == [(x - y) % p for x, y in zip(xs, ys)]
    c = a.copy()
    addmod_into(c, b, pp)
    assert c.tolist() == [(x + y) % p for x, y in zip(xs, ys)]
    submod_into(c, b, pp)
    assert c.tolist() == xs


@given(st.lists(st.integers(0, 2**63 - 26), max_size=70))
def test_prefix_sums_and_exact_sum(xs):
    p = TOP_THREE[0]
    row = np.array(xs, dtype=np.uint64)
    prefix_sums_inplace(row, np.uint64(p))
    acc, expected = 0, []
    for x in xs:
        acc = (acc + x) % p
        expected.append(acc)
    assert row.tolist() == expected
    assert exact_sum(np.array(xs, dtype=np.uint64)) == sum(xs)

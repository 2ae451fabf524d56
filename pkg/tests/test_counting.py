import numpy as np
import pytest
from conftest import weighted_games
from hypothesis import given

from wvgpower.counting import (
    backward_counts,
    backward_counts_sized,
    counts_by_delta,
    forward_counts,
    forward_counts_sized,
    sized_by_delta,
    swings_with,
    swings_without,
    tally_coalitions,
)
from wvgpower.game import WeightedGame, normalize
from wvgpower.oracle import enumerate_counts, enumerate_indices, winning_mask
from wvgpower.residue import ResidueSystem, default_system

TINY = normalize(WeightedGame(3, (2, 1, 1)))


def test_forward_table_tiny():
    assert forward_counts(TINY).exact_all() == [1, 2, 2, 2]
    assert forward_counts(normalize(WeightedGame(1, (1,)))).exact_all() == [1, 1]


def test_backward_table_tiny():
    t = backward_counts(TINY)
    assert (t.start, t.stop) == (3, 4)
    assert t.exact_all() == [2, 1]


def test_dispatch_by_delta():
    assert counts_by_delta(normalize(WeightedGame(85, (10,) * 10))).direction == "backward"
    assert counts_by_delta(normalize(WeightedGame(40, (10,) * 10))).direction == "forward"
    # odd C with q = (C+1)/2: equal cost, forward wins the tie
    assert counts_by_delta(normalize(WeightedGame(5, (3, 2, 2, 1, 1)))).direction == "forward"


def test_sized_tiny():
    for table in (forward_counts_sized(TINY), backward_counts_sized(TINY)):
        assert table.exact(3, 2) == 2
    t = forward_counts_sized(TINY)
    assert (t.exact(2, 1), t.exact(2, 2), t.exact(0, 0)) == (1, 1, 1)
    assert all(t.exact(x, 0) == 0 for x in range(1, 4))


def test_swing_tables_tiny():
    fwd = swings_without(forward_counts(TINY), 2)
    assert fwd.exact_all() == [1, 2, 1]
    assert fwd.banzhaf_numerator() == 3
    bwd = swings_with(backward_counts(TINY), 2)
    assert (bwd.exact(3), bwd.exact(4)) == (2, 1)
    assert bwd.banzhaf_numerator() == 3
    assert swings_with(backward_counts(TINY), 1).banzhaf_numerator() == 1


def test_swing_tables_reject_wrong_direction():
    with pytest.raises(ValueError):
        swings_without(backward_counts(TINY), 1)
    with pytest.raises(ValueError):
        swings_with(forward_counts(TINY), 1)


def test_tally_examples():
    assert tally_coalitions(WeightedGame(3, (2, 1, 1))) == (5, 3)
    assert tally_coalitions(WeightedGame(1, (1,) * 9)) == (1, 2**9 - 1)


@given(weighted_games(max_n=12))
def test_unsized_tables_match_enumeration(game):
    norm = normalize(game)
    c, _ = enumerate_counts(norm.as_game())
    fwd = forward_counts(norm)
    bwd = backward_counts(norm)
    assert fwd.exact_all() == [c.get(x, 0) for x in range(0, norm.quota + 1)]
    assert bwd.exact_all() == [c.get(x, 0) for x in range(norm.quota, norm.total + 1)]
    # completeness of mass
    assert fwd.exact_range_sum(0, norm.quota - 1) + bwd.exact_range_sum(norm.quota, norm.total) == 2**norm.n


@given(weighted_games(max_n=10))
def test_sized_tables_match_enumeration(game):
    norm = normalize(game)
    c, cs = enumerate_counts(norm.as_game())
    fwd, bwd = forward_counts_sized(norm), backward_counts_sized(norm)
    for table in (fwd, bwd):
        for x in table.tracked():
            row = [table.exact(x, s) for s in range(norm.n + 1)]
            assert row == [cs.get((x, s), 0) for s in range(norm.n + 1)]
            assert sum(row) == c.get(x, 0)


def _unpruned_sized(weights, cap, p):
    c = np.zeros((len(weights) + 1, cap + 1), dtype=object)
    c[0, 0] = 1
    for w in weights:
        for s in range(len(weights), 0, -1):
            for x in range(cap, w - 1, -1):
                c[s, x] = (c[s, x] + c[s - 1, x - w]) % p
    return c


@given(weighted_games(max_n=9, max_w=20))
def test_pruned_sized_rows_equal_unpruned(game):
    norm = normalize(game)
    p = 1_000_003
    table = sized_by_delta(norm, ResidueSystem((p,)))
    cap = table.per_prime[0].cap
    ref = _unpruned_sized(norm.weights, cap, p)
    for r in range(norm.n + 1):
        for y in range(cap + 1):
            assert table.per_prime[0].value(y, r) == ref[r, y]


@given(weighted_games(max_n=11))
def test_forward_and_backward_swings_agree(game):
    norm = normalize(game)
    fwd, bwd = forward_counts(norm), backward_counts(norm)
    ref = enumerate_indices(norm.as_game())
    for k, w in enumerate(norm.weights):
        a = swings_without(fwd, w).banzhaf_numerator()
        b = swings_with(bwd, w).banzhaf_numerator()
        assert a == b == ref.banzhaf_raw[k]


@given(weighted_games(max_n=11))
def test_swing_tables_satisfy_recurrences(game):
    norm = normalize(game)
    fwd, bwd = forward_counts(norm), backward_counts(norm)
    c_f, c_b = fwd.exact_all(), bwd.exact_all()
    for w in set(norm.weights):
        wo = swings_without(fwd, w).exact_all()
        for x in range(len(wo)):
            assert wo[x] == c_f[x] - (wo[x - w] if x >= w else 0)
        wi = swings_with(bwd, w).exact_all()
        m = len(wi)
        for j in range(m):
            assert wi[j] == c_b[j] - (wi[j + w] if j + w < m else 0)


@given(weighted_games(max_n=11))
def test_tally_both_sides_agree(game):
    norm = normalize(game)
    losing, winning = tally_coalitions(norm)
    assert losing + winning == 2**game.n
    # stripped zero-weight players double both counts
    scale = 2 ** len(norm.stripped)
    assert forward_counts(norm).exact_range_sum(0, norm.quota - 1) * scale == losing
    assert backward_counts(norm).exact_range_sum(norm.quota, norm.total) * scale == winning
    assert winning == int(winning_mask(game).sum())


def test_parallel_primes_give_identical_tables():
    norm = normalize(WeightedGame(700, tuple(range(1, 60))))
    system = default_system(200)
    a = forward_counts(norm, system)
    b = forward_counts(norm, system, parallel_primes=True)
    assert np.array_equal(a.values, b.values)

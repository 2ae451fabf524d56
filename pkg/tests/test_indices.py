from fractions import Fraction
from math import factorial

import pytest
from conftest import weighted_games
from hypothesis import given
from hypothesis import strategies as st

from wvgpower.counting import tally_coalitions
from wvgpower.game import QuotaSpec, WeightedGame, resolve_quota
from wvgpower.indices import (
    PowerDistribution,
    banzhaf,
    difference_report,
    pivot_weights,
    players_without_big_five,
    power_indices,
    quota_sweep,
    render_percent,
    render_share,
    shapley_shubik,
)
from wvgpower.oracle import enumerate_indices


def test_tiny_game(tiny):
    bz, ssi = banzhaf(tiny), shapley_shubik(tiny)
    assert bz.banzhaf_raw == (3, 1, 1)
    assert bz.banzhaf_share == (Fraction(3, 5), Fraction(1, 5), Fraction(1, 5))
    assert bz.banzhaf_absolute == (Fraction(3, 4), Fraction(1, 4), Fraction(1, 4))
    assert ssi.ssi_raw == (4, 1, 1)
    assert ssi.ssi_share == (Fraction(2, 3), Fraction(1, 6), Fraction(1, 6))


def test_single_player():
    d = power_indices(WeightedGame(1, (1,)))
    assert d.banzhaf_share == (1,) and d.ssi_share == (1,)


def test_missing_fields_raise(tiny):
    with pytest.raises(ValueError):
        banzhaf(tiny).ssi_share
    with pytest.raises(ValueError):
        shapley_shubik(tiny).banzhaf_share
    with pytest.raises(ValueError):
        power_indices(tiny, "nucleolus")


def test_merged_requires_same_game(tiny):
    with pytest.raises(ValueError):
        banzhaf(tiny).merged(shapley_shubik(WeightedGame(2, (2, 1, 1))))
    both = power_indices(tiny)
    assert both.banzhaf_raw == (3, 1, 1) and both.ssi_raw == (4, 1, 1)


def test_pivot_weights():
    assert pivot_weights(3) == [2, 1, 2]
    assert pivot_weights(1) == [1]


@given(weighted_games(max_n=12))
def test_both_indices_match_enumeration(game):
    ref = enumerate_indices(game)
    assert banzhaf(game).banzhaf_raw == ref.banzhaf_raw
    assert shapley_shubik(game).ssi_raw == ref.ssi_raw


@given(weighted_games(max_n=12))
def test_axioms(game):
    d = power_indices(game)
    n = game.n
    assert sum(d.ssi_raw) == factorial(n)
    assert sum(d.banzhaf_share) == 1 and sum(d.ssi_share) == 1
    # every raw count has the parity of the number of winning coalitions
    assert len({b % 2 for b in d.banzhaf_raw}) == 1
    for i in range(n):
        assert (d.banzhaf_raw[i] == 0) == (d.ssi_raw[i] == 0)
        if game.weights[i] == 0:
            assert d.banzhaf_raw[i] == 0 and d.ssi_raw[i] == 0
        for j in range(n):
            if game.weights[i] == game.weights[j]:
                assert d.banzhaf_raw[i] == d.banzhaf_raw[j] and d.ssi_raw[i] == d.ssi_raw[j]
            if game.weights[i] >= game.weights[j]:
                assert d.banzhaf_raw[i] >= d.banzhaf_raw[j] and d.ssi_raw[i] >= d.ssi_raw[j]


@given(weighted_games(max_n=10), st.integers(2, 7))
def test_scaling_leaves_indices_unchanged(game, k):
    scaled = WeightedGame(game.quota * k, tuple(w * k for w in game.weights))
    a, b = power_indices(scaled), power_indices(game)
    assert (a.banzhaf_raw, a.ssi_raw) == (b.banzhaf_raw, b.ssi_raw)


@given(weighted_games(max_n=10))
def test_dual_quota_gives_identical_indices(game):
    # S -> N \ S \ {i} maps i-swings of [q; w] onto i-swings of [C-q+1; w]
    C = game.total
    dual = WeightedGame(C - game.quota + 1, game.weights)
    a, b = power_indices(dual), power_indices(game)
    assert (a.banzhaf_raw, a.ssi_raw) == (b.banzhaf_raw, b.ssi_raw)


@given(weighted_games(max_n=10, zeros=False))
def test_veto_player_swings_equal_winning_count(game):
    d = banzhaf(game)
    _, winning = tally_coalitions(game)
    for i, w in enumerate(game.weights):
        if game.total - w < game.quota:
            assert d.banzhaf_raw[i] == winning


def test_parallel_primes_same_result():
    g = WeightedGame(500, tuple(range(1, 70)))
    assert shapley_shubik(g, parallel_primes=True) == shapley_shubik(g)
    assert banzhaf(g, parallel_primes=2) == banzhaf(g)


@given(st.lists(st.integers(1, 40), min_size=1, max_size=9), st.sampled_from(["include_equal", "strict"]))
def test_sweep_matches_pointwise_banzhaf(weights, rule):
    points = quota_sweep(weights, Fraction(1, 20), rule)
    assert len(points) == 21
    n = len(weights)
    assert points[0].shares == tuple(Fraction(1, n) for _ in range(n))
    assert points[-1].shares == points[0].shares
    if rule == "include_equal":
        assert points[-1].banzhaf_raw == (1,) * n
    for pt in points[1:]:
        if pt.quota is None:
            continue
        assert pt.quota == resolve_quota(QuotaSpec(fraction=pt.fraction, tie_rule=rule), sum(weights))
        assert pt.banzhaf_raw == banzhaf(WeightedGame(pt.quota, tuple(weights))).banzhaf_raw


def test_sweep_step_validation():
    with pytest.raises(ValueError):
        quota_sweep([1, 2], Fraction(3, 10))
    assert len(quota_sweep([1, 2], Fraction(1, 2))) == 3


def test_sweep_zero_weight_players():
    pts = quota_sweep([3, 0, 1], Fraction(1, 4))
    assert pts[-1].banzhaf_raw == (1, 0, 1)


def test_difference_report_identical_and_tiny(tiny):
    d = power_indices(tiny)
    dists = {(y, q): d for y in (2015, 2016) for q in ("85%", "50%")}
    rep = difference_report(dists)
    assert rep.cells["dBz_85%"] == 0 and rep.cells["dSSI_50%"] == 0
    # |3/5 - 2/3| + 2 * |1/5 - 1/6| = 1/15 + 1/15
    assert rep.cells["dP_2015_85%"] == Fraction(2, 15)
    assert rep.percent("dP_2015_85%") == "13.33"
    sub = difference_report(dists, players=[1, 2], player_set="rest")
    assert sub.cells["dP_2016_50%"] == Fraction(1, 15)


def test_players_without_big_five():
    rest = players_without_big_five(188)
    assert len(rest) == 183
    assert not {57, 61, 81, 178, 179} & set(rest)


def test_rendering_is_half_even():
    assert render_percent(Fraction(1, 8), 1) == "12.5"
    assert render_percent(Fraction(125, 100000), 2) == "0.12"
    assert render_percent(Fraction(135, 100000), 2) == "0.14"
    assert render_share(Fraction(2, 3)) == "0.66667"
    assert render_share(Fraction(1, 1)) == "1.00000"


def test_distribution_equality_ignores_meta(tiny):
    a = PowerDistribution(3, 3, 4, (3, 1, 1), meta={"x": 1})
    b = PowerDistribution(3, 3, 4, (3, 1, 1))
    assert a == b

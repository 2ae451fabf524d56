"""Brute-force reference: evaluate both indices and the count tables over all 2**n subsets.

Deliberately shares nothing with the counting kernels beyond the game types.
Subsets are bitmasks; numpy only vectorises the loop over them.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from .game import VectorWeightedGame, WeightedGame

DEFAULT_MAX_N = 25


def _masks(n: int, max_n: int) -> np.ndarray:
    if n > max_n:
        raise ValueError(f"refusing to enumerate 2**{n} coalitions (max_n={max_n})")
    return np.arange(1 << n, dtype=np.int64)


def _weights_of(masks: np.ndarray, weights) -> np.ndarray:
    total = np.zeros(masks.shape, dtype=object if max(weights, default=0) > 2**40 else np.int64)
    for j, w in enumerate(weights):
        total += ((masks >> j) & 1) * w
    return total


def _popcount(masks: np.ndarray, n: int) -> np.ndarray:
    size = np.zeros(masks.shape, dtype=np.int64)
    for j in range(n):
        size += (masks >> j) & 1
    return size


def winning_mask(game: WeightedGame | VectorWeightedGame, max_n: int = DEFAULT_MAX_N) -> np.ndarray:
    """Boolean array over all coalitions (as bitmasks): True where the coalition wins."""
    masks = _masks(game.n, max_n)
    games = game.games if isinstance(game, VectorWeightedGame) else (game,)
    win = np.ones(masks.shape, dtype=bool)
    for g in games:
        win &= _weights_of(masks, g.weights) >= g.quota
    return win


def enumerate_indices(game: WeightedGame | VectorWeightedGame, max_n: int = DEFAULT_MAX_N):
    """Raw Banzhaf swing counts and n!*SSI for every player, by enumeration."""
    from .indices import PowerDistribution

    n = game.n
    masks = _masks(n, max_n)
    win = winning_mask(game, max_n)
    size = _popcount(masks, n)
    pivot = [factorial(s) * factorial(n - s - 1) for s in range(n)]
    bz, ssi = [], []
    for i in range(n):
        bit = 1 << i
        without = masks[(masks & bit) == 0]
        swing = ~win[without] & win[without | bit]
        bz.append(int(swing.sum()))
        per_size = np.bincount(size[without][swing], minlength=n)
        ssi.append(sum(int(c) * pivot[s] for s, c in enumerate(per_size)))
    first = game.games[0] if isinstance(game, VectorWeightedGame) else game
    return PowerDistribution(
        n=n, quota=first.quota, total=first.total, banzhaf_raw=tuple(bz), ssi_raw=tuple(ssi),
        labels=first.labels, meta={"method": "enumeration"},
    )


def enumerate_counts(game: WeightedGame, max_n: int = DEFAULT_MAX_N) -> tuple[dict[int, int], dict[tuple[int, int], int]]:
    """Histograms c(x) and c(x, s) over all subsets."""
    masks = _masks(game.n, max_n)
    weight = _weights_of(masks, game.weights)
    size = _popcount(masks, game.n)
    xs, counts = np.unique(weight, return_counts=True)
    by_weight = {int(x): int(c) for x, c in zip(xs, counts)}
    pairs, counts = np.unique(np.stack([weight, size], axis=1), axis=0, return_counts=True)
    by_weight_size = {(int(x), int(s)): int(c) for (x, s), c in zip(pairs, counts)}
    return by_weight, by_weight_size

"""Counting and power indices for intersections of weighted games.

A coalition wins the intersection iff it wins every member game. Two layouts:

* upper side: count complements R = N \\ S by y_j = C_j - x_j(S) inside the
  box y_j <= C_j - q_j; S wins iff its complement lands in the box.
* lower side: a coalition loses iff it loses some member game, so losing
  counts come from inclusion-exclusion over nonempty subsets J of games,
  each a |J|-dimensional box [0, q_j - 1].

The cheaper layout by cell count is used. A size axis (unit weight, extent
n + 1) is appended for Shapley-Shubik values.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial, prod
from typing import Literal, Sequence

import numpy as np

from .game import VectorWeightedGame, WeightedGame
from .indices import PowerDistribution, pivot_weights
from .residue import ResidueSystem, addmod, default_system, exact_sum, reconstruct, submod

U64 = np.uint64
DEFAULT_CELL_BUDGET = 20_000_000


class CellBudgetExceeded(ValueError):
    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"intersection table needs {required} cells, budget is {budget}")


@dataclass(frozen=True)
class NormalizedVectorGame:
    quotas: tuple[int, ...]
    totals: tuple[int, ...]
    weights: tuple[tuple[int, ...], ...]  # weights[i] = weight vector of kept player i
    players: tuple[int, ...]
    stripped: tuple[int, ...]
    n_original: int

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def k(self) -> int:
        return len(self.quotas)


def _shrink(game: WeightedGame) -> tuple[int, list[int]]:
    q = game.quota
    w = [min(q, x) for x in game.weights]
    slack = sum(w) - q
    for i, x in enumerate(w):
        if x > slack + 1:
            q -= x - (slack + 1)
            w[i] = slack + 1
    return q, w


def normalize_vector(vgame: VectorWeightedGame) -> NormalizedVectorGame:
    """Cap and veto-shrink every member game; drop players with an all-zero weight vector.

    Each member game keeps its own winning sets, so the intersection is unchanged.
    Player order is kept.
    """
    shrunk = [_shrink(g) for g in vgame.games]
    quotas = tuple(q for q, _ in shrunk)
    cols = [w for _, w in shrunk]
    players = tuple(i for i in range(vgame.n) if any(c[i] for c in cols))
    stripped = tuple(i for i in range(vgame.n) if i not in set(players))
    weights = tuple(tuple(c[i] for c in cols) for i in players)
    totals = tuple(sum(c) for c in cols)
    return NormalizedVectorGame(quotas, totals, weights, players, stripped, vgame.n)


def cell_counts(norm: NormalizedVectorGame, sized: bool = False) -> dict[str, int]:
    extra = norm.n + 1 if sized else 1
    k = norm.k
    lower = sum(prod(norm.quotas[j] for j in J) for m in range(1, k + 1) for J in combinations(range(k), m))
    upper = prod(C - q + 1 for C, q in zip(norm.totals, norm.quotas))
    return {"lower": lower * extra, "upper": upper * extra}


def box_counts(vectors: Sequence[Sequence[int]], caps: Sequence[int], p: int) -> np.ndarray:
    """c[y] = number of subsets whose summed vector is y, for 0 <= y <= caps, mod p."""
    pp = U64(p)
    c = np.zeros(tuple(cap + 1 for cap in caps), dtype=U64)
    c[(0,) * len(caps)] = 1
    for v in vectors:
        if any(x > cap for x, cap in zip(v, caps)):
            continue
        dst = tuple(slice(x, None) for x in v)
        src = tuple(slice(0, cap + 1 - x) for x, cap in zip(v, caps))
        c[dst] = addmod(c[dst], c[src], pp)
    return c


def unroll_nd(c: np.ndarray, shift: Sequence[int], p: int) -> np.ndarray:
    """A(y) -> sum_j (-1)^j A(y - j*shift), via (I - S)(I + S^2)(I + S^4)..."""
    pp = U64(p)
    out = c.copy()
    m, first = list(shift), True
    while all(x < n for x, n in zip(m, out.shape)):
        dst = tuple(slice(x, None) for x in m)
        src = tuple(slice(0, n - x) for x, n in zip(m, out.shape))
        shifted = out[src].copy()
        out[dst] = submod(out[dst], shifted, pp) if first else addmod(out[dst], shifted, pp)
        first = False
        m = [2 * x for x in m]
    return out


def _box_sum(a: np.ndarray, stops: Sequence[int], p: int, sized: bool) -> list[int] | int:
    """Sum of a over the box [0, stops) in the leading axes (per size if ``sized``), mod p."""
    if any(s <= 0 for s in stops):
        return [0] * a.shape[-1] if sized else 0
    block = a[tuple(slice(0, s) for s in stops)]
    if not sized:
        return exact_sum(block) % p
    flat = block.reshape(-1, a.shape[-1])
    return [exact_sum(flat[:, r]) % p for r in range(a.shape[-1])]


Side = Literal["lower", "upper"]


def _dispatch(norm: NormalizedVectorGame, sized: bool, budget: int, side: Side | None = None) -> Side:
    cells = cell_counts(norm, sized)
    if side is None:
        side = "lower" if cells["lower"] <= cells["upper"] else "upper"
    if cells[side] > budget:
        raise CellBudgetExceeded(cells[side], budget)
    return side


def _swing_residues(norm: NormalizedVectorGame, side: str, sized: bool, p: int) -> list:
    """Per kept player: swing count mod p (or list per coalition size s of S \\ {i})."""
    n, k = norm.n, norm.k
    unit = (1,) if sized else ()
    if side == "upper":
        caps = [C - q for C, q in zip(norm.totals, norm.quotas)]
        full_caps = caps + ([n] if sized else [])
        c = box_counts([w + unit for w in norm.weights], full_caps, p)
        out = []
        for w in norm.weights:
            cwo = unroll_nd(c, w + unit, p)
            allin = _box_sum(cwo, [x + 1 for x in caps], p, sized)
            stay = _box_sum(cwo, [x + 1 - wj for x, wj in zip(caps, w)], p, sized)
            if sized:
                # complement size r maps to |S \ {i}| = n - 1 - r
                diff = [(a - b) % p for a, b in zip(allin, stay)]
                out.append([diff[n - 1 - s] for s in range(n)])
            else:
                out.append((allin - stay) % p)
        return out

    acc = [[0] * n if sized else 0 for _ in range(n)]
    for m in range(1, k + 1):
        sign = 1 if m % 2 else -1
        for J in combinations(range(k), m):
            caps = [norm.quotas[j] - 1 for j in J] + ([n] if sized else [])
            c = box_counts([tuple(w[j] for j in J) + unit for w in norm.weights], caps, p)
            for i, w in enumerate(norm.weights):
                wJ = tuple(w[j] for j in J)
                if not any(wJ):
                    continue
                cwo = unroll_nd(c, wJ + unit, p)
                hi = _box_sum(cwo, [norm.quotas[j] for j in J], p, sized)
                lo = _box_sum(cwo, [norm.quotas[j] - wj for j, wj in zip(J, wJ)], p, sized)
                if sized:
                    acc[i] = [(a + sign * (h - l_)) % p for a, h, l_ in zip(acc[i], hi, lo)]
                else:
                    acc[i] = (acc[i] + sign * (hi - lo)) % p
    return acc


def _scatter(norm: NormalizedVectorGame, values: Sequence[int], scale: int) -> tuple[int, ...]:
    out = [0] * norm.n_original
    for k, orig in enumerate(norm.players):
        out[orig] = values[k] * scale
    return tuple(out)


def _meta(vgame: VectorWeightedGame, side: str, norm: NormalizedVectorGame, system: ResidueSystem) -> dict:
    return {"side": side, "k": vgame.k, "quotas": vgame.quotas, "cells": cell_counts(norm), "primes": system.primes}


def banzhaf_vector(
    vgame: VectorWeightedGame,
    system: ResidueSystem | None = None,
    budget: int = DEFAULT_CELL_BUDGET,
    side: Side | None = None,
) -> PowerDistribution:
    norm = normalize_vector(vgame)
    if norm.n == 0:
        raise ValueError("every player is null; the intersection has no swings")
    side = _dispatch(norm, False, budget, side)
    system = system or default_system(norm.n)
    per_prime = [_swing_residues(norm, side, False, p) for p in system.primes]
    raw = [reconstruct(col, system) for col in zip(*per_prime)]
    return PowerDistribution(
        n=vgame.n,
        quota=vgame.games[0].quota,
        total=vgame.games[0].total,
        banzhaf_raw=_scatter(norm, raw, 1 << len(norm.stripped)),
        labels=vgame.games[0].labels,
        meta=_meta(vgame, side, norm, system),
    )


def shapley_shubik_vector(
    vgame: VectorWeightedGame,
    system: ResidueSystem | None = None,
    budget: int = DEFAULT_CELL_BUDGET,
    side: Side | None = None,
) -> PowerDistribution:
    norm = normalize_vector(vgame)
    if norm.n == 0:
        raise ValueError("every player is null; the intersection has no swings")
    side = _dispatch(norm, True, budget, side)
    system = system or default_system(norm.n)
    n = norm.n
    per_prime = [_swing_residues(norm, side, True, p) for p in system.primes]
    f = pivot_weights(n)
    ssi = []
    for i in range(n):
        ssi.append(sum(f[s] * reconstruct([res[i][s] for res in per_prime], system) for s in range(n)))
    return PowerDistribution(
        n=vgame.n,
        quota=vgame.games[0].quota,
        total=vgame.games[0].total,
        ssi_raw=_scatter(norm, ssi, factorial(vgame.n) // factorial(n)),
        labels=vgame.games[0].labels,
        meta=_meta(vgame, side, norm, system),
    )


def vector_tally(
    vgame: VectorWeightedGame, system: ResidueSystem | None = None, budget: int = DEFAULT_CELL_BUDGET
) -> tuple[int, int]:
    """(losing, winning) coalition counts of the intersection."""
    norm = normalize_vector(vgame)
    side = _dispatch(norm, False, budget) if norm.n else "upper"
    system = system or default_system(max(norm.n, 1))
    everything = 1 << norm.n
    scale = 1 << len(norm.stripped)
    res = []
    for p in system.primes:
        if side == "upper":
            caps = [C - q for C, q in zip(norm.totals, norm.quotas)]
            c = box_counts(norm.weights, caps, p)
            res.append(exact_sum(c) % p)
        else:
            total = 0
            for m in range(1, norm.k + 1):
                for J in combinations(range(norm.k), m):
                    caps = [norm.quotas[j] - 1 for j in J]
                    c = box_counts([tuple(w[j] for j in J) for w in norm.weights], caps, p)
                    total += (1 if m % 2 else -1) * exact_sum(c)
            res.append(total % p)
    value = reconstruct(res, system) if res else 0
    winning = value if side == "upper" else everything - value
    return (everything - winning) * scale, winning * scale


@dataclass(frozen=True)
class VectorCountTable:
    """One box table per prime: upper side in complement coordinates, lower side over [0, q_j - 1]."""

    side: Literal["lower", "upper"]
    caps: tuple[int, ...]
    values: tuple[np.ndarray, ...]
    system: ResidueSystem

    def exact(self, coord: Sequence[int]) -> int:
        return reconstruct([int(v[tuple(coord)]) for v in self.values], self.system)


def vector_counts(
    vgame: VectorWeightedGame,
    system: ResidueSystem | None = None,
    side: Side | None = None,
    budget: int = DEFAULT_CELL_BUDGET,
) -> VectorCountTable:
    """The k-dimensional coalition-count table on the chosen (default: cheaper) side.

    The lower table covers the full box [0, q_1 - 1] x ... x [0, q_k - 1] of the
    raw game (coalitions losing every member game); the upper table counts
    complements of winning coalitions by y_j = C_j - x_j.
    """
    weights = [vgame.weight_vector(i) for i in range(vgame.n)]
    if side is None:
        lower = prod(vgame.quotas)
        upper = prod(C - q + 1 for C, q in zip(vgame.totals, vgame.quotas))
        side = "lower" if lower <= upper else "upper"
    caps = tuple(q - 1 for q in vgame.quotas) if side == "lower" else tuple(C - q for C, q in zip(vgame.totals, vgame.quotas))
    cells = prod(c + 1 for c in caps)
    if cells > budget:
        raise CellBudgetExceeded(cells, budget)
    system = system or default_system(vgame.n)
    return VectorCountTable(side, caps, tuple(box_counts(weights, caps, p) for p in system.primes), system)

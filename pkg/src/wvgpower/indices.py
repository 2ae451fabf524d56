"""Exact Banzhaf and Shapley-Shubik distributions, quota sweeps and difference metrics."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from functools import cached_property
from itertools import accumulate
from math import factorial
from typing import Mapping, Sequence

import numpy as np

from .counting import (
    U64,
    counts_by_delta,
    exclusive_prefix,
    prefix_rows_inplace,
    sized_rows,
    sized_window_residues,
    window_swing_residues,
    workers,
)
from .game import QuotaSpec, TieRule, WeightedGame, normalize, resolve_quota
from .residue import ResidueSystem, addmod, default_system, exact_sum, reconstruct, submod

log = logging.getLogger(__name__)

# 1-based IMF member indices of the United States, Japan, Germany, France, United Kingdom
BIG_FIVE = (58, 62, 82, 179, 180)


@dataclass(frozen=True)
class PowerDistribution:
    """Exact per-player results; shares are derived as reduced fractions."""

    n: int
    quota: int
    total: int
    banzhaf_raw: tuple[int, ...] | None = None
    ssi_raw: tuple[int, ...] | None = None
    labels: tuple[str, ...] | None = None
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    @cached_property
    def banzhaf_share(self) -> tuple[Fraction, ...]:
        if self.banzhaf_raw is None:
            raise ValueError("Banzhaf counts were not computed")
        swings = sum(self.banzhaf_raw)
        if swings == 0:
            raise ValueError("no player has a swing; the distribution is undefined")
        return tuple(Fraction(b, swings) for b in self.banzhaf_raw)

    @cached_property
    def banzhaf_absolute(self) -> tuple[Fraction, ...]:
        if self.banzhaf_raw is None:
            raise ValueError("Banzhaf counts were not computed")
        return tuple(Fraction(b, 2 ** (self.n - 1)) for b in self.banzhaf_raw)

    @cached_property
    def ssi_share(self) -> tuple[Fraction, ...]:
        if self.ssi_raw is None:
            raise ValueError("Shapley-Shubik values were not computed")
        nf = factorial(self.n)
        return tuple(Fraction(v, nf) for v in self.ssi_raw)

    def merged(self, other: "PowerDistribution") -> "PowerDistribution":
        """Combine the Banzhaf fields of one result with the SSI fields of another."""
        if (self.n, self.quota, self.total) != (other.n, other.quota, other.total):
            raise ValueError("distributions belong to different games")
        return PowerDistribution(
            n=self.n,
            quota=self.quota,
            total=self.total,
            banzhaf_raw=self.banzhaf_raw if self.banzhaf_raw is not None else other.banzhaf_raw,
            ssi_raw=self.ssi_raw if self.ssi_raw is not None else other.ssi_raw,
            labels=self.labels or other.labels,
            meta={**other.meta, **self.meta},
        )


def _scatter(norm, values: Sequence[int], scale: int) -> tuple[int, ...]:
    out = [0] * norm.n_original
    for k, orig in enumerate(norm.players):
        out[orig] = values[k] * scale
    return tuple(out)


def banzhaf(game: WeightedGame, system: ResidueSystem | None = None, parallel_primes: bool | int = False) -> PowerDistribution:
    """Raw swing counts for every player from one count table on the cheaper side."""
    t0 = time.perf_counter()
    norm = normalize(game)
    system = system or default_system(norm.n)
    table = counts_by_delta(norm, system, parallel_primes)
    t1 = time.perf_counter()
    rows, top = table.mirrored()
    per_prime = []
    for j, p in enumerate(system.primes):
        prefix = exclusive_prefix(np.ascontiguousarray(rows[j]), p)
        per_prime.append(window_swing_residues(prefix, top, norm.weights, p))
    raw = [reconstruct(col, system) for col in zip(*per_prime)]
    t2 = time.perf_counter()
    assert any(raw), "a game with 1 <= q <= C always has a swing"
    return PowerDistribution(
        n=game.n,
        quota=game.quota,
        total=game.total,
        banzhaf_raw=_scatter(norm, raw, 1 << len(norm.stripped)),
        labels=game.labels,
        meta={
            "direction": table.direction,
            "normalized_quota": norm.quota,
            "delta": norm.delta,
            "primes": system.primes,
            "seconds": {"counting": t1 - t0, "swings": t2 - t1},
        },
    )


def pivot_weights(n: int) -> list[int]:
    """s! (n - s - 1)! for s = 0 .. n-1."""
    f = [1, *accumulate(range(1, n + 1), lambda a, b: a * b)]
    return [f[s] * f[n - s - 1] for s in range(n)]


def shapley_shubik(game: WeightedGame, system: ResidueSystem | None = None, parallel_primes: bool | int = False) -> PowerDistribution:
    """n! * SSI for every player from one weight-and-size table on the cheaper side.

    Window sums per size are reduced in residue arithmetic and reconstructed
    before the factorial weighting, so residues never hold n!-sized values.
    One prime is processed at a time unless ``parallel_primes`` is set
    (True for a thread per prime, or an int worker count).
    """
    t0 = time.perf_counter()
    norm = normalize(game)
    n = norm.n
    system = system or default_system(n)
    forward = norm.quota <= norm.total - norm.quota + 1
    cap = norm.quota if forward else norm.total - norm.quota
    top = norm.quota if forward else norm.total - norm.quota + 1
    timings = {"counting": 0.0, "prefix": 0.0, "swings": 0.0}

    def one_prime(p: int) -> list[list[int]]:
        a = time.perf_counter()
        tab = sized_rows(norm.weights, cap, p)
        b = time.perf_counter()
        prefix_rows_inplace(tab, p)
        c = time.perf_counter()
        res = [sized_window_residues(tab, top, w, n, p) for w in norm.weights]
        d = time.perf_counter()
        timings["counting"] += b - a
        timings["prefix"] += c - b
        timings["swings"] += d - c
        log.debug("prime %d: %d cells, %.1fs", p, tab.cells(), d - a)
        return res

    if workers(parallel_primes, system) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers(parallel_primes, system)) as pool:
            per_prime = list(pool.map(one_prime, system.primes))
    else:
        per_prime = [one_prime(p) for p in system.primes]

    weights = pivot_weights(n)
    ssi = []
    for k in range(n):
        total = 0
        for s in range(n):
            r = s if forward else n - 1 - s
            count = reconstruct([per_prime[j][k][r] for j in range(len(system))], system)
            total += weights[s] * count
        ssi.append(total)
    scale = factorial(game.n) // factorial(n)
    timings["total"] = time.perf_counter() - t0
    return PowerDistribution(
        n=game.n,
        quota=game.quota,
        total=game.total,
        ssi_raw=_scatter(norm, ssi, scale),
        labels=game.labels,
        meta={
            "direction": "forward" if forward else "backward",
            "normalized_quota": norm.quota,
            "delta": norm.delta,
            "primes": system.primes,
            "seconds": timings,
        },
    )


def power_indices(game: WeightedGame, which: str = "both", **kw) -> PowerDistribution:
    if which == "bz":
        return banzhaf(game, **kw)
    if which == "ssi":
        return shapley_shubik(game, **kw)
    if which == "both":
        return banzhaf(game, **kw).merged(shapley_shubik(game, **kw))
    raise ValueError(f"unknown index kind {which!r}")


# ---------------------------------------------------------------------------
# quota sweep


@dataclass(frozen=True)
class SweepPoint:
    fraction: Fraction
    quota: int | None
    banzhaf_raw: tuple[int, ...] | None
    shares: tuple[Fraction, ...]


def _full_counts(weights: Sequence[int], p: int) -> np.ndarray:
    """c(x) over the whole range [0, C] mod p."""
    pp = U64(p)
    C = sum(weights)
    c = np.zeros(C + 1, dtype=U64)
    c[0] = 1
    reach = 0
    for w in weights:
        reach += w
        if w:
            c[w : reach + 1] = addmod(c[w : reach + 1], c[: reach + 1 - w], pp)
    return c


def quota_sweep(
    weights: Sequence[int],
    step: Fraction | str = Fraction(1, 1000),
    tie_rule: TieRule = "include_equal",
    system: ResidueSystem | None = None,
) -> list[SweepPoint]:
    """Banzhaf shares on the quota grid 0, step, 2*step, ..., 1.

    The count table over [0, C] does not depend on the quota, so it is built
    once; every grid point then only needs its own window sums.
    Grid points without a valid quota, or without swings, get 1/n each.
    """
    step = Fraction(step)
    if step <= 0 or (1 / step).denominator != 1:
        raise ValueError("step must divide 1 evenly")
    weights = [int(w) for w in weights]
    n, C = len(weights), sum(weights)
    fractions = [k * step for k in range(int(1 / step) + 1)]
    quotas: list[int | None] = []
    for r in fractions:
        try:
            quotas.append(resolve_quota(QuotaSpec(fraction=r, tie_rule=tie_rule), C) if r > 0 else None)
        except ValueError:
            quotas.append(None)
    valid = [q for q in quotas if q is not None]
    system = system or default_system(n)
    qs = np.array(valid, dtype=np.int64)
    # residues[j][i] = array over valid quotas
    residues = []
    for p in system.primes:
        pp = U64(p)
        prefix = exclusive_prefix(_full_counts(weights, p), p)
        per_player = []
        for w in weights:
            if w == 0 or qs.size == 0:
                per_player.append([0] * qs.size)
                continue
            K = -(-int(qs.max()) // w)
            t = np.maximum(qs[:, None] - np.arange(K + 1)[None, :] * w, 0)
            g = prefix[t]
            blocks = submod(g[:, :-1], g[:, 1:], pp)
            pos = [exact_sum(row) for row in blocks[:, 0::2]]
            neg = [exact_sum(row) for row in blocks[:, 1::2]]
            per_player.append([(a - b) % p for a, b in zip(pos, neg)])
        residues.append(per_player)
    uniform = tuple(Fraction(1, n) for _ in range(n))
    out = []
    v = 0
    for r, q in zip(fractions, quotas):
        if q is None:
            out.append(SweepPoint(r, None, None, uniform))
            continue
        raw = tuple(reconstruct([residues[j][i][v] for j in range(len(system))], system) for i in range(n))
        v += 1
        swings = sum(raw)
        shares = tuple(Fraction(b, swings) for b in raw) if swings else uniform
        out.append(SweepPoint(r, q, raw, shares))
    return out


# ---------------------------------------------------------------------------
# difference metrics


@dataclass(frozen=True)
class DifferenceReport:
    """Sums of absolute share differences on one player set; keys like ``dP_2015_85%``."""

    player_set: str
    players: tuple[int, ...]
    cells: dict[str, Fraction]

    def percent(self, key: str, digits: int = 2) -> str:
        return render_percent(self.cells[key], digits)


def abs_difference(a: Sequence[Fraction], b: Sequence[Fraction], players: Sequence[int]) -> Fraction:
    return sum((abs(a[i] - b[i]) for i in players), Fraction(0))


def players_without_big_five(n: int) -> tuple[int, ...]:
    drop = {i - 1 for i in BIG_FIVE}
    return tuple(i for i in range(n) if i not in drop)


def difference_report(
    dists: Mapping[tuple[int, str], PowerDistribution],
    players: Sequence[int] | None = None,
    player_set: str = "N",
    years: tuple[int, int] = (2015, 2016),
    quotas: Sequence[str] = ("85%", "50%"),
) -> DifferenceReport:
    """Bz-vs-SSI per (year, quota) and year-vs-year per index and quota.

    ``dists`` maps (year, quota label) to distributions carrying both indices.
    """
    first = next(iter(dists.values()))
    players = tuple(range(first.n)) if players is None else tuple(players)
    y0, y1 = years
    cells: dict[str, Fraction] = {}
    for q in quotas:
        for y in years:
            d = dists[(y, q)]
            cells[f"dP_{y}_{q}"] = abs_difference(d.banzhaf_share, d.ssi_share, players)
        a, b = dists[(y0, q)], dists[(y1, q)]
        if a.n != b.n:
            raise ValueError("distributions use different player indexing")
        cells[f"dBz_{q}"] = abs_difference(a.banzhaf_share, b.banzhaf_share, players)
        cells[f"dSSI_{q}"] = abs_difference(a.ssi_share, b.ssi_share, players)
    return DifferenceReport(player_set, players, cells)


def render_percent(x: Fraction, digits: int = 3) -> str:
    """100*x rounded half-even to ``digits`` decimals."""
    with localcontext() as ctx:
        ctx.prec = 60
        d = Decimal(x.numerator) * 100 / Decimal(x.denominator)
        return str(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


def render_share(x: Fraction, digits: int = 5) -> str:
    with localcontext() as ctx:
        ctx.prec = 60
        d = Decimal(x.numerator) / Decimal(x.denominator)
        return str(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))

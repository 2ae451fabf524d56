"""Weighted games and their normalized form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Literal, Sequence

TieRule = Literal["include_equal", "strict"]


@dataclass(frozen=True)
class WeightedGame:
    """[q; w_1, ..., w_n]: a coalition wins iff its weight reaches ``quota``."""

    quota: int
    weights: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        weights = tuple(int(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "quota", int(self.quota))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(weights):
                raise ValueError("labels and weights differ in length")
        if not weights:
            raise ValueError("a game needs at least one player")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be non-negative")
        if self.quota < 1:
            raise ValueError("quota must be at least 1 (the empty coalition must lose)")
        if self.quota > sum(weights):
            raise ValueError("quota exceeds the weight sum (the grand coalition must win)")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> int:
        return sum(self.weights)

    def wins(self, coalition_weight: int) -> bool:
        return coalition_weight >= self.quota


@dataclass(frozen=True)
class NormalizedGame:
    """Preprocessed game with 1 <= w'_i <= delta, weights non-increasing.

    ``players[j]`` is the original index of the j-th normalized player;
    ``stripped`` lists the original indices removed for zero weight.
    """

    quota: int
    weights: tuple[int, ...]
    players: tuple[int, ...]
    stripped: tuple[int, ...]
    n_original: int

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> int:
        return sum(self.weights)

    @property
    def delta(self) -> int:
        return delta(self)

    def as_game(self) -> WeightedGame:
        return WeightedGame(self.quota, self.weights)


@dataclass(frozen=True)
class VectorWeightedGame:
    """Intersection of k weighted games on the same players."""

    games: tuple[WeightedGame, ...]

    def __post_init__(self) -> None:
        games = tuple(self.games)
        object.__setattr__(self, "games", games)
        if not games:
            raise ValueError("need at least one game")
        if len({g.n for g in games}) != 1:
            raise ValueError("all member games must have the same number of players")

    @property
    def k(self) -> int:
        return len(self.games)

    @property
    def n(self) -> int:
        return self.games[0].n

    @property
    def quotas(self) -> tuple[int, ...]:
        return tuple(g.quota for g in self.games)

    @property
    def totals(self) -> tuple[int, ...]:
        return tuple(g.total for g in self.games)

    def weight_vector(self, i: int) -> tuple[int, ...]:
        return tuple(g.weights[i] for g in self.games)

    def wins(self, coalition: Sequence[int]) -> bool:
        return all(sum(g.weights[j] for j in coalition) >= g.quota for g in self.games)


@dataclass(frozen=True)
class QuotaSpec:
    """Absolute quota, or a fraction of the weight sum with a tie rule."""

    absolute: int | None = None
    fraction: Fraction | None = None
    tie_rule: TieRule = "include_equal"

    def __post_init__(self) -> None:
        if (self.absolute is None) == (self.fraction is None):
            raise ValueError("give exactly one of absolute or fraction")
        if self.fraction is not None:
            object.__setattr__(self, "fraction", Fraction(self.fraction))
            if not 0 < self.fraction <= 1:
                raise ValueError("fractional quota must lie in (0, 1]")
        if self.tie_rule not in ("include_equal", "strict"):
            raise ValueError(f"unknown tie rule {self.tie_rule!r}")

    @classmethod
    def parse(cls, text: str, tie_rule: TieRule = "include_equal") -> "QuotaSpec":
        """``"85%"``, ``"0.85"``, ``"17/20"`` are fractions; ``"3"`` is absolute."""
        text = text.strip()
        if text.endswith("%"):
            return cls(fraction=Fraction(text[:-1]) / 100, tie_rule=tie_rule)
        if "/" in text or "." in text:
            return cls(fraction=Fraction(text), tie_rule=tie_rule)
        return cls(absolute=int(text), tie_rule=tie_rule)

    def describe(self) -> str:
        if self.absolute is not None:
            return str(self.absolute)
        op = ">=" if self.tie_rule == "include_equal" else ">"
        return f"w(S) {op} {self.fraction} * C"


def resolve_quota(spec: QuotaSpec, weight_sum: int) -> int:
    """Smallest integer t such that ``w(S) >= t`` encodes the quota rule."""
    if weight_sum < 1:
        raise ValueError("weight sum must be at least 1")
    if spec.absolute is not None:
        t = spec.absolute
    else:
        target = spec.fraction * weight_sum
        if target < 1:
            raise ValueError(f"r*C = {target} is below 1: the quota would admit (almost) every coalition")
        t = ceil(target) if spec.tie_rule == "include_equal" else floor(target) + 1
    if t < 1:
        raise ValueError("resolved quota is 0: the empty coalition would win")
    if t > weight_sum:
        raise ValueError(f"resolved quota {t} exceeds the weight sum {weight_sum}")
    return t


def normalize(game: WeightedGame) -> NormalizedGame:
    """Cap weights at q, shrink vetoers to C-q+1, drop zero weights, sort."""
    q = game.quota
    w = [min(q, x) for x in game.weights]
    # Shrinking one vetoer lowers C and q by the same amount, so C-q is fixed;
    # the loop still re-checks until nothing changes.
    changed = True
    while changed:
        changed = False
        slack = sum(w) - q
        for i, x in enumerate(w):
            if x > slack + 1:
                q -= x - (slack + 1)
                w[i] = slack + 1
                changed = True
    stripped = tuple(i for i, x in enumerate(w) if x == 0)
    # counting sort by weight, descending; ties keep original order
    buckets: dict[int, list[int]] = {}
    for i, x in enumerate(w):
        if x:
            buckets.setdefault(x, []).append(i)
    players = tuple(i for x in sorted(buckets, reverse=True) for i in buckets[x])
    return NormalizedGame(
        quota=q,
        weights=tuple(w[i] for i in players),
        players=players,
        stripped=stripped,
        n_original=game.n,
    )


def delta(game: NormalizedGame | WeightedGame) -> int:
    """min(q, C - q + 1), the size of the cheaper counting side."""
    return min(game.quota, game.total - game.quota + 1)

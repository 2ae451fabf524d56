"""Coalition counting kernels: per weight, per weight and size, and swing recovery.

All tables hold residues modulo the primes of a ResidueSystem, one numpy
uint64 row per prime.

Coordinates. A forward table counts coalitions S by w(S) = x on [0, q].
A backward table counts them on [q, C]; internally the sized backward kernel
works on the complement R = N \\ S, with y = C - x and r = n - s, because the
backward recurrence read in those coordinates is the forward one with
quota C - q. Swing recovery then has a single form in both directions:

    c_wo(y, r) = sum_j (-1)^j c(y - j*w, r - j)

so a window of w consecutive cells below a threshold T splits into blocks of
width w with alternating signs, and each block sum is a difference of two
prefix sums.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import accumulate
from typing import Callable, Literal, Sequence

import numpy as np

from .game import NormalizedGame, WeightedGame, normalize
from .residue import (
    ResidueSystem,
    ResidueVector,
    addmod,
    addmod_into,
    default_system,
    exact_sum,
    prefix_sums_inplace,
    reconstruct,
    submod,
)

Direction = Literal["forward", "backward"]
U64 = np.uint64


def workers(parallel: bool | int, system: ResidueSystem) -> int:
    """Thread count for per-prime passes: True means one per prime, an int caps it."""
    if parallel is True:
        return len(system)
    return max(1, min(int(parallel), len(system)))


def _map_primes(fn: Callable[[int, int], np.ndarray], system: ResidueSystem, parallel: bool | int) -> list:
    if workers(parallel, system) > 1:
        with ThreadPoolExecutor(max_workers=workers(parallel, system)) as pool:
            return list(pool.map(lambda a: fn(*a), enumerate(system.primes)))
    return [fn(j, p) for j, p in enumerate(system.primes)]


@dataclass(frozen=True)
class CountTable:
    """c(x) for x in [start, start + length); ``values[j]`` holds residues mod primes[j]."""

    direction: Direction
    quota: int
    total: int
    start: int
    values: np.ndarray
    system: ResidueSystem

    @property
    def stop(self) -> int:
        return self.start + self.values.shape[1] - 1

    def residue(self, x: int) -> ResidueVector:
        if not self.start <= x <= self.stop:
            raise IndexError(f"weight {x} outside tracked range [{self.start}, {self.stop}]")
        return ResidueVector(tuple(int(v) for v in self.values[:, x - self.start]))

    def exact(self, x: int) -> int:
        return reconstruct(self.residue(x), self.system)

    def exact_all(self) -> list[int]:
        return [reconstruct(col, self.system) for col in self.values.T.tolist()]

    def exact_range_sum(self, lo: int, hi: int) -> int:
        """Exact sum of c(x) over lo <= x <= hi (clipped to the tracked range)."""
        lo, hi = max(lo, self.start), min(hi, self.stop)
        if lo > hi:
            return 0
        a, b = lo - self.start, hi - self.start + 1
        res = [exact_sum(self.values[j, a:b]) % p for j, p in enumerate(self.system.primes)]
        return reconstruct(res, self.system)

    def mirrored(self) -> tuple[np.ndarray, int]:
        """Rows in complement coordinates y = C - x (backward) or as-is (forward), plus T.

        T is the exclusive top of the swing window: forward T = q, backward
        T = C - q + 1.
        """
        if self.direction == "forward":
            return self.values, self.quota
        return self.values[:, ::-1], self.total - self.quota + 1


def forward_counts(game: NormalizedGame, system: ResidueSystem | None = None, parallel_primes: bool | int = False) -> CountTable:
    """Coalitions per weight on [0, q], adding one player at a time."""
    system = system or default_system(game.n)
    q, ws = game.quota, game.weights
    reach = [min(q, s) for s in accumulate(ws)]

    def one(_, p):
        pp = U64(p)
        c = np.zeros(q + 1, dtype=U64)
        c[0] = 1
        for w, hi in zip(ws, reach):
            if hi < w:
                continue
            # descending in-place update == old-value semantics
            c[w : hi + 1] = addmod(c[w : hi + 1], c[0 : hi + 1 - w], pp)
        return c

    rows = _map_primes(one, system, parallel_primes)
    return CountTable("forward", q, game.total, 0, np.vstack(rows), system)


def backward_counts(game: NormalizedGame, system: ResidueSystem | None = None, parallel_primes: bool | int = False) -> CountTable:
    """Coalitions per weight on [q, C], removing one player at a time from the grand coalition."""
    system = system or default_system(game.n)
    q, C, ws = game.quota, game.total, game.weights
    before = [0, *accumulate(ws)]

    def one(_, p):
        pp = U64(p)
        c = np.zeros(C - q + 1, dtype=U64)
        c[C - q] = 1
        for i, w in enumerate(ws):
            lo = max(q + w, C - before[i])
            if lo > C:
                continue
            a, b = lo - q, C - q + 1
            # x ascending: c(x - w) += c(x) reads c(x) before it is touched
            c[a - w : b - w] = addmod(c[a - w : b - w], c[a:b], pp)
        return c

    rows = _map_primes(one, system, parallel_primes)
    return CountTable("backward", q, C, q, np.vstack(rows), system)


def counts_by_delta(game: NormalizedGame, system: ResidueSystem | None = None, parallel_primes: bool | int = False) -> CountTable:
    """Forward when q <= C - q + 1 (ties go forward), else backward."""
    if game.quota <= game.total - game.quota + 1:
        return forward_counts(game, system, parallel_primes)
    return backward_counts(game, system, parallel_primes)


# ---------------------------------------------------------------------------
# weight-and-size tables


@dataclass
class RaggedRows:
    """One prime's c(y, r): ``rows[r]`` is (offset, array) or None when row r is empty.

    Row r is stored on [offset, offset + len) which covers every y with
    c(y, r) possibly nonzero: y >= sum of the r smallest weights and
    y <= min(cap, sum of the r largest weights).
    """

    cap: int
    rows: list[tuple[int, np.ndarray] | None]
    prefixed: bool = False

    def value(self, y: int, r: int) -> int:
        if self.prefixed:
            raise ValueError("rows hold prefix sums, not counts")
        if not 0 <= r < len(self.rows) or self.rows[r] is None:
            return 0
        off, arr = self.rows[r]
        return int(arr[y - off]) if off <= y < off + arr.shape[0] else 0

    def cells(self) -> int:
        return sum(a.shape[0] for _, a in (row for row in self.rows if row is not None))


def sized_rows(weights: Sequence[int], cap: int, p: int) -> RaggedRows:
    """Count subsets of ``weights`` (sorted non-increasing) by weight <= cap and size, mod p.

    Row bounds use the sorted prefix/suffix sums; the same bounds restricted
    to the first i players prune each stage of the update.
    """
    ws = list(weights)
    n = len(ws)
    pp = U64(p)
    top = [0, *accumulate(ws)]  # top[r] = sum of the r largest
    low = [0, *accumulate(reversed(ws))]  # low[r] = sum of the r smallest
    rows: list[tuple[int, np.ndarray] | None] = []
    for r in range(n + 1):
        lo, hi = low[r], min(cap, top[r])
        rows.append((lo, np.zeros(hi - lo + 1, dtype=U64)) if lo <= hi else None)
    rows[0][1][0] = 1
    longest = max(a.shape[0] for _, a in (x for x in rows if x is not None))
    scratch = np.empty(longest, dtype=U64)

    for i, w in enumerate(ws):
        # sources: subsets of the first i players of size r-1, weight in
        # [top[i] - top[i-r+1], min(cap, top[r-1])]
        for r in range(min(i + 1, n), 0, -1):
            src_lo = top[i] - top[i - r + 1]
            src_hi = min(cap, top[r - 1])
            dst_lo, dst_hi = src_lo + w, min(cap, src_hi + w)
            if dst_lo > dst_hi:
                continue
            s_off, s_arr = rows[r - 1]
            d_off, d_arr = rows[r]
            m = dst_hi - dst_lo + 1
            dst = d_arr[dst_lo - d_off : dst_lo - d_off + m]
            src = s_arr[src_lo - s_off : src_lo - s_off + m]
            addmod_into(dst, src, pp, scratch[:m])
    return RaggedRows(cap, rows)


@dataclass(frozen=True)
class SizedCountTable:
    """c(x, s) per prime, stored as ragged rows in complement coordinates when backward."""

    direction: Direction
    quota: int
    total: int
    n: int
    system: ResidueSystem
    per_prime: tuple[RaggedRows, ...]

    def residue(self, x: int, s: int) -> ResidueVector:
        y, r = (x, s) if self.direction == "forward" else (self.total - x, self.n - s)
        return ResidueVector(tuple(t.value(y, r) for t in self.per_prime))

    def exact(self, x: int, s: int) -> int:
        return reconstruct(self.residue(x, s), self.system)

    def tracked(self) -> range:
        if self.direction == "forward":
            return range(0, self.quota + 1)
        return range(self.quota, self.total + 1)


def _sized_cap(game: NormalizedGame, direction: Direction) -> int:
    return game.quota if direction == "forward" else game.total - game.quota


def _sized(game: NormalizedGame, system: ResidueSystem | None, direction: Direction, parallel_primes: bool | int) -> SizedCountTable:
    system = system or default_system(game.n)
    cap = _sized_cap(game, direction)
    tabs = _map_primes(lambda _, p: sized_rows(game.weights, cap, p), system, parallel_primes)
    return SizedCountTable(direction, game.quota, game.total, game.n, system, tuple(tabs))


def forward_counts_sized(game: NormalizedGame, system: ResidueSystem | None = None, parallel_primes: bool | int = False) -> SizedCountTable:
    return _sized(game, system, "forward", parallel_primes)


def backward_counts_sized(game: NormalizedGame, system: ResidueSystem | None = None, parallel_primes: bool | int = False) -> SizedCountTable:
    return _sized(game, system, "backward", parallel_primes)


def sized_by_delta(game: NormalizedGame, system: ResidueSystem | None = None, parallel_primes: bool | int = False) -> SizedCountTable:
    if game.quota <= game.total - game.quota + 1:
        return forward_counts_sized(game, system, parallel_primes)
    return backward_counts_sized(game, system, parallel_primes)


# ---------------------------------------------------------------------------
# swing recovery


@dataclass(frozen=True)
class SwingTable:
    """c_wo(x) (kind "without", on [0, q-1]) or c_w(x) (kind "with", on [q, C]) for one player."""

    kind: Literal["without", "with"]
    player_weight: int
    quota: int
    total: int
    start: int
    values: np.ndarray
    system: ResidueSystem

    def exact(self, x: int) -> int:
        col = self.values[:, x - self.start]
        return reconstruct([int(v) for v in col], self.system)

    def exact_all(self) -> list[int]:
        return [reconstruct(col, self.system) for col in self.values.T.tolist()]

    def window(self) -> tuple[int, int]:
        w, q = self.player_weight, self.quota
        if self.kind == "without":
            return max(0, q - w), q - 1
        return q, min(self.total, q + w - 1)

    def banzhaf_numerator(self) -> int:
        """Number of swings: sum of the table over the player's critical window."""
        lo, hi = self.window()
        a, b = lo - self.start, hi - self.start + 1
        res = [exact_sum(self.values[j, a:b]) % p for j, p in enumerate(self.system.primes)]
        return reconstruct(res, self.system)


def _unroll(rows: np.ndarray, w: int, primes: Sequence[int]) -> np.ndarray:
    """Apply (I + S)^-1 along axis 1, S = shift up by w: A(y) -> sum_j (-1)^j A(y - j w).

    Uses (I + S)^-1 = (I - S)(I + S^2)(I + S^4)... , log(len/w) passes.
    """
    out = rows.copy()
    n = out.shape[1]
    pcol = np.array(primes, dtype=U64)[:, None]
    m, first = w, True
    while m < n:
        shifted = out[:, : n - m].copy()
        if first:
            out[:, m:] = submod(out[:, m:], shifted, pcol)
            first = False
        else:
            out[:, m:] = addmod(out[:, m:], shifted, pcol)
        m <<= 1
    return out


def swings_without(table: CountTable, player_weight: int) -> SwingTable:
    """c_wo(x) = c(x) for x < w, then c_wo(x) = c(x) - c_wo(x - w), on [0, q-1]."""
    if table.direction != "forward":
        raise ValueError("swings_without needs a forward table")
    if player_weight < 1:
        raise ValueError("player weight must be positive")
    q = table.quota
    vals = _unroll(table.values[:, :q], player_weight, table.system.primes)
    return SwingTable("without", player_weight, q, table.total, 0, vals, table.system)


def swings_with(table: CountTable, player_weight: int) -> SwingTable:
    """c_w(x) = c(x) for x > C - w, then c_w(x) = c(x) - c_w(x + w), on [q, C]."""
    if table.direction != "backward":
        raise ValueError("swings_with needs a backward table")
    if player_weight < 1:
        raise ValueError("player weight must be positive")
    vals = _unroll(table.values[:, ::-1], player_weight, table.system.primes)[:, ::-1]
    return SwingTable("with", player_weight, table.quota, table.total, table.quota, np.ascontiguousarray(vals), table.system)


def exclusive_prefix(row: np.ndarray, p: int) -> np.ndarray:
    """P with P[j] = sum of row[:j] mod p, length len(row) + 1."""
    out = np.empty(row.shape[0] + 1, dtype=U64)
    out[0] = 0
    out[1:] = row
    prefix_sums_inplace(out[1:], U64(p))
    return out


def prefix_rows_inplace(tab: RaggedRows, p: int) -> None:
    """Replace every stored row of ``tab`` by its exclusive prefix sums."""
    for r, row in enumerate(tab.rows):
        if row is not None:
            off, arr = row
            tab.rows[r] = (off, exclusive_prefix(arr, p))
    tab.prefixed = True


def _gather_prefix(prefix: np.ndarray, offset: int, t: np.ndarray) -> np.ndarray:
    """Sum of cells with coordinate < t, from an exclusive prefix row starting at ``offset``."""
    idx = t - offset
    np.clip(idx, 0, prefix.shape[0] - 1, out=idx)
    return prefix[idx]


def _boundaries(top: int, w: int) -> np.ndarray:
    k = np.arange(-(-top // w) + 1, dtype=np.int64)
    return np.maximum(top - k * w, 0)


def window_swing_residues(prefix: np.ndarray, top: int, weights: Sequence[int], p: int) -> list[int]:
    """Per player, sum over y in [top - w, top) of c_wo(y), mod p.

    ``prefix`` is the exclusive prefix-sum row of c over y = 0, 1, ...
    """
    pp = U64(p)
    out = []
    for w in weights:
        t = _boundaries(top, w)
        g = _gather_prefix(prefix, 0, t)
        blocks = submod(g[:-1], g[1:], pp)
        pos = exact_sum(blocks[0::2]) % p
        neg = exact_sum(blocks[1::2]) % p
        out.append((pos - neg) % p)
    return out


def sized_window_residues(tab: RaggedRows, top: int, w: int, n_sizes: int, p: int) -> list[int]:
    """For r = 0..n_sizes-1: sum over y in [top - w, top) of c_wo(y, r), mod p.

    Rows of ``tab`` must already hold exclusive prefix sums (prefix_rows_inplace).
    """
    if not tab.prefixed:
        raise ValueError("convert the rows with prefix_rows_inplace first")
    pp = U64(p)
    t = _boundaries(top, w)
    K = t.shape[0] - 1
    n_rows = len(tab.rows)
    blocks = np.zeros((n_rows, K), dtype=U64)
    for r, row in enumerate(tab.rows):
        if row is None:
            continue
        off, pre = row
        g = _gather_prefix(pre, off, t)
        blocks[r] = submod(g[:-1], g[1:], pp)
    # diagonal: S(r) = sum_k (-1)^k blocks[r - k, k]
    rr = np.arange(n_sizes)[:, None] - np.arange(K)[None, :]
    valid = rr >= 0
    diag = np.where(valid, blocks[np.clip(rr, 0, None), np.arange(K)[None, :]], U64(0))
    lo_mask = U64(0xFFFFFFFF)
    out = []
    sums: list[list[int]] = []
    for parity in (0, 1):
        part = diag[:, parity::2]
        lo = np.sum(part & lo_mask, axis=1, dtype=U64)
        hi = np.sum(part >> U64(32), axis=1, dtype=U64)
        sums.append([(int(h) << 32) + int(l_) for h, l_ in zip(hi, lo)])
    for a, b in zip(*sums):
        out.append((a - b) % p)
    return out


# ---------------------------------------------------------------------------
# coalition tallies


def tally_coalitions(game: NormalizedGame | WeightedGame, system: ResidueSystem | None = None) -> tuple[int, int]:
    """(losing, winning) coalition counts over the original player set.

    Only the cheaper side is counted; the other is 2**n minus it. Stripped
    zero-weight players double both counts.
    """
    norm = normalize(game) if isinstance(game, WeightedGame) else game
    table = counts_by_delta(norm, system)
    scale = 1 << len(norm.stripped)
    everything = 1 << norm.n
    if table.direction == "forward":
        losing = table.exact_range_sum(0, norm.quota - 1)
        winning = everything - losing
    else:
        winning = table.exact_range_sum(norm.quota, norm.total)
        losing = everything - winning
    return losing * scale, winning * scale

"""Multi-prime residue arithmetic with Chinese-remainder reconstruction.

Counting tables never hold big integers. Every cell is kept modulo a few
63-bit primes, updated with additions and subtractions only, and turned back
into an exact integer once at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np

# The 32 largest primes below 2**63, stored as offsets d with p = 2**63 - d.
# Primality is checked in the test suite.
PRIME_OFFSETS: tuple[int, ...] = (
    25, 165, 259, 301, 375, 387, 391, 409, 457, 471, 517, 529, 549, 627, 649, 669,
    711, 735, 751, 849, 871, 891, 915, 1011, 1069, 1095, 1129, 1179, 1221, 1237, 1249, 1297,
)
LARGE_PRIMES: tuple[int, ...] = tuple(2**63 - d for d in PRIME_OFFSETS)


@dataclass(frozen=True)
class ResidueSystem:
    primes: tuple[int, ...]
    capacity: int = field(init=False, repr=False)
    # Garner constants: inverse of p_0 * ... * p_{j-1} modulo p_j.
    _garner: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        primes = tuple(int(p) for p in self.primes)
        if not primes:
            raise ValueError("a residue system needs at least one prime")
        if len(set(primes)) != len(primes):
            raise ValueError("primes must be pairwise distinct")
        if any(p < 2 or p >= 2**63 for p in primes):
            raise ValueError("primes must lie in [2, 2**63)")
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "capacity", prod(primes))
        consts = []
        for j, p in enumerate(primes):
            consts.append(pow(prod(primes[:j]) % p, -1, p) if j else 1)
        object.__setattr__(self, "_garner", tuple(consts))

    def __len__(self) -> int:
        return len(self.primes)

    def residues(self, x: int) -> "ResidueVector":
        return ResidueVector(tuple(x % p for p in self.primes))

    def zero(self) -> "ResidueVector":
        return ResidueVector((0,) * len(self.primes))

    def reconstruct(self, v: "ResidueVector | Sequence[int]") -> int:
        return reconstruct(v, self)


@dataclass(frozen=True)
class ResidueVector:
    residues: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.residues)

    def __iter__(self):
        return iter(self.residues)


def default_system(n_players: int) -> ResidueSystem:
    """Smallest prefix of LARGE_PRIMES whose product exceeds 2**n_players.

    Every cell of a coalition-count table, and every per-player swing total,
    is at most the number of coalitions 2**n, so this capacity suffices.
    """
    if n_players < 1:
        raise ValueError("n_players must be at least 1")
    target = 1 << n_players
    acc = 1
    for k, p in enumerate(LARGE_PRIMES, start=1):
        acc *= p
        if acc > target:
            return ResidueSystem(LARGE_PRIMES[:k])
    raise ValueError(
        f"{n_players} players need more than the {len(LARGE_PRIMES)} built-in primes"
    )


def _check_pair(a: ResidueVector, b: ResidueVector, system: ResidueSystem) -> None:
    if len(a) != len(system) or len(b) != len(system):
        raise ValueError("residue vectors do not belong to this system")


def add_mod(a: ResidueVector, b: ResidueVector, system: ResidueSystem) -> ResidueVector:
    _check_pair(a, b, system)
    out = []
    for x, y, p in zip(a, b, system.primes):
        s = x + y
        if s >= p:
            s -= p
        out.append(s)
    return ResidueVector(tuple(out))


def sub_mod(a: ResidueVector, b: ResidueVector, system: ResidueSystem) -> ResidueVector:
    _check_pair(a, b, system)
    out = []
    for x, y, p in zip(a, b, system.primes):
        s = x - y
        if s < 0:
            s += p
        out.append(s)
    return ResidueVector(tuple(out))


def reconstruct(v: ResidueVector | Sequence[int], system: ResidueSystem) -> int:
    """Unique integer in [0, capacity) with the given residues (mixed radix)."""
    residues = tuple(v)
    if len(residues) != len(system):
        raise ValueError("residue vector length does not match the system")
    primes = system.primes
    digits: list[int] = []
    for j, (r, p) in enumerate(zip(residues, primes)):
        # evaluate the partial mixed-radix number modulo p_j
        acc = 0
        for k in range(j - 1, -1, -1):
            acc = (acc * primes[k] + digits[k]) % p
        digits.append((r - acc) * system._garner[j] % p)
    x = 0
    for k in range(len(digits) - 1, -1, -1):
        x = x * primes[k] + digits[k]
    return x


def reconstruct_many(columns: Iterable[Sequence[int]], system: ResidueSystem) -> list[int]:
    return [reconstruct(c, system) for c in columns]


# Vectorised kernels over uint64 arrays. Residues are < p < 2**63, so the sum of
# two of them fits in 64 bits; after the add, min(s, s - p) picks the reduced
# value because s - p wraps around to something larger than s when s < p.


def addmod_into(dst: np.ndarray, src: np.ndarray, p: np.uint64, scratch: np.ndarray | None = None) -> None:
    """dst <- (dst + src) mod p, in place."""
    np.add(dst, src, out=dst)
    if scratch is None:
        scratch = np.empty_like(dst)
    np.subtract(dst, p, out=scratch)
    np.minimum(dst, scratch, out=dst)


def submod_into(dst: np.ndarray, src: np.ndarray, p: np.uint64, scratch: np.ndarray | None = None) -> None:
    """dst <- (dst - src) mod p, in place."""
    if scratch is None:
        scratch = np.empty_like(dst)
    # dst - src wraps when src > dst; adding p back lands in [0, p)
    np.subtract(dst, src, out=dst)
    np.add(dst, p, out=scratch)
    np.minimum(dst, scratch, out=dst)


def addmod(a: np.ndarray, b: np.ndarray, p: np.uint64) -> np.ndarray:
    out = np.add(a, b)
    np.minimum(out, out - p, out=out)
    return out


def submod(a: np.ndarray, b: np.ndarray, p: np.uint64) -> np.ndarray:
    out = np.subtract(a, b)
    np.minimum(out, out + p, out=out)
    return out


def prefix_sums_inplace(row: np.ndarray, p: np.uint64) -> None:
    """Inclusive prefix sums mod p, in place (log-step scan; numpy has no modular cumsum)."""
    n = row.shape[0]
    if n < 2:
        return
    scratch = np.empty(n, dtype=np.uint64)
    reduced = np.empty(n, dtype=np.uint64)
    k = 1
    while k < n:
        # row[k:] += row[:-k], reading the values from before this step
        tail = scratch[: n - k]
        np.add(row[k:], row[: n - k], out=tail)
        np.subtract(tail, p, out=reduced[: n - k])
        np.minimum(tail, reduced[: n - k], out=row[k:])
        k <<= 1


def exact_sum(values: np.ndarray) -> int:
    """Exact integer sum of uint64 values below 2**63, via 32-bit limbs."""
    if values.size == 0:
        return 0
    v = values.astype(np.uint64, copy=False).ravel()
    lo = int(np.sum(v & np.uint64(0xFFFFFFFF), dtype=np.uint64))
    hi = int(np.sum(v >> np.uint64(32), dtype=np.uint64))
    return (hi << 32) + lo

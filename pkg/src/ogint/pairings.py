"""Pair partitions of {1,...,2k} and their type combinatorics.

Provides the canonical enumeration of perfect matchings (Brauer diagrams),
the block count of the join of two pairings, segmentation types r with their
exact counting coefficients K_r, and the normalized coefficients K'_r used by
the compressed expansion of the integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import dfact
from .matrices import ExponentMatrix

__all__ = [
    "Pairing",
    "PairingCapError",
    "enumerate_pairings",
    "pairing_count",
    "join_block_count",
    "pairing_type",
    "enumerate_types",
    "count_of_type",
    "two_row_type_range",
    "kprime_two_row",
    "kprime",
]

DEFAULT_PAIRING_CAP = 2_000_000


class PairingCapError(RuntimeError):
    """Enumeration would exceed the configured diagram cap."""


@dataclass(frozen=True)
class Pairing:
    """A perfect matching of {1,...,2k}, stored canonically.

    Each pair is (small, large); pairs are sorted by first element.
    """

    pairs: tuple[tuple[int, int], ...]

    def __init__(self, pairs: Iterable[Sequence[int]]):
        canon = tuple(sorted((min(a, b), max(a, b)) for a, b in pairs))
        object.__setattr__(self, "pairs", canon)
        pts = [x for p in canon for x in p]
        if sorted(pts) != list(range(1, 2 * len(canon) + 1)):
            raise ValueError(f"not a perfect matching of 1..{2 * len(canon)}: {canon}")

    @property
    def k(self) -> int:
        return len(self.pairs)

    def delta(self, idx: Sequence[int]) -> int:
        """1 iff the multi-index is constant on every pair, else 0."""
        if len(idx) != 2 * self.k:
            raise ValueError(f"multi-index length {len(idx)} != {2 * self.k}")
        for a, b in self.pairs:
            if idx[a - 1] != idx[b - 1]:
                return 0
        return 1

    def __str__(self) -> str:
        return "{" + ",".join(f"({a},{b})" for a, b in self.pairs) + "}"


def pairing_count(k: int) -> int:
    """Number of pairings of 2k points: (2k-1)(2k-3)...1."""
    return dfact(2 * k)


def enumerate_pairings(k: int, cap: int = DEFAULT_PAIRING_CAP) -> list[Pairing]:
    """All pairings of {1,...,2k} in canonical order.

    Order: recursively pair the smallest unmatched point with each larger
    unmatched point, ascending.  The first pairing is {(1,2),(3,4),...}.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if pairing_count(k) > cap:
        raise PairingCapError(
            f"{pairing_count(k)} pairings at k={k} exceeds cap {cap}"
        )
    out: list[Pairing] = []
    points = list(range(1, 2 * k + 1))

    def rec(remaining: tuple[int, ...], acc: list[tuple[int, int]]) -> None:
        if not remaining:
            out.append(Pairing(list(acc)))
            return
        first = remaining[0]
        for i in range(1, len(remaining)):
            acc.append((first, remaining[i]))
            rec(remaining[1:i] + remaining[i + 1 :], acc)
            acc.pop()

    rec(tuple(points), [])
    return out


def join_block_count(p1: Pairing, p2: Pairing) -> int:
    """Number of blocks of the join partition (components of the union graph)."""
    if p1.k != p2.k:
        raise ValueError(f"pairings have different sizes: {p1.k} vs {p2.k}")
    n = 2 * p1.k
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for a, b in p1.pairs:
        union(a - 1, b - 1)
    for a, b in p2.pairs:
        union(a - 1, b - 1)
    return sum(1 for i in range(n) if find(i) == i)


def _segment_of(point: int, bounds: Sequence[int]) -> int:
    # bounds[i] = sum of the first i segment lengths; point is 1-based
    for i in range(len(bounds) - 1):
        if bounds[i] < point <= bounds[i + 1]:
            return i
    raise ValueError(f"point {point} outside segmentation")


def pairing_type(p: Pairing, a: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Type of a pairing w.r.t. the segmentation of {1,...,2k} by block sizes a.

    Entry (i, j) counts elements of segment i paired to elements of segment j;
    a pair inside segment i contributes 2 to the diagonal entry (i, i).
    """
    if sum(a) != 2 * p.k:
        raise ValueError(f"segment sizes sum to {sum(a)}, expected {2 * p.k}")
    bounds = [0]
    for v in a:
        bounds.append(bounds[-1] + v)
    m = len(a)
    r = [[0] * m for _ in range(m)]
    for x, y in p.pairs:
        i, j = _segment_of(x, bounds), _segment_of(y, bounds)
        r[i][j] += 1
        r[j][i] += 1
    return tuple(tuple(row) for row in r)


def enumerate_types(a: Sequence[int]) -> list[tuple[tuple[int, ...], ...]]:
    """All symmetric natural matrices with even diagonal and row sums a.

    Deterministic lexicographic order over the upper triangle (diagonal first
    within each row).  Empty when no such matrix exists (e.g. odd total).
    """
    a = list(a)
    m = len(a)
    out: list[tuple[tuple[int, ...], ...]] = []
    r = [[0] * m for _ in range(m)]

    def rec(i: int, j: int, remaining: list[int]) -> None:
        if i == m:
            if all(v == 0 for v in remaining):
                out.append(tuple(tuple(row) for row in r))
            return
        if j == m:
            if remaining[i] != 0:
                return
            rec(i + 1, i + 1, remaining)
            return
        if j == i:
            # diagonal entries are even
            for v in range(0, remaining[i] + 1, 2):
                r[i][i] = v
                remaining[i] -= v
                rec(i, j + 1, remaining)
                remaining[i] += v
            r[i][i] = 0
            return
        cap = min(remaining[i], remaining[j])
        for v in range(cap + 1):
            r[i][j] = r[j][i] = v
            remaining[i] -= v
            remaining[j] -= v
            rec(i, j + 1, remaining)
            remaining[i] += v
            remaining[j] += v
        r[i][j] = r[j][i] = 0

    rec(0, 0, a)
    return out


def count_of_type(r: Sequence[Sequence[int]], a: Sequence[int]) -> int:
    """Exact number of pairings of the segmented set {1,...,sum(a)} with type r.

    Each segment's elements are split into the groups headed to the other
    segments (multinomial), cross groups are matched bijectively (r_kl! ways,
    counted once per unordered segment pair), and the elements remaining in
    segment i are matched among themselves (dfact(r_ii) ways).
    """
    m = len(a)
    rr = [list(row) for row in r]
    for i in range(m):
        if sum(rr[i]) != a[i]:
            raise ValueError(f"row {i} of type sums to {sum(rr[i])}, expected {a[i]}")
        if rr[i][i] % 2 != 0:
            raise ValueError("diagonal of a type matrix must be even")
        for j in range(m):
            if rr[i][j] != rr[j][i]:
                raise ValueError("type matrix must be symmetric")
    total = 1
    for i in range(m):
        ways = math.factorial(a[i])
        for j in range(m):
            if j != i:
                ways //= math.factorial(rr[i][j])
        ways //= math.factorial(rr[i][i])
        total *= ways
    for i in range(m):
        for j in range(i + 1, m):
            total *= math.factorial(rr[i][j])
        total *= dfact(rr[i][i])
    return total


def two_row_type_range(a: int, b: int) -> list[int]:
    """Cross-pair counts available in a two-entry column: min(a,b), min-2, ..., 0 or 1.

    Empty when a and b have different parities.
    """
    if (a - b) % 2 != 0:
        return []
    m = min(a, b)
    return list(range(m, -1, -2))


def scalar_to_type(a: int, b: int, r: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Two-row type matrix associated to a scalar cross count r."""
    return ((a - r, r), (r, b - r))


def kprime_two_row(a: int, b: int, r: int) -> Fraction:
    """Normalized coefficient of the two-row expansion:

    (a+1)!!(b+1)!! / (r! (a-r+1)!! (b-r+1)!!)  in the shifted convention.
    """
    return Fraction(
        dfact(a + 1) * dfact(b + 1),
        math.factorial(r) * dfact(a - r + 1) * dfact(b - r + 1),
    )


def kprime(rs: Sequence[Sequence[Sequence[int]]], a: ExponentMatrix) -> Fraction:
    """Normalized coefficient for a per-column type assignment.

    K'_r(a) = prod_j K_{r_j}(column_j) / prod_ij dfact(a_ij).
    """
    if len(rs) != a.q:
        raise ValueError("one type matrix per column required")
    num = 1
    for j, r in enumerate(rs):
        num *= count_of_type(r, a.column(j))
    den = 1
    for row in a.rows:
        for v in row:
            den *= dfact(v)
    return Fraction(num, den)

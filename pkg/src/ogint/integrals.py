"""The soft-normalized integral J and its closed forms.

J(a) rescales I(a) by dfact(n-1) prod dfact(a_ij) / dfact(sum a + n - 1); it is
invariant under row/column permutation, transposition, and compression, equals
the parity sign on one-row matrices, and admits product-of-factorial closed
forms on cross and spark shapes.  Two-row matrices are evaluated by the
expansion over per-column cross counts, which needs no Gram solve at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactnum import BracketSpec, bracket, dfact
from .matrices import ExponentMatrix
from .pairings import (
    count_of_type,
    enumerate_types,
    kprime_two_row,
    two_row_type_range,
)
from . import weingarten as wg

__all__ = [
    "j_from_integral",
    "j_normalization_factor",
    "j_value",
    "one_row",
    "n2_closed",
    "n2_closed_j",
    "two_row_j",
    "cross_j",
    "spark_j",
    "flip_f",
    "ExpansionTerm",
    "elementary_expansion",
    "transmutation_check",
    "compression_check",
    "parity_one_row",
    "parity_n2",
    "parity_cross",
    "parity_spark",
]


# --- parity signs, one rule per closed form -------------------------------

def parity_one_row(entries: Sequence[int]) -> int:
    """1 if all entries are even, else 0."""
    return 1 if all(v % 2 == 0 for v in entries) else 0


def parity_n2(a: int, b: int, c: int, d: int) -> int:
    """1 if a,b,c,d all even; -1 if all odd; 0 otherwise."""
    parities = {a % 2, b % 2, c % 2, d % 2}
    if parities == {0}:
        return 1
    if parities == {1}:
        return -1
    return 0


def parity_cross(entries: Sequence[int]) -> int:
    """1 if all entries are even, else 0."""
    return parity_one_row(entries)


def parity_spark(x: int, y: int, a: int, b: int) -> int:
    """1 if x,y,a,b all even, else 0."""
    return parity_one_row((x, y, a, b))


# --- normalization ---------------------------------------------------------

def j_normalization_factor(a: ExponentMatrix, n: int) -> Fraction:
    """The soft normalization I(a) = factor * J(a)."""
    num = dfact(n - 1)
    for row in a.rows:
        for v in row:
            num *= dfact(v)
    return Fraction(num, dfact(a.total + n - 1))


def j_from_integral(a: ExponentMatrix, n: int, value: Fraction) -> Fraction:
    return value / j_normalization_factor(a, n)


# --- closed forms ----------------------------------------------------------

def one_row(a: Sequence[int], n: int) -> Fraction:
    """Integral of a product of powers of one row's entries (sphere moments).

    eps * dfact(n-1) prod dfact(a_i) / dfact(sum a + n - 1), eps = 1 iff all
    exponents are even.
    """
    eps = parity_one_row(a)
    if eps == 0:
        return Fraction(0)
    num = dfact(n - 1)
    for v in a:
        num *= dfact(v)
    return Fraction(num, dfact(sum(a) + n - 1))


def n2_closed(a: int, b: int, c: int, d: int) -> Fraction:
    """Exact 2x2 integral [[a,c],[b,d]] at n = 2 (circle reduction)."""
    eps = parity_n2(a, b, c, d)
    if eps == 0:
        return Fraction(0)
    return Fraction(eps * dfact(a + d) * dfact(b + c), dfact(a + b + c + d + 1))


def n2_closed_j(a: int, b: int, c: int, d: int) -> Fraction:
    """J form of the n = 2 value: eps * [0,0,(a+d),(b+c) / a,b,c,d] at n = 2."""
    eps = parity_n2(a, b, c, d)
    if eps == 0:
        return Fraction(0)
    return eps * bracket([0, 0, a + d, b + c], [a, b, c, d], 2)


def two_row_j(a: ExponentMatrix | Sequence[Sequence[int]], n: int) -> Fraction:
    """J of a two-row matrix by the per-column cross-count expansion.

    Sum over r_j in the per-column ranges of
    prod K'_{r_j} * (-1)^{R/2} dfact(R) * [0,(A+B-R) / A,B]  at n.
    Fully closed form; no Gram matrix is touched.
    """
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    if a.p != 2:
        raise ValueError("two_row_j requires exactly two rows")
    if n < 2:
        raise ValueError("two_row_j requires n >= 2")
    top, bottom = a.rows
    A, B = sum(top), sum(bottom)
    if A % 2 or B % 2:
        return Fraction(0)
    ranges = [two_row_type_range(x, y) for x, y in zip(top, bottom)]
    if any(not r for r in ranges):
        return Fraction(0)
    total = Fraction(0)

    def rec(j: int, coeff: Fraction, rsum: int) -> None:
        nonlocal total
        if j == len(ranges):
            sign = -1 if (rsum // 2) % 2 else 1
            total += (
                coeff
                * sign
                * dfact(rsum)
                * bracket([0, A + B - rsum], [A, B], n)
            )
            return
        x, y = top[j], bottom[j]
        for r in ranges[j]:
            rec(j + 1, coeff * kprime_two_row(x, y, r), rsum + r)

    rec(0, Fraction(1), 0)
    return total


def cross_j(a: int, b: int, c: Sequence[int] | int, n: int) -> Fraction:
    """J of a cross: a column (a, b) extended by top-only entries c.

    Value eps * [0,(b+C) / b,C] with C = sum(c); eps = 1 iff every entry is
    even.  The same value covers the plus-shaped p x q crosses after
    compression of the arms.
    """
    cs = [c] if isinstance(c, int) else list(c)
    C = sum(cs)
    eps = parity_cross([a, b] + cs)
    if eps == 0:
        return Fraction(0)
    return bracket([0, b + C], [b, C], n)


def spark_j(x: int, y: int, a: int, b: int, n: int) -> Fraction:
    """J of the shape [[x,a,0],[y,0,b]].

    Value eps * [0,(a+b+x),(a+b+y) / (a+b),(a+x),(b+y)]; eps = 1 iff x,y,a,b
    are all even.
    """
    eps = parity_spark(x, y, a, b)
    if eps == 0:
        return Fraction(0)
    return bracket([0, a + b + x, a + b + y], [a + b, a + x, b + y], n)


def flip_f(a: ExponentMatrix | Sequence[Sequence[int]], n: int) -> Fraction:
    """The column-flip invariant F = [A,B / 0,(A+B)] * J on two-row matrices."""
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    if a.p != 2:
        raise ValueError("flip_f requires exactly two rows")
    A, B = a.row_sums()
    return bracket([A, B], [0, A + B], n) * two_row_j(a, n)


# --- elementary expansion ---------------------------------------------------

@dataclass(frozen=True)
class ExpansionTerm:
    """One term of the expansion of I (or J) over column types."""

    types: tuple[tuple[tuple[int, ...], ...], ...]  # one type matrix per column
    coefficient: Fraction  # K_r (plain) or K'_r (compressed)
    matrix: ExponentMatrix  # E_r (plain) or E'_r (compressed)


def _aggregate(types, p: int) -> list[list[int]]:
    agg = [[0] * p for _ in range(p)]
    for t in types:
        for i in range(p):
            for j in range(p):
                agg[i][j] += t[i][j]
    return agg


def _expansion_matrix(agg: Sequence[Sequence[int]], p: int, compressed: bool) -> ExponentMatrix:
    cols: list[tuple[int, ...]] = []
    for i in range(p):
        for j in range(i, p):
            if i == j:
                if agg[i][i] == 0:
                    continue
                if compressed:
                    col = [0] * p
                    col[i] = agg[i][i]
                    cols.append(tuple(col))
                else:
                    col = [0] * p
                    col[i] = 2
                    cols.extend([tuple(col)] * (agg[i][i] // 2))
            else:
                col = [0] * p
                col[i] = 1
                col[j] = 1
                cols.extend([tuple(col)] * (agg[i][j]))
    if not cols:
        return ExponentMatrix(((0,),) * p) if p else ExponentMatrix(())
    return ExponentMatrix(tuple(zip(*cols)))


def elementary_expansion(
    a: ExponentMatrix | Sequence[Sequence[int]], compressed: bool = False
) -> list[ExpansionTerm]:
    """Expand I(a) (or J(a) in compressed form) over per-column types.

    Plain form:  I(a) = sum K_r(a) I(E_r(a)) with E_r built from 1-blocks at
    the mixed positions and 2-blocks on the diagonal.  Compressed form:
    J(a) = sum K'_r(a) J(E'_r(a)) where the diagonal blocks merge into a
    single entry per row.
    """
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    if any(s % 2 for s in a.col_sums()):
        raise ValueError("column sums must be even for the expansion")
    per_col = [enumerate_types(a.column(j)) for j in range(a.q)]
    norm = 1
    for row in a.rows:
        for v in row:
            norm *= dfact(v)
    terms: list[ExpansionTerm] = []

    def rec(j: int, chosen: list, count: int) -> None:
        if j == a.q:
            agg = _aggregate(chosen, a.p)
            coeff = Fraction(count, norm) if compressed else Fraction(count)
            terms.append(
                ExpansionTerm(tuple(chosen), coeff, _expansion_matrix(agg, a.p, compressed))
            )
            return
        for t in per_col[j]:
            chosen.append(t)
            rec(j + 1, chosen, count * count_of_type(t, a.column(j)))
            chosen.pop()

    rec(0, [], 1)
    return terms


# --- identity checkers ------------------------------------------------------

def transmutation_check(
    a: Sequence[int], b: Sequence[int], c: Sequence[int], n: int
) -> bool:
    """J_n of [[a,c],[b,0]] equals [0,(B+C) / B,C]_n * J_{n+C} of [[a],[b]].

    The traded columns c must be even: an odd c_j zeroes the left side alone.
    """
    a, b, c = list(a), list(b), list(c)
    if len(a) != len(b):
        raise ValueError("row vectors must have equal length")
    if any(v % 2 for v in c):
        raise ValueError("transmuted columns must have even entries")
    B, C = sum(b), sum(c)
    lhs = two_row_j([a + c, b + [0] * len(c)], n)
    rhs = bracket([0, B + C], [B, C], n) * two_row_j([a, b], n + C)
    return lhs == rhs


def compression_check(
    a: Sequence[int],
    c: Sequence[int],
    b: Sequence[Sequence[int]],
    n: int,
    evaluator=None,
) -> bool:
    """I of [[a,c],[b,0]] equals (prod dfact(c_j) / dfact(sum c)) I of [[a,sum c],[b,0]].

    The top row is [a c]; the matrix b sits under a and zeros sit under c.
    Checked with the Gram-based evaluator (or any evaluator passed in).
    """
    a, c = list(a), list(c)
    if any(v % 2 for v in c):
        raise ValueError("compressed columns must have even entries")
    rows_b = [list(r) for r in b]
    if any(len(r) != len(a) for r in rows_b):
        raise ValueError("b must have one column per entry of a")
    ev = evaluator if evaluator is not None else wg.integral
    zeros = [0] * len(c)
    lhs_m = ExponentMatrix([a + c] + [r + zeros for r in rows_b])
    rhs_m = ExponentMatrix([a + [sum(c)]] + [r + [0] for r in rows_b])
    factor = Fraction(math.prod(dfact(v) for v in c), dfact(sum(c)))
    return ev(lhs_m, n) == factor * ev(rhs_m, n)


# --- shape detection and dispatch ------------------------------------------

def _cross_shape(a: ExponentMatrix) -> tuple[int, int] | None:
    """(B, C) when all nonzero entries lie in one row plus one column."""
    nz = [(i, j) for i, row in enumerate(a.rows) for j, v in enumerate(row) if v]
    for r in {i for i, _ in nz}:
        for c in {j for _, j in nz}:
            if all(i == r or j == c for i, j in nz):
                B = sum(a.rows[i][c] for i in range(a.p) if i != r)
                C = sum(a.rows[r][j] for j in range(a.q) if j != c)
                return B, C
    return None


def _spark_args(a: ExponentMatrix) -> tuple[int, int, int, int] | None:
    """(x, y, top, bottom) for a two-row shape with at most one full column."""
    if a.p != 2:
        return None
    top, bottom = a.rows
    full = [j for j in range(a.q) if top[j] and bottom[j]]
    if len(full) > 1:
        return None
    x, y = (top[full[0]], bottom[full[0]]) if full else (0, 0)
    t = sum(top[j] for j in range(a.q) if j not in full)
    b = sum(bottom[j] for j in range(a.q) if j not in full)
    return x, y, t, b


def j_value(
    a: ExponentMatrix | Sequence[Sequence[int]],
    n: int,
    method: str = "auto",
    trace: list | None = None,
) -> Fraction:
    """J(a) at dimension n.

    method: 'auto' picks the cheapest exact path (one-row / cross / spark
    closed forms, then the two-row expansion, then the Gram route); 'two_row',
    'closed_form' and 'weingarten' force their paths.  The Gram route raises
    GramSingularError when the linear system is rank deficient; the closed
    forms never do.
    """
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    if n < 2:
        raise ValueError("J requires n >= 2")
    eff = a.strip_zeros()
    if eff.total == 0:
        return Fraction(1)
    if any(s % 2 for s in eff.row_sums()) or any(s % 2 for s in eff.col_sums()):
        return Fraction(0)
    if method == "weingarten":
        return j_from_integral(a, n, wg.integral(eff, n))
    if eff.p > eff.q:
        eff = eff.transpose()  # J is transposition invariant

    if method in ("auto", "closed_form"):
        if eff.p == 1:
            return Fraction(parity_one_row(eff.rows[0]))
        shape = _cross_shape(eff)
        if shape is not None:
            B, C = shape
            return bracket([0, B + C], [B, C], n)
        if eff.p == 2:
            sp = _spark_args(eff)
            if sp is not None:
                return spark_j(sp[0], sp[1], sp[2], sp[3], n)
        if n == 2 and eff.p <= 2 and eff.q <= 2:
            rows = [list(r) + [0] * (2 - eff.q) for r in eff.rows]
            while len(rows) < 2:
                rows.append([0, 0])
            return n2_closed_j(rows[0][0], rows[1][0], rows[0][1], rows[1][1])
        if method == "closed_form":
            raise ValueError("no closed form applies to this shape")

    if method in ("auto", "two_row"):
        if eff.p == 2:
            if trace is not None:
                trace.extend(_two_row_trace(eff, n))
            return two_row_j(eff, n)
        if method == "two_row":
            raise ValueError("two_row method requires a matrix with two nonzero rows")

    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    return j_from_integral(a, n, wg.integral(eff, n))


def _two_row_trace(a: ExponentMatrix, n: int) -> list[dict]:
    top, bottom = a.rows
    A, B = sum(top), sum(bottom)
    ranges = [two_row_type_range(x, y) for x, y in zip(top, bottom)]
    rows: list[dict] = []

    def rec(j: int, coeff: Fraction, rs: list[int]) -> None:
        if j == len(ranges):
            rsum = sum(rs)
            sign = -1 if (rsum // 2) % 2 else 1
            val = coeff * sign * dfact(rsum) * bracket([0, A + B - rsum], [A, B], n)
            rows.append(
                {
                    "r": list(rs),
                    "kprime": str(coeff),
                    "term": str(val),
                }
            )
            return
        for r in ranges[j]:
            rec(j + 1, coeff * kprime_two_row(top[j], bottom[j], r), rs + [r])

    rec(0, Fraction(1), [])
    return rows


def integral_value(
    a: ExponentMatrix | Sequence[Sequence[int]],
    n: int,
    method: str = "auto",
) -> Fraction:
    """I(a) through the same dispatch as j_value."""
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    if method == "weingarten":
        return wg.integral(a, n)
    return j_value(a, n, method=method) * j_normalization_factor(a, n)

"""Three-row diagonal-with-tail integrals: recurrence, closed form, conjectured integrality.

Covers exponent matrices [[a,0,0],[0,b,0],[x,y,c]]: a memoized downward
recurrence in c, the equivalent explicit double sum, the diagonal joint
moments, the degree-2 tail identity, and the integrality scan of the
normalized diagonal values.  All values are J-normalized; use the soft
normalization factor to convert to plain integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactnum import bracket, dfact
from .matrices import ExponentMatrix
from .integrals import elementary_expansion, ExpansionTerm

__all__ = [
    "ThreeRowConfig",
    "j3_recurrence",
    "j3_closed",
    "diagonal_moments",
    "prop64_check",
    "conjecture73",
    "three_row_expansion",
]


@dataclass(frozen=True)
class ThreeRowConfig:
    a: int
    b: int
    c: int
    x: int = 0
    y: int = 0

    @property
    def length(self) -> int:
        return self.a + self.b + self.c + self.x + self.y

    def matrix(self) -> ExponentMatrix:
        return ExponentMatrix(
            [[self.a, 0, 0], [0, self.b, 0], [self.x, self.y, self.c]]
        )


def _require_three_row_domain(cfg: ThreeRowConfig, n: int) -> bool:
    """Returns False when the value is 0 by parity; raises outside n >= 3."""
    if n < 3:
        raise ValueError("three-row formulas need n >= 3 (denominator c+n-2)")
    return all(v % 2 == 0 for v in (cfg.a, cfg.b, cfg.c, cfg.x, cfg.y))


def _spark_initial(a: int, b: int, x: int, y: int, n: int) -> Fraction:
    # J at c = 0: the transposed spark [[a,0,x],[0,b,y]] value
    return bracket([0, a + b + x, a + b + y], [a + b, a + x, b + y], n)


def j3_recurrence(
    cfg: ThreeRowConfig | None = None,
    n: int | None = None,
    *,
    a: int | None = None,
    b: int | None = None,
    c: int | None = None,
    x: int = 0,
    y: int = 0,
) -> Fraction:
    """J of [[a,0,0],[0,b,0],[x,y,c]] by downward recursion in c.

    J_{c}(x,y) = ((L+n) J_{c-2}(x,y) - (x+1) J_{c-2}(x+2,y)
                 - (y+1) J_{c-2}(x,y+2)) / (c+n-4),
    with L = a+b+(c-2)+x+y, grounded at the c = 0 spark value.
    """
    if cfg is None:
        cfg = ThreeRowConfig(a, b, c, x, y)
    if n is None:
        raise ValueError("dimension n is required")
    if not _require_three_row_domain(cfg, n):
        return Fraction(0)
    memo: dict[tuple[int, int, int], Fraction] = {}

    def jc(cc: int, xx: int, yy: int) -> Fraction:
        if cc == 0:
            return _spark_initial(cfg.a, cfg.b, xx, yy, n)
        key = (cc, xx, yy)
        got = memo.get(key)
        if got is not None:
            return got
        L = cfg.a + cfg.b + (cc - 2) + xx + yy
        val = (
            (L + n) * jc(cc - 2, xx, yy)
            - (xx + 1) * jc(cc - 2, xx + 2, yy)
            - (yy + 1) * jc(cc - 2, xx, yy + 2)
        ) / (cc - 2 + n - 2)
        memo[key] = val
        return val

    return jc(cfg.c, cfg.x, cfg.y)


def j3_closed(
    a: int, b: int, c: int, x: int, y: int, n: int
) -> Fraction:
    """Explicit double sum for J of [[a,0,0],[0,b,0],[x,y,c]].

    Sum over k <= c/2 and r+s = k of
    (-1)^k C(c/2,k) C(k,r) [x+2r / x]_2 [y+2s / y]_2
    [0 / c]_{n-1} [L / L-c+2k]_{n+1}
    [0,(a+b+x+2r),(a+b+y+2s) / (a+b),(a+x+2r),(b+y+2s)]_n,  L = a+b+c+x+y.
    """
    cfg = ThreeRowConfig(a, b, c, x, y)
    if not _require_three_row_domain(cfg, n):
        return Fraction(0)
    L = cfg.length
    total = Fraction(0)
    for k in range(c // 2 + 1):
        for r in range(k + 1):
            s = k - r
            term = Fraction(
                (-1) ** k * math.comb(c // 2, k) * math.comb(k, r)
            )
            term *= bracket([x + 2 * r], [x], 2)
            term *= bracket([y + 2 * s], [y], 2)
            term *= bracket([0], [c], n - 1)
            term *= bracket([L], [L - c + 2 * k], n + 1)
            term *= bracket(
                [0, a + b + x + 2 * r, a + b + y + 2 * s],
                [a + b, a + x + 2 * r, b + y + 2 * s],
                n,
            )
            total += term
    return total


def diagonal_moments(a: int, b: int, c: int, n: int) -> Fraction:
    """J of diag(a,b,c): the joint moments of three diagonal entries.

    Sum over k <= c/2, r+s = k of
    (-1)^k C(c/2,k) (k!/2^k) C(2r,r) C(2s,s)
    [0 / c]_{n-1} [(a+b+c) / (a+b+2k)]_{n+1}
    [0,(a+b+2r),(a+b+2s) / (a+b),(a+2r),(b+2s)]_n.
    """
    cfg = ThreeRowConfig(a, b, c)
    if not _require_three_row_domain(cfg, n):
        return Fraction(0)
    total = Fraction(0)
    for k in range(c // 2 + 1):
        coeff = Fraction((-1) ** k * math.comb(c // 2, k) * math.factorial(k), 2**k)
        inner = Fraction(0)
        for r in range(k + 1):
            s = k - r
            term = Fraction(math.comb(2 * r, r) * math.comb(2 * s, s))
            term *= bracket(
                [0, a + b + 2 * r, a + b + 2 * s],
                [a + b, a + 2 * r, b + 2 * s],
                n,
            )
            inner += term
        total += (
            coeff
            * bracket([0], [c], n - 1)
            * bracket([a + b + c], [a + b + 2 * k], n + 1)
            * inner
        )
    return total


def prop64_check(a: int, b: int, n: int) -> bool:
    """Tail-2 identity: J(diag(a,b,2)) against its closed product-plus-one form.

    diag(a,b,2) value = [0,(a+b) / (a+2),(b+2)] * (1 + (a+b+n)(a+n-2)(b+n-2)/(n-2)).
    Documents why no column-flip principle survives at three rows: the right
    side is not a plain product of factorial quotients.
    """
    if a % 2 or b % 2:
        return diagonal_moments(a, b, 2, n) == 0
    lhs = diagonal_moments(a, b, 2, n)
    rhs = bracket([0, a + b], [a + 2, b + 2], n) * (
        1 + Fraction((a + b + n) * (a + n - 2) * (b + n - 2), n - 2)
    )
    return lhs == rhs


def conjecture73(a: int, b: int, c: int, n: int) -> tuple[Fraction, bool]:
    """Normalized diagonal value [c/0]_{n-1} [(b+c)/0]_n J(diag(a,b,c)).

    Requires a >= b >= c.  Returns (value, is_integer); integrality is
    reported, never asserted.
    """
    if not (a >= b >= c >= 0):
        raise ValueError("conjecture73 expects a >= b >= c >= 0")
    value = (
        bracket([c], [0], n - 1)
        * bracket([b + c], [0], n)
        * diagonal_moments(a, b, c, n)
    )
    return value, value.denominator == 1


def three_row_expansion(
    a: ExponentMatrix | Sequence[Sequence[int]],
) -> list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], Fraction, ExponentMatrix]]:
    """Compressed expansion of a three-row matrix as (r, s, t) mixed-pair vectors.

    Each term carries the per-column counts of row12, row13, row23 cross
    pairs, the normalized coefficient K', and the compressed elementary
    matrix; summing K' * J(matrix) over the terms recovers J(a).
    """
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    if a.p != 3:
        raise ValueError("three_row_expansion requires exactly three rows")
    out = []
    for term in elementary_expansion(a, compressed=True):
        r = tuple(t[0][1] for t in term.types)
        s = tuple(t[0][2] for t in term.types)
        tt = tuple(t[1][2] for t in term.types)
        out.append((r, s, tt, term.coefficient, term.matrix))
    return out

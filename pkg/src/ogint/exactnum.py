"""Exact rational arithmetic, the shifted double factorial, and bracket quotients.

Every value in the exact core is a ``fractions.Fraction`` (arbitrary precision,
always in lowest terms, positive denominator).  No floating point enters here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Rational",
    "BracketDomainError",
    "dfact",
    "BracketSpec",
    "bracket",
    "format_rational",
    "parse_rational",
]

Rational = Fraction


class BracketDomainError(ValueError):
    """A shifted double factorial was requested at a negative argument.

    This always indicates a caller bug (a formula applied below its dimension
    range) and is never silently absorbed.
    """


_DFACT_CACHE: dict[int, int] = {}


def dfact(m: int) -> int:
    """Shifted double factorial: (m-1)(m-3)(m-5)..., stopping at 1 or 2.

    The empty product is 1, so dfact(0) = dfact(1) = dfact(2) = 1.  For m >= 2
    this equals the standard double factorial of m-1.

    >>> dfact(4), dfact(0), dfact(7)
    (3, 1, 48)
    """
    if m < 0:
        raise BracketDomainError(f"dfact argument must be >= 0, got {m}")
    cached = _DFACT_CACHE.get(m)
    if cached is not None:
        return cached
    out = 1
    for f in range(m - 1, 1, -2):
        out *= f
    _DFACT_CACHE[m] = out
    return out


@dataclass(frozen=True)
class BracketSpec:
    """A formal quotient of shifted double factorials [a1..ak / b1..bs].

    Evaluated at dimension n, the value is
    prod dfact(a_i + n - 2) / prod dfact(b_i + n - 2).
    The spec is "balanced" when both lists have the same length and sum;
    balanced brackets tend to 1 as n grows.
    """

    numerators: tuple[int, ...]
    denominators: tuple[int, ...]

    def __init__(self, numerators: Iterable[int], denominators: Iterable[int]):
        object.__setattr__(self, "numerators", tuple(int(a) for a in numerators))
        object.__setattr__(self, "denominators", tuple(int(b) for b in denominators))
        if any(a < 0 for a in self.numerators) or any(b < 0 for b in self.denominators):
            raise ValueError("bracket terms must be natural numbers")

    def eval(self, n: int) -> Fraction:
        """Evaluate at integer dimension n (all arguments x + n - 2 must be >= 0)."""
        num = 1
        for a in self.numerators:
            num *= dfact(a + n - 2)
        den = 1
        for b in self.denominators:
            den *= dfact(b + n - 2)
        return Fraction(num, den)

    def is_balanced(self) -> bool:
        return (
            len(self.numerators) == len(self.denominators)
            and sum(self.numerators) == sum(self.denominators)
        )

    def __mul__(self, other: "BracketSpec") -> "BracketSpec":
        return BracketSpec(
            self.numerators + other.numerators,
            self.denominators + other.denominators,
        )

    def __str__(self) -> str:
        num = " ".join(str(a) for a in self.numerators) or "-"
        den = " ".join(str(b) for b in self.denominators) or "-"
        return f"[{num} / {den}]"


def bracket(numerators: Sequence[int], denominators: Sequence[int], n: int) -> Fraction:
    """Evaluate [numerators / denominators] at dimension n."""
    return BracketSpec(numerators, denominators).eval(n)


def format_rational(x: Fraction) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1 (sign on p)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    """Parse the "p/q" / "p" serialization back into an exact rational."""
    return Fraction(s.strip())

"""Exponent matrices: the p x q natural-number arguments of the integrals.

Plumbing shared by every evaluator: shape queries, admissibility, zero
stripping, and the CLI row-colon parse format ("a11,a12:a21,a22").
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = ["ExponentMatrix", "parse_matrix_spec"]


@dataclass(frozen=True)
class ExponentMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Iterable[Iterable[int]]):
        rs = tuple(tuple(int(v) for v in row) for row in rows)
        if rs and any(len(r) != len(rs[0]) for r in rs):
            raise ValueError("exponent matrix must be rectangular")
        if any(v < 0 for r in rs for v in r):
            raise ValueError("exponents must be natural numbers")
        object.__setattr__(self, "rows", rs)

    @property
    def p(self) -> int:
        return len(self.rows)

    @property
    def q(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def total(self) -> int:
        return sum(sum(r) for r in self.rows)

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(r) for r in self.rows)

    def col_sums(self) -> tuple[int, ...]:
        return tuple(sum(r[j] for r in self.rows) for j in range(self.q))

    def is_admissible(self) -> bool:
        """True when every row sum and every column sum is even."""
        return all(s % 2 == 0 for s in self.row_sums()) and all(
            s % 2 == 0 for s in self.col_sums()
        )

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "ExponentMatrix":
        return ExponentMatrix(zip(*self.rows)) if self.rows else self

    def strip_zeros(self) -> "ExponentMatrix":
        """Drop all-zero rows and columns (the monomial is unchanged)."""
        rows = [r for r in self.rows if any(r)]
        if not rows:
            return ExponentMatrix(())
        keep = [j for j in range(len(rows[0])) if any(r[j] for r in rows)]
        return ExponentMatrix(tuple(tuple(r[j] for j in keep) for r in rows))

    def permute_rows(self, perm: Sequence[int]) -> "ExponentMatrix":
        return ExponentMatrix(self.rows[i] for i in perm)

    def permute_cols(self, perm: Sequence[int]) -> "ExponentMatrix":
        return ExponentMatrix(tuple(r[j] for j in perm) for r in self.rows)

    def __str__(self) -> str:
        return ":".join(",".join(str(v) for v in r) for r in self.rows)


def parse_matrix_spec(spec: str) -> ExponentMatrix:
    """Parse "r11,r12:r21,r22" row-colon syntax, or @file / *.json for a JSON 2D array."""
    spec = spec.strip()
    if spec.startswith("@") or spec.endswith(".json"):
        path = spec[1:] if spec.startswith("@") else spec
        with open(path) as fh:
            data = json.load(fh)
        return ExponentMatrix(data)
    rows = []
    for part in spec.split(":"):
        rows.append([int(v) for v in part.split(",") if v.strip() != ""])
    return ExponentMatrix(rows)

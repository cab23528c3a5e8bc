"""Gram matrices over pairings, exact inversion, and the monomial integrator.

The Gram matrix G(pi, sigma) = n^{|pi v sigma|} is positive semidefinite, so
fraction-free elimination without pivoting either succeeds (all pivots are
leading principal minors > 0) or proves the matrix singular.  Columns of the
inverse are recovered by integer back-substitution scaled by the determinant,
so the whole pipeline stays in (big) integer arithmetic until the final
Fraction construction.
"""

from __future__ import annotations

import os
import pickle
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactnum import dfact
from .matrices import ExponentMatrix
from .pairings import Pairing, enumerate_pairings, join_block_count

try:  # GMP-backed integers cut elimination time roughly tenfold
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    _mpz = int

__all__ = [
    "GramSingularError",
    "GramMatrix",
    "WeingartenTable",
    "gram",
    "weingarten_table",
    "weingarten",
    "integral_monomial",
    "integral",
    "asymptotic_check",
    "AsymptoticReport",
    "clear_cache",
    "set_cache_limit",
]

CACHE_ENV_VAR = "OGINT_CACHE_DIR"


class GramSingularError(RuntimeError):
    """The Gram matrix at (k, n) is rank deficient.

    Callers must route to a closed form or a Monte Carlo estimate; no
    pseudo-inverse is ever substituted.
    """

    def __init__(self, k: int, n: int):
        super().__init__(
            f"Gram matrix singular at k={k}, n={n}; "
            f"use a closed form or sampling instead"
        )
        self.k = k
        self.n = n


@dataclass(frozen=True)
class GramMatrix:
    k: int
    n: int
    pairings: tuple[Pairing, ...]
    entries: tuple[tuple[int, ...], ...]


def gram(k: int, n: int, cap: int | None = None) -> GramMatrix:
    """Gram matrix of the pairings of {1,...,2k} at dimension n."""
    if k < 1 or n < 1:
        raise ValueError("gram requires k >= 1 and n >= 1")
    kw = {} if cap is None else {"cap": cap}
    ps = enumerate_pairings(k, **kw)
    rows = tuple(
        tuple(n ** join_block_count(p, q) for q in ps) for p in ps
    )
    return GramMatrix(k, n, tuple(ps), rows)


def _forward_bareiss(grm: GramMatrix):
    """Fraction-free forward elimination of [G | I].

    Returns (reduced augmented rows, pivots, det).  Pivots are the leading
    principal minors of G; a zero pivot proves singularity (G is PSD).
    """
    n_rows = len(grm.entries)
    width = 2 * n_rows
    rows = [
        [_mpz(v) for v in grm.entries[i]]
        + [_mpz(1) if j == i else _mpz(0) for j in range(n_rows)]
        for i in range(n_rows)
    ]
    prev = _mpz(1)
    pivots = []
    for m in range(n_rows):
        piv = rows[m][m]
        if piv == 0:
            raise GramSingularError(grm.k, grm.n)
        if piv < 0:
            raise AssertionError("PSD Gram matrix produced a negative pivot")
        for r in range(m + 1, n_rows):
            fac = rows[r][m]
            row_r = rows[r]
            row_m = rows[m]
            if fac == 0:
                for c in range(m + 1, width):
                    row_r[c] = (piv * row_r[c]) // prev
            else:
                for c in range(m + 1, width):
                    row_r[c] = (piv * row_r[c] - fac * row_m[c]) // prev
            row_r[m] = _mpz(0)
        pivots.append(piv)
        prev = piv
    return rows, pivots, pivots[-1]


class WeingartenTable:
    """Exact inverse-Gram columns at a fixed (k, n), built lazily.

    The forward elimination runs once; each requested column is then an
    integer back-substitution.  All cached columns satisfy G . w = e exactly.
    """

    def __init__(self, k: int, n: int, cap: int | None = None):
        self.k = k
        self.n = n
        self.gram = gram(k, n, cap=cap)
        self._reduced, self._pivots, self._det = _forward_bareiss(self.gram)
        self._index = {p: i for i, p in enumerate(self.gram.pairings)}
        self._columns: dict[int, tuple[int, ...]] = {}
        self._lock = threading.Lock()

    @property
    def det(self) -> int:
        return int(self._det)

    @property
    def pairings(self) -> tuple[Pairing, ...]:
        return self.gram.pairings

    def _solve_scaled(self, col: int) -> tuple[int, ...]:
        """Integer vector y with G . (y / det) = e_col."""
        size = len(self.gram.entries)
        rows = self._reduced
        det = self._det
        t = [rows[i][size + col] for i in range(size)]
        y = [_mpz(0)] * size
        for i in range(size - 1, -1, -1):
            acc = det * t[i]
            row = rows[i]
            for j in range(i + 1, size):
                acc -= row[j] * y[j]
            y[i] = acc // row[i]
        return tuple(int(v) for v in y)

    def scaled_column(self, sigma: Pairing | int) -> tuple[int, ...]:
        col = sigma if isinstance(sigma, int) else self._index[sigma]
        with self._lock:
            got = self._columns.get(col)
        if got is not None:
            return got
        y = self._solve_scaled(col)
        with self._lock:
            self._columns[col] = y
        return y

    def column(self, sigma: Pairing | int) -> list[Fraction]:
        det = self.det
        return [Fraction(v, det) for v in self.scaled_column(sigma)]

    def entry(self, pi: Pairing | int, sigma: Pairing | int) -> Fraction:
        row = pi if isinstance(pi, int) else self._index[pi]
        return Fraction(self.scaled_column(sigma)[row], self.det)

    def full_matrix(self) -> list[list[Fraction]]:
        size = len(self.gram.entries)
        cols = [self.column(j) for j in range(size)]
        return [[cols[j][i] for j in range(size)] for i in range(size)]

    def verify_inverse(self) -> bool:
        """Exact integer check that G . W = I on every column."""
        size = len(self.gram.entries)
        g = self.gram.entries
        det = self._det
        for j in range(size):
            y = [_mpz(v) for v in self.scaled_column(j)]
            for i in range(size):
                acc = sum(g[i][l] * y[l] for l in range(size))
                if acc != (det if i == j else 0):
                    return False
        return True


_table_cache: OrderedDict[tuple[int, int], WeingartenTable] = OrderedDict()
_table_lock = threading.Lock()
_cache_limit = 64
_disk_cache_enabled = True


def set_cache_limit(limit: int) -> None:
    global _cache_limit
    _cache_limit = max(1, limit)


def set_disk_cache(enabled: bool) -> None:
    global _disk_cache_enabled
    _disk_cache_enabled = enabled


def clear_cache() -> None:
    with _table_lock:
        _table_cache.clear()


def _disk_path(k: int, n: int) -> str | None:
    base = os.environ.get(CACHE_ENV_VAR)
    if not base or not _disk_cache_enabled:
        return None
    return os.path.join(base, f"weingarten_k{k}_n{n}.pkl")


def weingarten_table(k: int, n: int) -> WeingartenTable:
    """Cached table for (k, n); concurrent duplicate builds are idempotent."""
    key = (k, n)
    with _table_lock:
        tab = _table_cache.get(key)
        if tab is not None:
            _table_cache.move_to_end(key)
            return tab
    path = _disk_path(k, n)
    tab = None
    if path and os.path.exists(path):
        try:
            with open(path, "rb") as fh:
                tab = pickle.load(fh)
        except Exception:
            tab = None
    if tab is None:
        tab = WeingartenTable(k, n)
        if path:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            try:
                with open(path, "wb") as fh:
                    pickle.dump(tab, fh)
            except OSError:
                pass
    with _table_lock:
        _table_cache[key] = tab
        while len(_table_cache) > _cache_limit:
            _table_cache.popitem(last=False)
    return tab


def weingarten(k: int, n: int, pi: Pairing, sigma: Pairing) -> Fraction:
    """Entry (pi, sigma) of the inverse Gram matrix at (k, n)."""
    return weingarten_table(k, n).entry(pi, sigma)


def _compatible_pairings(idx: Sequence[int]) -> list[Pairing]:
    """Pairings whose delta is 1 on the multi-index (constant on every pair)."""
    size = len(idx)
    out: list[Pairing] = []

    def rec(remaining: tuple[int, ...], acc: list[tuple[int, int]]) -> None:
        if not remaining:
            out.append(Pairing(list(acc)))
            return
        first = remaining[0]
        for i in range(1, len(remaining)):
            if idx[remaining[i] - 1] == idx[first - 1]:
                acc.append((first, remaining[i]))
                rec(remaining[1:i] + remaining[i + 1 :], acc)
                acc.pop()

    rec(tuple(range(1, size + 1)), [])
    return out


def integral_monomial(i: Sequence[int], j: Sequence[int], n: int) -> Fraction:
    """Exact integral of u_{i1 j1} ... u_{i_{2k} j_{2k}} over the orthogonal group.

    Sums W(pi, sigma) over the pairings compatible with the row and column
    multi-indices.  Raises GramSingularError when the Gram matrix at (k, n)
    is not invertible.
    """
    if len(i) != len(j):
        raise ValueError("row and column multi-indices must have equal length")
    if len(i) % 2 != 0:
        return Fraction(0)
    if not i:
        return Fraction(1)
    k = len(i) // 2
    pis = _compatible_pairings(i)
    sigmas = _compatible_pairings(j)
    if not pis or not sigmas:
        return Fraction(0)
    tab = weingarten_table(k, n)
    idx = {p: m for m, p in enumerate(tab.pairings)}
    num = 0
    for s in sigmas:
        y = tab.scaled_column(idx[s])
        for p in pis:
            num += y[idx[p]]
    return Fraction(num, tab.det)


def _flatten(a: ExponentMatrix) -> tuple[list[int], list[int]]:
    i_idx: list[int] = []
    j_idx: list[int] = []
    for r, row in enumerate(a.rows, start=1):
        for c, v in enumerate(row, start=1):
            i_idx.extend([r] * v)
            j_idx.extend([c] * v)
    return i_idx, j_idx


def integral(a: ExponentMatrix | Sequence[Sequence[int]], n: int) -> Fraction:
    """I(a): the integral of prod u_ij^{a_ij} over the orthogonal group of size n.

    Returns 0 immediately when some row or column sum is odd.  The stripped
    matrix must fit inside an n x n orthogonal matrix.
    """
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    if n < 1:
        raise ValueError("n must be >= 1")
    if any(s % 2 for s in a.row_sums()) or any(s % 2 for s in a.col_sums()):
        return Fraction(0)
    eff = a.strip_zeros()
    if eff.total == 0:
        return Fraction(1)
    if eff.p > n or eff.q > n:
        raise ValueError(
            f"matrix references entries outside an {n}x{n} orthogonal matrix"
        )
    i_idx, j_idx = _flatten(eff)
    return integral_monomial(i_idx, j_idx, n)


@dataclass
class AsymptoticReport:
    """Large-n behavior of a single exponent matrix.

    deviations[i] = (n, n^k I(a) - eps * prod dfact(a_ij)) with k = total/2.
    The bound |dev| <= c_bound / n uses c_bound fitted at the first grid point
    (twice the observed n*|dev| there, so the margin absorbs the approach to
    the limiting coefficient).
    """

    matrix: ExponentMatrix
    epsilon: int
    leading: int
    deviations: list[tuple[int, Fraction]] = field(default_factory=list)
    c_bound: Fraction = Fraction(0)
    ok: bool = True


def asymptotic_check(
    a: ExponentMatrix | Sequence[Sequence[int]],
    n_list: Sequence[int] | None = None,
    evaluator=None,
) -> AsymptoticReport:
    """Check the decay n^k I(a) -> eps * prod dfact(a_ij) on a grid of n."""
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    if n_list is None:
        n_list = list(range(10, 51, 5))
    eps = 1 if all(v % 2 == 0 for row in a.rows for v in row) else 0
    lead = 1
    for row in a.rows:
        for v in row:
            lead *= dfact(v)
    lead *= eps
    k = a.total // 2
    ev = evaluator if evaluator is not None else integral
    report = AsymptoticReport(a, eps, lead)
    devs = []
    for n in n_list:
        val = ev(a, n)
        devs.append((n, Fraction(n) ** k * val - lead))
    report.deviations = devs
    n0, d0 = devs[0]
    report.c_bound = 2 * abs(d0) * n0
    report.ok = all(abs(d) * n <= report.c_bound for n, d in devs)
    return report

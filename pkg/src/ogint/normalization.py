"""Hyperoctahedral normalization of two-row integrals: P_r, Gamma, phi.

Gamma is the balanced bracket built from the subset-sum products P_r; the
normalized integral phi = J / Gamma is invariant under column permutations and
flips, trivial on crosses and at n = 2, and fully symmetric for two columns.
The exponent systems that pin Gamma down uniquely at q = 2, 3 are reproduced
here as exact integer linear systems over programmatically enumerated orbit
classes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import BracketSpec, bracket
from .matrices import ExponentMatrix
from .integrals import two_row_j

__all__ = [
    "GammaVanishesError",
    "p_product",
    "gamma_bracket",
    "gamma",
    "phi",
    "gamma_balanced_check",
    "rational_transmutation_check",
    "phi_property_battery",
    "orbit_symbols",
    "orbit_terms",
    "construction_exponents",
    "solve_normalization_exponents",
]


class GammaVanishesError(ZeroDivisionError):
    """phi = J / Gamma was requested at a point where Gamma evaluates to 0."""


def _two_rows(a) -> ExponentMatrix:
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    if a.p != 2:
        raise ValueError("normalization is defined for two-row matrices")
    return a


def p_product(a, r: int) -> tuple[int, ...]:
    """Multiset of sums over r-column subsets with one entry picked per column.

    Size 2^r * C(q, r); invariant as a multiset under column permutations and
    per-column flips.  Returned sorted.
    """
    a = _two_rows(a)
    if r < 0 or r > a.q:
        raise ValueError("subset size out of range")
    sums = []
    for subset in itertools.combinations(range(a.q), r):
        for picks in itertools.product((0, 1), repeat=r):
            sums.append(sum(a.rows[i][j] for i, j in zip(picks, subset)))
    return tuple(sorted(sums))


def gamma_bracket(a) -> BracketSpec:
    """The normalization bracket [0, P_q, P_{q-2}, ... / A, B, P_{q-1}, ...]."""
    a = _two_rows(a)
    q = a.q
    A, B = a.row_sums()
    nums: list[int] = [0]
    dens: list[int] = [A, B]
    for r in range(q, -1, -1):
        terms = p_product(a, r)
        if (q - r) % 2 == 0:
            nums.extend(terms)
        else:
            dens.extend(terms)
    return BracketSpec(nums, dens)


def gamma(a, n: int) -> Fraction:
    """Exact value of the normalization constant at dimension n."""
    return gamma_bracket(a).eval(n)


def phi(a, n: int) -> Fraction:
    """The normalized integral phi = J / Gamma."""
    a = _two_rows(a)
    g = gamma(a, n)
    if g == 0:
        raise GammaVanishesError(f"Gamma vanishes for {a} at n={n}")
    return two_row_j(a, n) / g


def gamma_balanced_check(a) -> bool:
    """The assembled Gamma bracket is balanced (equal counts and sums)."""
    return gamma_bracket(_two_rows(a)).is_balanced()


def rational_transmutation_check(
    a: Sequence[int], b: Sequence[int], c: Sequence[int], n: int
) -> bool:
    """Gamma_n of [[a,c],[b,0]] equals [0,(B+C) / B,C]_n * Gamma_{n+C} of [[a],[b]]."""
    a, b, c = list(a), list(b), list(c)
    if len(a) != len(b):
        raise ValueError("row vectors must have equal length")
    B, C = sum(b), sum(c)
    lhs = gamma([a + c, b + [0] * len(c)], n)
    rhs = bracket([0, B + C], [B, C], n) * gamma([a, b], n + C)
    return lhs == rhs


# --- the nine-property battery ----------------------------------------------

def _phi_or_none(rows, n):
    try:
        return phi(rows, n)
    except GammaVanishesError:
        return None


def _grid_columns(max_entry: int, q: int) -> Iterable[tuple[tuple[int, ...], ...]]:
    cols = list(itertools.product(range(max_entry + 1), repeat=2))
    yield from itertools.combinations_with_replacement(cols, q)


def _rows_from_cols(cols) -> list[list[int]]:
    return [list(c[0] for c in cols), list(c[1] for c in cols)]


def phi_property_battery(
    q_max: int = 3, max_entry: int = 4, n_values: Sequence[int] = (3, 4, 5, 6)
) -> dict:
    """Run the nine exact invariance/triviality properties of phi over a grid.

    Returns {property_name: {"pass": bool, "checked": int,
    "counterexamples": [...]}} with at most three counterexamples kept per
    property.
    """
    results: dict[str, dict] = {}

    def record(name: str, ok: bool, detail) -> None:
        slot = results.setdefault(
            name, {"pass": True, "checked": 0, "counterexamples": []}
        )
        slot["checked"] += 1
        if not ok:
            slot["pass"] = False
            if len(slot["counterexamples"]) < 3:
                slot["counterexamples"].append(detail)

    small_entry = min(max_entry, 4)
    for n in n_values:
        # (1) extension by a zero column
        for cols in _grid_columns(small_entry, 2):
            rows = _rows_from_cols(cols)
            ext = [rows[0] + [0], rows[1] + [0]]
            record(
                "extension",
                _phi_or_none(rows, n) == _phi_or_none(ext, n),
                {"matrix": rows, "n": n},
            )
        for q in range(1, q_max + 1):
            for cols in _grid_columns(small_entry if q > 2 else max_entry, q):
                rows = _rows_from_cols(cols)
                base = _phi_or_none(rows, n)
                # (2) row swap
                record(
                    "row_permutation",
                    base == _phi_or_none([rows[1], rows[0]], n),
                    {"matrix": rows, "n": n},
                )
                # (3) column permutation (one transposition generates enough
                # evidence on a grid of unordered column multisets)
                if q >= 2:
                    perm = [rows[0][::-1], rows[1][::-1]]
                    record(
                        "column_permutation",
                        base == _phi_or_none(perm, n),
                        {"matrix": rows, "n": n},
                    )
                # (4) single column flip
                flipped = [list(rows[0]), list(rows[1])]
                flipped[0][-1], flipped[1][-1] = flipped[1][-1], flipped[0][-1]
                record(
                    "column_flip",
                    base == _phi_or_none(flipped, n),
                    {"matrix": rows, "n": n},
                )
        # (5) compression and (6) transmutation on cross extensions; the
        # appended columns must be even or the left side vanishes alone
        for a0 in range(0, max_entry + 1):
            for b0 in range(0, max_entry + 1):
                for c1 in range(0, max_entry + 1, 2):
                    for c2 in range(0, max_entry + 1, 2):
                        m_split = [[a0, c1, c2], [b0, 0, 0]]
                        m_comp = [[a0, c1 + c2], [b0, 0]]
                        record(
                            "compression",
                            _phi_or_none(m_split, n) == _phi_or_none(m_comp, n),
                            {"matrix": m_split, "n": n},
                        )
                    m = [[a0, c1], [b0, 0]]
                    record(
                        "transmutation",
                        _phi_or_none(m, n) == _phi_or_none([[a0], [b0]], n + c1),
                        {"matrix": m, "n": n},
                    )
                for c1 in range(0, max_entry + 1):
                    val = _phi_or_none([[a0, c1], [b0, 0]], n)
                    record(
                        "cross_triviality",
                        val in (Fraction(0), Fraction(1), None),
                        {"matrix": [[a0, c1], [b0, 0]], "n": n, "phi": str(val)},
                    )
    # (8) triviality at n = 2 and (9) full symmetry at q = 2
    for cols in _grid_columns(max_entry, 2):
        rows = _rows_from_cols(cols)
        val2 = _phi_or_none(rows, 2)
        record(
            "n2_triviality",
            val2 in (Fraction(-1), Fraction(0), Fraction(1), None),
            {"matrix": rows, "phi": str(val2)},
        )
        a, c = rows[0]
        b, d = rows[1]
        for n in n_values:
            base = _phi_or_none(rows, n)
            ok = all(
                base == _phi_or_none([[pa, pc], [pb, pd]], n)
                for pa, pb, pc, pd in itertools.permutations((a, b, c, d))
            )
            record("q2_symmetry", ok, {"matrix": rows, "n": n})
    return results


# --- uniqueness of the normalization constant -------------------------------

def orbit_symbols(q: int) -> list[tuple[int, ...]]:
    """Nonincreasing per-column pick counts in {0,1,2}: the orbit class labels."""
    return [
        tuple(p)
        for p in itertools.combinations_with_replacement((2, 1, 0), q)
    ]


def orbit_terms(symbol: Sequence[int], q: int) -> list[frozenset]:
    """All sums in the orbit of a symbol, over a generic two-row q-column matrix.

    Entries are labeled ('t', j) / ('b', j); a sum is the set of labels picked.
    Multiset semantics: returned as a list (duplicates after specialization
    matter).
    """
    terms = []
    for assignment in set(itertools.permutations(symbol)):
        per_col_choices = []
        for j, cnt in enumerate(assignment):
            if cnt == 0:
                per_col_choices.append([()])
            elif cnt == 1:
                per_col_choices.append([(("t", j),), (("b", j),)])
            else:
                per_col_choices.append([(("t", j), ("b", j))])
        for combo in itertools.product(*per_col_choices):
            terms.append(frozenset(l for part in combo for l in part))
    return terms


def _cross_specialize(term: frozenset, q: int) -> frozenset:
    # bottom entries of columns 2..q are zero on a cross
    return frozenset(l for l in term if not (l[0] == "b" and l[1] > 0))


def construction_exponents(q: int) -> tuple[Fraction, ...]:
    """Orbit exponents of the subset-sum-product bracket (the Gamma builder).

    Support: pick-count patterns in {0,1} with r ones get (-1)^(q-r); the
    all-2 pattern (the full entry sum) gets -1; every pattern mixing a 2 with
    smaller counts gets 0.
    """
    out = []
    for s in orbit_symbols(q):
        if all(v == 2 for v in s):
            out.append(Fraction(-1))
        elif 2 in s:
            out.append(Fraction(0))
        else:
            r = sum(1 for v in s if v == 1)
            out.append(Fraction((-1) ** (q - r)))
    return tuple(out)


def solve_normalization_exponents(q: int) -> dict:
    """Solve the balancing + cross-triviality system for the orbit exponents.

    Builds the exact linear system over the orbit classes of a generic
    two-row matrix: the bracket must be balanced and must restrict on crosses
    to [(a+C)(b+C) / C,(a+b+C)].  The raw system is rank deficient (its
    nullity is reported), so the solver works inside the subset-sum-product
    ansatz: symbols mixing a full-column pick with smaller picks are excluded.
    Within that ansatz the solution is unique and integral.
    """
    if q < 2:
        raise ValueError("the exponent system needs q >= 2")
    symbols = orbit_symbols(q)
    terms = {s: orbit_terms(s, q) for s in symbols}

    # balancing: total term count and total slot count both vanish
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    rows.append([Fraction(len(terms[s])) for s in symbols])
    rhs.append(Fraction(0))
    rows.append([Fraction(sum(len(t) for t in terms[s])) for s in symbols])
    rhs.append(Fraction(0))

    # cross triviality: identify coefficients of every specialized formal sum
    target: dict[frozenset, int] = {}
    top = lambda j: ("t", j)
    bot = lambda j: ("b", j)
    arm = frozenset(top(j) for j in range(1, q))  # the C = sum of c_j block
    target[frozenset([top(0)]) | arm] = 1  # (a + C)
    target[frozenset([bot(0)]) | arm] = 1  # (b + C)
    target[arm] = target.get(arm, 0) - 1  # C
    target[frozenset([top(0), bot(0)]) | arm] = -1  # (a + b + C)

    all_sums = sorted(
        {
            _cross_specialize(t, q)
            for s in symbols
            for t in terms[s]
        }
        | set(target),
        key=lambda fs: (len(fs), sorted(fs)),
    )
    for fs in all_sums:
        row = []
        for s in symbols:
            row.append(
                Fraction(sum(1 for t in terms[s] if _cross_specialize(t, q) == fs))
            )
        rows.append(row)
        rhs.append(Fraction(target.get(fs, 0)))

    nullity = len(symbols) - _rank(rows)

    ansatz_rows = [list(r) for r in rows]
    ansatz_rhs = list(rhs)
    for i, s in enumerate(symbols):
        if 2 in s and not all(v == 2 for v in s):
            row = [Fraction(0)] * len(symbols)
            row[i] = Fraction(1)
            ansatz_rows.append(row)
            ansatz_rhs.append(Fraction(0))
    solution = _solve_unique(ansatz_rows, ansatz_rhs)

    # the ansatz solution must also solve the unrestricted system
    for row, b in zip(rows, rhs):
        assert sum(c * v for c, v in zip(row, solution)) == b
    return {
        "symbols": symbols,
        "exponents": tuple(solution),
        "raw_nullity": nullity,
    }


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    for col in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        m[rank] = [v / pv for v in m[rank]]
        for r in range(n_rows):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[rank])]
        rank += 1
    return rank


def _solve_unique(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    n_rows, n_cols = len(m), len(rows[0])
    rank = 0
    for col in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("exponent system is underdetermined")
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        m[rank] = [v / pv for v in m[rank]]
        for r in range(n_rows):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[rank])]
        rank += 1
    for r in range(rank, n_rows):
        if m[r][n_cols] != 0:
            raise ValueError("exponent system is inconsistent")
    return [m[i][n_cols] for i in range(n_cols)]

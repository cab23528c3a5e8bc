import itertools
from fractions import Fraction

import pytest

from ogint.exactnum import bracket, dfact
from ogint.integrals import j_from_integral, j_normalization_factor, j_value
from ogint.matrices import ExponentMatrix
from ogint.threerow import (
    ThreeRowConfig,
    conjecture73,
    diagonal_moments,
    j3_closed,
    j3_recurrence,
    prop64_check,
    three_row_expansion,
)
from ogint import weingarten as wg


def test_recurrence_base_cases():
    assert j3_recurrence(ThreeRowConfig(0, 0, 0), 3) == 1
    for n in range(3, 9):
        assert j3_recurrence(ThreeRowConfig(2, 0, 2), n) == Fraction(n + 1, n - 1)
    assert j3_recurrence(ThreeRowConfig(2, 2, 2), 3) == 8


def test_recurrence_needs_n3():
    with pytest.raises(ValueError):
        j3_recurrence(ThreeRowConfig(2, 2, 2), 2)


def test_odd_parameters_vanish():
    assert j3_recurrence(ThreeRowConfig(1, 2, 2), 5) == 0
    assert j3_closed(2, 2, 2, 1, 0, 5) == 0
    assert diagonal_moments(3, 2, 2, 5) == 0


def test_closed_equals_recurrence_grid():
    for a, b, c, x, y in itertools.product((0, 2, 4), repeat=5):
        for n in (3, 4, 8):
            assert j3_closed(a, b, c, x, y, n) == j3_recurrence(
                ThreeRowConfig(a, b, c, x, y), n
            ), (a, b, c, x, y, n)


def test_closed_reduces_to_spark_at_c0():
    for a, b, x, y in itertools.product((0, 2, 4), repeat=4):
        for n in (3, 6):
            expect = bracket([0, a + b + x, a + b + y], [a + b, a + x, b + y], n)
            assert j3_closed(a, b, 0, x, y, n) == expect


def test_diagonal_moments_values():
    assert diagonal_moments(2, 0, 2, 3) == 2
    assert diagonal_moments(2, 2, 2, 3) == 8
    assert diagonal_moments(0, 0, 4, 7) == 1


def test_diagonal_specializes_closed():
    for a, b, c in itertools.product((0, 2, 4), repeat=3):
        for n in (3, 6):
            assert diagonal_moments(a, b, c, n) == j3_closed(a, b, c, 0, 0, n)


def test_diagonal_symmetry():
    for a, b, c in itertools.product((0, 2, 4, 6), repeat=3):
        base = diagonal_moments(a, b, c, 5)
        for p in itertools.permutations((a, b, c)):
            assert diagonal_moments(*p, 5) == base


def test_diagonal_against_gram_evaluator():
    m = ExponentMatrix([[2, 0, 0], [0, 2, 0], [0, 0, 2]])
    for n in (4, 5):
        assert diagonal_moments(2, 2, 2, n) == j_from_integral(m, n, wg.integral(m, n))


def test_prop64_identity():
    for a in range(0, 7):
        for b in range(0, 7):
            for n in (3, 4, 7, 10):
                assert prop64_check(a, b, n)


def test_conjecture_values():
    v, isint = conjecture73(2, 2, 2, 3)
    assert v == 64 and isint
    for n in range(3, 9):
        v, isint = conjecture73(2, 2, 0, n)
        assert v == n + 1 and isint
    v, isint = conjecture73(0, 0, 0, 4)
    assert v == 1 and isint
    with pytest.raises(ValueError):
        conjecture73(0, 2, 0, 4)


def test_conjecture_scan_small():
    for a in range(0, 9, 2):
        for b in range(0, a + 1, 2):
            for c in range(0, b + 1, 2):
                for n in (3, 5, 8):
                    _, isint = conjecture73(a, b, c, n)
                    assert isint, (a, b, c, n)


def test_no_three_row_flipping():
    # flipping the tail entry of diag(2,2,2) would give a cross whose value is
    # a single bracket; the actual value is not of that form
    val = diagonal_moments(2, 2, 2, 5)
    flipped_cross = bracket([0, 2 + 2 + 2], [2 + 2, 2], 5)
    assert val != flipped_cross
    assert val == Fraction(19, 6)


def test_three_row_expansion_identity():
    for rows, n in (([[2], [2], [2]], 5), ([[2, 0], [0, 2], [2, 2]], 8)):
        m = ExponentMatrix(rows)
        terms = three_row_expansion(m)
        total = Fraction(0)
        for r, s, t, coeff, em in terms:
            assert len(r) == m.q and len(s) == m.q and len(t) == m.q
            total += coeff * j_from_integral(em, n, wg.integral(em, n))
        assert total == j_from_integral(m, n, wg.integral(m, n))


def test_three_row_expansion_single_column_triviality():
    terms = three_row_expansion([[2], [2], [2]])
    n = 6
    assert sum(c * j_value(m, n) for _, _, _, c, m in terms) == 1


def test_pinned_plain_integral_value():
    # J = 8 at n = 3 converts to the plain integral 8/105
    m = ExponentMatrix([[2, 0, 0], [0, 2, 0], [0, 0, 2]])
    assert diagonal_moments(2, 2, 2, 3) * j_normalization_factor(m, 3) == Fraction(8, 105)

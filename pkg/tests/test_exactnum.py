from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ogint.exactnum import (
    BracketDomainError,
    BracketSpec,
    bracket,
    dfact,
    format_rational,
    parse_rational,
)


def test_dfact_pinned_values():
    assert dfact(4) == 3
    assert dfact(0) == 1
    assert dfact(7) == 48
    assert [dfact(m) for m in range(8)] == [1, 1, 1, 2, 3, 8, 15, 48]


def test_dfact_negative_rejected():
    with pytest.raises(BracketDomainError):
        dfact(-1)


@given(st.integers(min_value=2, max_value=60))
def test_dfact_matches_standard_double_factorial_shifted(m):
    expect = 1
    v = m - 1
    while v > 1:
        expect *= v
        v -= 2
    assert dfact(m) == expect


@given(st.integers(min_value=2, max_value=40))
def test_dfact_recurrence(m):
    assert dfact(m + 2) == (m + 1) * dfact(m)


def test_bracket_pinned_values():
    assert bracket([0, 4], [2, 2], 3) == 2
    assert bracket([0, 4], [2, 2], 5) == Fraction(3, 2)
    assert bracket([3, 7], [3, 7], 9) == 1


def test_bracket_balanced():
    assert BracketSpec([0, 4], [2, 2]).is_balanced()
    assert not BracketSpec([0], [2]).is_balanced()
    assert BracketSpec([0, 0, 4, 4], [2, 2, 2, 2]).is_balanced()


@given(
    st.lists(st.integers(min_value=0, max_value=8), max_size=4),
    st.lists(st.integers(min_value=0, max_value=8), max_size=4),
    st.lists(st.integers(min_value=0, max_value=8), max_size=4),
    st.lists(st.integers(min_value=0, max_value=8), max_size=4),
    st.integers(min_value=2, max_value=12),
)
def test_bracket_multiplicative_under_union(n1, d1, n2, d2, n):
    b1 = BracketSpec(n1, d1)
    b2 = BracketSpec(n2, d2)
    assert (b1 * b2).eval(n) == b1.eval(n) * b2.eval(n)


def test_balanced_bracket_tends_to_one():
    b = BracketSpec([0, 4], [2, 2])
    devs = [abs(b.eval(n) - 1) for n in range(3, 201)]
    assert all(x >= y for x, y in zip(devs, devs[1:]))
    assert devs[-1] < Fraction(1, 60)


def test_rational_serialization_round_trip():
    assert format_rational(Fraction(3, 1)) == "3"
    assert format_rational(Fraction(-1, 8)) == "-1/8"
    assert parse_rational("-1/8") == Fraction(-1, 8)
    assert parse_rational("7") == 7

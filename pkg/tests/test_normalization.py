import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ogint.exactnum import bracket
from ogint.integrals import two_row_j
from ogint.normalization import (
    construction_exponents,
    gamma,
    gamma_balanced_check,
    gamma_bracket,
    orbit_symbols,
    orbit_terms,
    p_product,
    phi,
    phi_property_battery,
    rational_transmutation_check,
    solve_normalization_exponents,
)


def test_p_product_examples():
    m = [[2, 4], [3, 5]]
    assert p_product(m, 0) == (0,)
    assert p_product(m, 1) == tuple(sorted((2, 3, 4, 5)))
    assert p_product(m, 2) == tuple(sorted((6, 8, 7, 7)))


def test_p_product_sizes_and_invariance():
    import math

    m = [[1, 2, 3], [4, 5, 6]]
    for r in range(4):
        terms = p_product(m, r)
        assert len(terms) == 2**r * math.comb(3, r)
    flipped = [[4, 2, 3], [1, 5, 6]]
    permuted = [[2, 3, 1], [5, 6, 4]]
    for r in range(4):
        assert p_product(m, r) == p_product(flipped, r) == p_product(permuted, r)


def test_gamma_q1_trivial():
    for rows in ([[2], [4]], [[3], [7]], [[0], [0]]):
        for n in (3, 5, 9):
            assert gamma(rows, n) == 1


def test_gamma_q2_closed_form():
    for a1, a2, b1, b2 in itertools.product(range(4), repeat=4):
        for n in (3, 6):
            expect = bracket([0, 0, a1 + b2, a2 + b1], [a1, a2, b1, b2], n)
            assert gamma([[a1, a2], [b1, b2]], n) == expect


def test_gamma_q3_display():
    def display(a, b, c, x, y, z, n):
        nums = [a, b, c, a + b + z, a + c + y, b + c + x,
                x, y, z, a + y + z, b + x + z, c + x + y]
        dens = [a + b, a + c, b + c, x + y, x + z, y + z,
                a + y, a + z, b + x, b + z, c + x, c + y]
        return bracket(nums, dens, n)

    for a, b, c, x, y, z in [(2, 4, 2, 4, 2, 2), (1, 2, 3, 4, 5, 6), (2, 0, 2, 0, 4, 2)]:
        for n in (3, 5):
            assert gamma([[a, b, c], [x, y, z]], n) == display(a, b, c, x, y, z, n)


@given(
    st.integers(min_value=1, max_value=4),
    st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=4),
)
@settings(max_examples=80, deadline=None)
def test_gamma_bracket_always_balanced(q, cols):
    cols = cols[:q] if len(cols) >= q else cols + [(1, 1)] * (q - len(cols))
    rows = [[c[0] for c in cols], [c[1] for c in cols]]
    assert gamma_balanced_check(rows)
    assert gamma_bracket(rows).is_balanced()


def test_phi_examples():
    for n in (3, 4, 7):
        assert phi([[2, 0], [0, 2]], n) == 1
    assert phi([[2, 4], [4, 2]], 5) == phi([[4, 2], [2, 4]], 5)


def test_phi_cross_triviality():
    for a, b in itertools.product(range(5), repeat=2):
        for c in range(5):
            val = phi([[a, c], [b, 0]], 4)
            assert val in (Fraction(0), Fraction(1))


def test_phi_n2_triviality():
    for a, b, c, d in itertools.product(range(4), repeat=4):
        val = phi([[a, c], [b, d]], 2)
        assert val in (Fraction(-1), Fraction(0), Fraction(1))


def test_rational_transmutation():
    assert rational_transmutation_check((2,), (2,), (2,), 3)
    for c in [(0,), (1,), (2,), (2, 2), (3, 1)]:
        for n in (3, 5, 8):
            assert rational_transmutation_check((2, 4), (4, 2), c, n)
            assert rational_transmutation_check((1, 2), (2, 1), c, n)


def test_property_battery_all_pass():
    rep = phi_property_battery(q_max=3, max_entry=3, n_values=(3, 4))
    for name, slot in rep.items():
        assert slot["pass"], (name, slot["counterexamples"][:2])
    expected_names = {
        "extension",
        "row_permutation",
        "column_permutation",
        "column_flip",
        "compression",
        "transmutation",
        "cross_triviality",
        "n2_triviality",
        "q2_symmetry",
    }
    assert set(rep) == expected_names


def test_orbit_symbols():
    assert len(orbit_symbols(2)) == 6
    assert len(orbit_symbols(3)) == 10
    assert orbit_terms((1, 0), 2).__len__() == 4


def test_exponent_system_q2():
    sol = solve_normalization_exponents(2)
    by_symbol = dict(zip(sol["symbols"], sol["exponents"]))
    assert by_symbol[(0, 0)] == 1
    assert by_symbol[(1, 0)] == -1
    assert by_symbol[(1, 1)] == 1
    assert by_symbol[(2, 0)] == 0
    assert by_symbol[(2, 1)] == 0
    assert by_symbol[(2, 2)] == -1
    assert sol["raw_nullity"] == 1


def test_exponent_system_q3():
    sol = solve_normalization_exponents(3)
    by_symbol = dict(zip(sol["symbols"], sol["exponents"]))
    assert by_symbol[(0, 0, 0)] == -1
    assert by_symbol[(1, 0, 0)] == 1
    assert by_symbol[(1, 1, 0)] == -1
    assert by_symbol[(1, 1, 1)] == 1
    for s in [(2, 0, 0), (2, 1, 0), (2, 1, 1), (2, 2, 0), (2, 2, 1)]:
        assert by_symbol[s] == 0
    assert by_symbol[(2, 2, 2)] == -1
    assert sol["raw_nullity"] == 3


def test_exponent_systems_match_construction():
    for q in (2, 3):
        assert solve_normalization_exponents(q)["exponents"] == construction_exponents(q)


def test_phi_transmutation_shifts_dimension():
    # scalar even trade: phi at n equals phi at n + c without the column
    for a, b in itertools.product(range(4), repeat=2):
        for c in (0, 2, 4):
            for n in (3, 5):
                lhs = phi([[a, c], [b, 0]], n)
                rhs = phi([[a], [b]], n + c)
                assert lhs == rhs

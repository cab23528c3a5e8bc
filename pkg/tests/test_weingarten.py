import itertools
import random
from fractions import Fraction

import pytest

from ogint.exactnum import dfact
from ogint.matrices import ExponentMatrix
from ogint.pairings import Pairing, enumerate_pairings
from ogint.weingarten import (
    GramSingularError,
    asymptotic_check,
    gram,
    integral,
    integral_monomial,
    weingarten,
    weingarten_table,
)
from ogint.integrals import integral_value, one_row


def test_gram_displays():
    assert gram(2, 3).entries == ((9, 3, 3), (3, 9, 3), (3, 3, 9))
    assert gram(2, 2).entries == ((4, 2, 2), (2, 4, 2), (2, 2, 4))
    assert gram(1, 5).entries == ((5,),)


def test_weingarten_k2_closed_form():
    for n in range(2, 13):
        tab = weingarten_table(2, n)
        den = n * (n - 1) * (n + 2)
        for i in range(3):
            for j in range(3):
                expect = Fraction(n + 1, den) if i == j else Fraction(-1, den)
                assert tab.entry(i, j) == expect


def test_weingarten_k1():
    for n in (1, 2, 7):
        assert weingarten_table(1, n).entry(0, 0) == Fraction(1, n)


def test_weingarten_entry_by_pairing():
    ps = enumerate_pairings(2)
    assert weingarten(2, 3, ps[0], ps[0]) == Fraction(2, 15)
    assert weingarten(2, 3, ps[0], ps[1]) == Fraction(-1, 30)


def test_gram_singular_detected():
    with pytest.raises(GramSingularError):
        weingarten_table(2, 1)
    with pytest.raises(GramSingularError):
        weingarten_table(3, 2)


def test_inverse_verifies_small():
    for k in (1, 2, 3):
        for n in (2, 3, 5):
            try:
                tab = weingarten_table(k, n)
            except GramSingularError:
                continue
            assert tab.verify_inverse()


def test_integral_monomial_trio():
    assert integral_monomial((1, 1, 1, 1), (1, 1, 1, 1), 3) == Fraction(1, 5)
    assert integral_monomial((1, 1, 1, 1), (1, 1, 2, 2), 3) == Fraction(1, 15)
    assert integral_monomial((1, 1, 2, 2), (1, 1, 2, 2), 3) == Fraction(2, 15)


def test_integral_monomial_odd_and_empty():
    assert integral_monomial((1, 1, 1), (1, 1, 1), 4) == 0
    assert integral_monomial((), (), 4) == 1
    with pytest.raises(ValueError):
        integral_monomial((1,), (1, 2), 3)


def test_integral_first_section_values():
    for n in range(3, 11):
        assert integral([[4, 0], [0, 0]], n) == Fraction(3, n * (n + 2))
        assert integral([[2, 2], [0, 0]], n) == Fraction(1, n * (n + 2))
        assert integral([[2, 0], [0, 2]], n) == Fraction(n + 1, n * (n - 1) * (n + 2))


def test_integral_odd_sum_vanishes():
    assert integral([[1, 1], [1, 0]], 5) == 0
    assert integral([[3, 0], [0, 1]], 4) == 0


def test_integral_needs_room():
    with pytest.raises(ValueError):
        integral([[2, 0], [0, 2]], 1)


def test_integral_invariances():
    rng = random.Random(0)
    mats = []
    for a, c, b, d in itertools.product(range(4), repeat=4):
        m = ExponentMatrix([[a, c], [b, d]])
        if m.is_admissible() and 0 < m.total <= 8:
            mats.append(m)
    mats = rng.sample(mats, 12)
    for m in mats:
        n = max(m.total // 2, 3) + 1
        base = integral(m, n)
        assert integral(m.permute_rows((1, 0)), n) == base
        assert integral(m.permute_cols((1, 0)), n) == base
        assert integral(m.transpose(), n) == base


def test_integral_matches_one_row():
    for q in (1, 2, 3):
        for a in itertools.product((0, 2, 4), repeat=q):
            if not 0 < sum(a) <= 8:
                continue
            n = max(sum(a) // 2, q, 2) + 1
            assert integral([list(a)], n) == one_row(a, n)


def test_weingarten_relabeling_invariance():
    # the entry depends only on the joint cycle structure of the two pairings
    rng = random.Random(1)
    k = 3
    ps = enumerate_pairings(k)
    for _ in range(10):
        p = rng.choice(ps)
        s = rng.choice(ps)
        perm = list(range(1, 2 * k + 1))
        rng.shuffle(perm)
        relabel = lambda pairing: Pairing(
            [(perm[a - 1], perm[b - 1]) for a, b in pairing.pairs]
        )
        n = rng.choice([3, 4, 7])
        assert weingarten(k, n, p, s) == weingarten(k, n, relabel(p), relabel(s))


def test_asymptotic_check_examples():
    rep = asymptotic_check([[2]], n_list=list(range(10, 51, 5)))
    assert rep.ok and all(d == 0 for _, d in rep.deviations)

    rep = asymptotic_check([[4]], n_list=list(range(10, 51, 5)))
    assert rep.epsilon == 1 and rep.leading == 3
    for n, d in rep.deviations:
        assert d == Fraction(-6, n + 2)
    assert rep.ok

    rep = asymptotic_check(
        [[1, 1], [1, 1]], n_list=list(range(10, 51, 5)), evaluator=integral_value
    )
    assert rep.epsilon == 0 and rep.ok


def test_table_cache_identity():
    t1 = weingarten_table(2, 9)
    t2 = weingarten_table(2, 9)
    assert t1 is t2

import itertools
from fractions import Fraction as Rational
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lensball.cfrac import (
    Fraction,
    FractionError,
    StringError,
    format_string,
    neg_eval,
    neg_eval_rational,
    neg_expand,
    negsum,
    negsum_batch,
    parse_fraction,
    parse_string,
    plus_eval,
    plus_to_minus,
    point_rule,
    reverse_string,
    riemenschneider_dual,
    two_pow_eval,
    twos,
)
from lensball.lattice import determinant


def chain_value(s):
    """p/q of a string from determinants of its chain matrix and the minor."""
    def det(t):
        n = len(t)
        m = [[t[i] if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)]
             for i in range(n)]
        return determinant(m)
    return Rational(det(s), det(s[1:]) if len(s) > 1 else 1)


@st.composite
def fractions(draw, max_p=5000):
    p = draw(st.integers(2, max_p))
    q = draw(st.integers(1, p - 1).filter(lambda q: gcd(p, q) == 1))
    return Fraction(p, q)


neg_strings = st.lists(st.integers(2, 9), min_size=1, max_size=10).map(tuple)


class TestFraction:
    def test_valid(self):
        assert str(Fraction(25, 11)) == "25/11"

    @pytest.mark.parametrize("p,q", [(6, 4), (3, 3), (2, 5), (5, 0), (4, -1)])
    def test_rejects(self, p, q):
        with pytest.raises(FractionError):
            Fraction(p, q)

    def test_parse(self):
        assert parse_fraction(" 25 / 11 ") == Fraction(25, 11)
        with pytest.raises(FractionError):
            parse_fraction("6/4")
        with pytest.raises(FractionError):
            parse_fraction("abc")


@pytest.mark.parametrize("fr,s", [((4, 3), (2, 2, 2)), ((2, 1), (2,)), ((25, 11), (3, 2, 2, 3, 2))])
def test_neg_expand_examples(fr, s):
    assert neg_expand(Fraction(*fr)) == s


@pytest.mark.parametrize("s,fr", [((2, 2, 2), (4, 3)), ((5,), (5, 1)), ((3, 2, 2, 3), (16, 7))])
def test_neg_eval_examples(s, fr):
    assert neg_eval(s) == Fraction(*fr)


def test_neg_eval_rejects_small_terms():
    with pytest.raises(StringError):
        neg_eval((2, 1, 3))
    with pytest.raises(StringError):
        neg_eval(())


@given(neg_strings)
def test_neg_eval_matches_determinants(s):
    assert neg_eval(s).value == chain_value(s)
    assert neg_eval_rational(s) == chain_value(s)


@given(fractions())
def test_round_trip(fr):
    s = neg_expand(fr)
    assert min(s) >= 2
    assert neg_eval(s) == fr


def test_round_trip_exhaustive_small():
    for p in range(2, 400):
        for q in range(1, p):
            if gcd(p, q) == 1:
                assert neg_eval(neg_expand(Fraction(p, q))) == Fraction(p, q)


@pytest.mark.parametrize("s,val", [((1, 3), Rational(4, 3)), ((1, 1), Rational(2)), ((2, 2), Rational(5, 2))])
def test_plus_eval_examples(s, val):
    assert plus_eval(s) == val


def test_plus_eval_zero_terms():
    # x + 1/(0 + 1/y) = x + y
    assert plus_eval((3, 0, 4)) == 7
    with pytest.raises(ZeroDivisionError):
        plus_eval((3, 0))


def test_plus_to_minus_examples():
    # [1,3]^+ = 4/3 is [2,2,2]^-, not [2,2,2,2]^- = 5/4
    assert plus_to_minus((1, 3)) == (2, 2, 2)
    assert plus_to_minus((1, 2)) == (2, 2)
    assert plus_to_minus((2, 4)) == (3, 2, 2, 2)
    s = (1, 2, 1, 1, 2, 1)
    assert plus_eval(s) == neg_eval(plus_to_minus(s)).value


def test_plus_to_minus_rejects():
    with pytest.raises(StringError):
        plus_to_minus((1, 2, 3))
    with pytest.raises(StringError):
        plus_to_minus((1, 0))


@given(st.lists(st.integers(1, 6), min_size=1, max_size=4).map(lambda x: tuple(x) * 2))
def test_plus_to_minus_property(s):
    assert plus_eval(s) == neg_eval(plus_to_minus(s)).value


@pytest.mark.parametrize("s,d", [
    ((3, 2, 2, 3, 2), (2, 5, 3)),
    ((4,), (2, 2, 2)),
    ((2,), (2,)),
])
def test_dual_examples(s, d):
    assert riemenschneider_dual(s) == d


def test_dual_of_all_twos():
    for p in range(2, 30):
        assert riemenschneider_dual(twos(p - 1)) == (p,)


@given(fractions(2000))
def test_dual_matches_direct_expansion(fr):
    s = neg_expand(fr)
    d = riemenschneider_dual(s)
    assert d == neg_expand(Fraction(fr.p, fr.p - fr.q))
    assert riemenschneider_dual(d) == s
    if s[0] >= 3:
        assert point_rule(s) == d


def test_point_rule_needs_head_three():
    with pytest.raises(StringError):
        point_rule((2, 3))


@pytest.mark.parametrize("s,rev,fr", [
    ((3, 2, 2, 3, 2), (2, 3, 2, 2, 3), (25, 16)),
    ((2, 2, 2), (2, 2, 2), (4, 3)),
    ((4,), (4,), (4, 1)),
])
def test_reverse_examples(s, rev, fr):
    r, f = reverse_string(s)
    assert r == rev and f == Fraction(*fr)
    q = neg_eval(s).q
    assert (q * f.q) % f.p == 1


@given(fractions(2000))
def test_reverse_inverts_q(fr):
    _, f = reverse_string(neg_expand(fr))
    assert f.p == fr.p and (fr.q * f.q) % fr.p == 1


def test_two_pow_eval():
    assert two_pow_eval(0, 5) == 5
    assert two_pow_eval(2, 3) == Rational(7, 5) == neg_eval((2, 2, 3)).value
    assert two_pow_eval(1, 4) == Rational(7, 4)
    for t in range(21):
        for x in range(2, 10):
            assert two_pow_eval(t, x) == neg_eval(twos(t) + (x,)).value


@pytest.mark.parametrize("s,v", [((2, 2, 2), -3), ((3, 2, 2, 3, 2), -3), ((2, 5, 3), 1)])
def test_negsum_examples(s, v):
    assert negsum(s) == v


@given(fractions())
def test_negsum_of_dual_pair(fr):
    total = negsum(neg_expand(fr)) + negsum(neg_expand(Fraction(fr.p, fr.p - fr.q)))
    assert total == -2


def test_negsum_batch_matches_scalar():
    pairs = [(p, q) for p in range(2, 250) for q in range(1, p) if gcd(p, q) == 1]
    p, q = np.array(pairs).T
    expected = [negsum(neg_expand(Fraction(a, b))) for a, b in pairs]
    assert negsum_batch(p, q).tolist() == expected
    assert int(negsum_batch(7, 3)) == -2


def test_negsum_batch_rejects():
    with pytest.raises(FractionError):
        negsum_batch([5], [5])


def test_parse_string():
    assert parse_string("[3,2^[2],4]") == (3, 2, 2, 4)
    assert parse_string("2^[3]") == (2, 2, 2)
    assert parse_string("[2^[0],5]") == (5,)
    assert format_string((3, 2, 4)) == "[3,2,4]"
    with pytest.raises(StringError):
        parse_string("[3,x]")


@settings(max_examples=50)
@given(neg_strings)
def test_parse_format_round_trip(s):
    assert parse_string(format_string(s)) == s


def test_small_strings_exhaustive_dual_involution():
    for n in range(1, 6):
        for s in itertools.product(range(2, 6), repeat=n):
            assert riemenschneider_dual(riemenschneider_dual(s)) == s

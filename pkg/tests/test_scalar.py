import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biquad_sos.scalar import ONE, ZERO, Scalar, parse_scalar, scalar_sqrt, square_free_split

from conftest import rationals, scalars


@pytest.mark.parametrize("n,expected", [(1, (1, 1)), (8, (2, 2)), (12, (2, 3)), (72, (6, 2)), (30, (1, 30)), (49, (7, 1))])
def test_square_free_split(n, expected):
    assert square_free_split(n) == expected


def test_sqrt_perfect_square():
    assert scalar_sqrt(4) == 2
    assert scalar_sqrt(4).is_rational()


def test_sqrt_extracts_square_part():
    assert scalar_sqrt(Fraction(3, 4)) == Scalar({3: Fraction(1, 2)})


def test_sqrt_eight_ninths():
    r = scalar_sqrt(Fraction(8, 9))
    assert r == Scalar({2: Fraction(2, 3)})
    assert r * r == Fraction(8, 9)


def test_sqrt_negative():
    with pytest.raises(ValueError, match="negative radicand"):
        scalar_sqrt(-1)


def test_radicands_stay_square_free():
    s = Scalar({12: 1, 18: 2, 1: 3})
    assert s.terms == {1: Fraction(3), 2: Fraction(6), 3: Fraction(2)}
    assert (scalar_sqrt(6) * scalar_sqrt(10)).terms == {15: Fraction(2)}


def test_zero_terms_pruned():
    s = Scalar({2: 1}) - Scalar({2: 1})
    assert s == ZERO and s.terms == {}


@pytest.mark.parametrize("text,expected", [
    ("1/2*sqrt(3)+1", Scalar({1: 1, 3: Fraction(1, 2)})),
    ("-sqrt(2)", Scalar({2: -1})),
    ("7/3", Scalar({1: Fraction(7, 3)})),
    ("sqrt(3)/2 - 1/2", Scalar({3: Fraction(1, 2), 1: Fraction(-1, 2)})),
    ("sqrt(12)", Scalar({3: 2})),
    ("0", ZERO),
])
def test_parse(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("bad", ["", "abc", "1 2", "sqrt(-3)", "1/2*sqrt(x)"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


@given(scalars)
def test_format_parse_roundtrip(a):
    assert parse_scalar(str(a)) == a


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a + (-a) == ZERO
    assert a * ONE == a


@given(st.fractions(min_value=0, max_value=50, max_denominator=30))
def test_sqrt_squares_back(q):
    assert scalar_sqrt(q) * scalar_sqrt(q) == q


@settings(max_examples=300)
@given(scalars)
def test_sign_matches_float(a):
    v = float(a)
    if abs(v) > 1e-9:
        assert a.sign() == (1 if v > 0 else -1)
    elif a.is_zero():
        assert a.sign() == 0


def test_sign_near_cancellation():
    # sqrt(2) + sqrt(3) - sqrt(10) = -0.016...
    assert parse_scalar("sqrt(2)+sqrt(3)-sqrt(10)").sign() == -1
    # 99/70 approximates sqrt(2) from above
    assert (Scalar({2: 1}) - Fraction(99, 70)).sign() == -1
    assert (Scalar({2: 1}) - Fraction(140, 99)).sign() == 1


def test_division_only_by_rationals():
    a = parse_scalar("1+sqrt(2)")
    assert a / 2 == parse_scalar("1/2+1/2*sqrt(2)")
    with pytest.raises(ValueError):
        a / a
    with pytest.raises(ZeroDivisionError):
        a / 0


def test_float_value():
    assert math.isclose(float(parse_scalar("1/2*sqrt(3)+1")), 1 + math.sqrt(3) / 2)

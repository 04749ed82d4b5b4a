from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from circorder.algebraic import AlgebraicReal, rational_dependency

mpmath.mp.dps = 80

SQUAREFREE = [1, 2, 3, 5, 6, 7, 10, 11]


def high_precision(a: AlgebraicReal):
    return sum(mpmath.mpf(q.numerator) / q.denominator * mpmath.sqrt(d) for d, q in a.terms.items())


fractions = st.fractions(min_value=-50, max_value=50, max_denominator=60)
reals = st.dictionaries(st.sampled_from(SQUAREFREE), fractions, max_size=4).map(AlgebraicReal)


def test_normalizes_square_factors():
    assert AlgebraicReal.sqrt(8) == AlgebraicReal.sqrt(2, 2)
    assert AlgebraicReal.sqrt(9) == AlgebraicReal.rational(3)
    assert AlgebraicReal({12: Fraction(1, 2)}).terms == {3: Fraction(1)}


def test_parse_and_str():
    a = AlgebraicReal.parse("sqrt(2) - 7/5")
    assert a.terms == {1: Fraction(-7, 5), 2: Fraction(1)}
    assert AlgebraicReal.parse(str(a)) == a
    assert AlgebraicReal.parse("sqrt(8)/4") == AlgebraicReal.sqrt(2, Fraction(1, 2))


def test_sign_of_near_cancellation():
    # 99/70 is a continued-fraction convergent of sqrt(2)
    a = AlgebraicReal.sqrt(2) - Fraction(99, 70)
    assert a.sign() == -1
    b = AlgebraicReal.sqrt(2) - Fraction(140, 99)
    assert b.sign() == 1
    assert (a - a).sign() == 0


def test_floor_and_frac():
    a = AlgebraicReal.parse("3*sqrt(2)")  # 4.2426...
    assert a.floor() == 4
    assert a.frac() == a - 4
    assert (-a).floor() == -5
    assert AlgebraicReal.rational(Fraction(-3, 2)).floor() == -2


def test_json_round_trip():
    a = AlgebraicReal.parse("1/3 - 2*sqrt(5) + sqrt(6)/7")
    assert a.to_json() == {"terms": [[1, "1/3"], [5, "-2"], [6, "1/7"]]}
    assert AlgebraicReal.from_json(a.to_json()) == a


def test_products_combine_radicals():
    s2, s3 = AlgebraicReal.sqrt(2), AlgebraicReal.sqrt(3)
    assert s2 * s3 == AlgebraicReal.sqrt(6)
    assert s2 * s2 == AlgebraicReal.rational(2)


def test_rational_dependency():
    one = AlgebraicReal.rational(1)
    s2 = AlgebraicReal.sqrt(2)
    assert rational_dependency([one, s2, AlgebraicReal.sqrt(3)]) is None
    dep = rational_dependency([one, s2, s2 + Fraction(1, 2)])
    assert dep is not None
    total = sum((v * q for v, q in zip([one, s2, s2 + Fraction(1, 2)], dep)), AlgebraicReal())
    assert total.is_zero()
    assert all(q.denominator == 1 for q in dep)


@settings(max_examples=200, deadline=None)
@given(reals)
def test_sign_matches_high_precision(a):
    ref = high_precision(a)
    expected = 0 if a.is_zero() else (1 if ref > 0 else -1)
    assert a.sign() == expected
    lo, hi = a.enclosure()
    assert lo <= float(ref) <= hi


@settings(max_examples=150, deadline=None)
@given(reals, reals)
def test_field_operations_agree_with_high_precision(a, b):
    for got, want in ((a + b, high_precision(a) + high_precision(b)),
                      (a - b, high_precision(a) - high_precision(b)),
                      (a * b, high_precision(a) * high_precision(b))):
        assert abs(high_precision(got) - want) < mpmath.mpf(10) ** -60


@settings(max_examples=150, deadline=None)
@given(reals)
def test_frac_in_unit_interval(a):
    f = a.frac()
    assert f.sign() >= 0 and (f - 1).sign() < 0
    assert (a - f).is_rational()


@pytest.mark.parametrize("text", ["pi", "x + 1", "2**(1/3)"])
def test_rejects_non_quadratic_input(text):
    with pytest.raises(ValueError, match="square roots"):
        AlgebraicReal.parse(text)

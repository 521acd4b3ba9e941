from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gammacm import exact
from gammacm.errors import SpecError

positive = st.fractions(min_value=Fraction(1, 30), max_value=50, max_denominator=30)


def test_gcd_and_lcm_examples():
    assert exact.rational_gcd([Fraction(1, 3), Fraction(1, 2)]) == Fraction(1, 6)
    assert exact.rational_gcd([Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)]) == Fraction(1, 6)
    assert exact.rational_gcd([4, 6]) == 2
    assert exact.rational_lcm([Fraction(1, 3), Fraction(1, 2)]) == 1
    assert exact.rational_lcm([Fraction(2, 3), Fraction(3, 4)]) == 6


def test_literals():
    assert exact.as_rational("3/4") == Fraction(3, 4)
    assert exact.as_rational(0.1) == Fraction(1, 10)
    assert exact.as_rational("  2 ") == 2
    with pytest.raises(SpecError):
        exact.as_rational("1/0")
    with pytest.raises(SpecError):
        exact.as_rational(True)
    with pytest.raises(SpecError):
        exact.as_rational(Fraction(1, 10**10))


def test_coerce_keeps_long_floats_inexact():
    assert exact.coerce_number(0.25) == Fraction(1, 4)
    v = exact.coerce_number(2**0.5)
    assert isinstance(v, float)


def test_compare_refuses_float_ties():
    assert exact.compare(Fraction(1, 3), Fraction(1, 3)) == 0
    assert exact.compare(1.0, 1.0 + 1e-14) is None
    assert exact.compare(1.0, 1.1) == -1


def test_empty_or_nonpositive_gcd_rejected():
    with pytest.raises(SpecError):
        exact.rational_gcd([])
    with pytest.raises(SpecError):
        exact.rational_gcd([Fraction(1, 2), 0])


@given(st.lists(positive, min_size=1, max_size=5))
def test_gcd_divides_every_entry(vals):
    g = exact.rational_gcd(vals)
    assert all(exact.integer_multiple_of(v, g) is not None for v in vals)


@given(st.lists(st.fractions(min_value=Fraction(1, 12), max_value=4, max_denominator=12), min_size=1, max_size=4))
def test_gcd_is_maximal_by_brute_force(vals):
    g = exact.rational_gcd(vals)
    # any common divisor has denominator dividing lcm(dens)*m; search a generous box
    dens = range(1, 145)
    for d in dens:
        for n in range(1, 49):
            c = Fraction(n, d)
            if c > g and all(exact.integer_multiple_of(v, c) is not None for v in vals):
                pytest.fail(f"{c} > {g} also divides {vals}")


@given(st.integers(1, 1000), positive)
def test_integer_multiple_roundtrip(n, y):
    assert exact.integer_multiple_of(n * y, y) == n


@given(st.lists(positive, min_size=1, max_size=5))
def test_lcm_is_a_multiple_of_every_entry(vals):
    m = exact.rational_lcm(vals)
    assert all(exact.integer_multiple_of(m, v) is not None for v in vals)

from decimal import Decimal
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from stirling_series.exceptions import DomainError, InsufficientPrecisionError
from stirling_series.numerics import (
    ExtFloat,
    binomial,
    exp_ext,
    format_fixed,
    ln_ext,
    ln_sqrt_2pi,
    log10_e,
    parse_number,
    pi_ext,
    rational_to_decimal,
    sqrt_ext,
    to_decimal_string,
    working_precision,
)

ints64 = st.integers(min_value=-(2**63), max_value=2**63)
rationals = st.builds(Fraction, ints64, st.integers(min_value=1, max_value=2**63))


def test_binomial_examples():
    assert binomial(5, 2) == 10
    assert binomial(3, 2) == 3
    assert binomial(7, 4) == 35
    assert binomial(3, 5) == 0
    with pytest.raises(DomainError):
        binomial(-1, 0)


@given(rationals, rationals, rationals)
def test_rational_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a.denominator > 0


def test_ln_ext_examples():
    assert ln_ext(1).value == 0
    e = exp_ext(1, 40)
    assert abs(ln_ext(e).value - 1) < Decimal("1e-38")
    with pytest.raises(DomainError):
        ln_ext(0)
    with pytest.raises(DomainError):
        ln_ext(-2)
    with pytest.raises(DomainError):
        sqrt_ext(-1)


def test_ln_sqrt_2pi_twenty_digits():
    v = ln_sqrt_2pi(20)
    assert str(v.rounded(20)) == "0.91893853320467274178"
    with mpmath.workdps(60):
        ref = mpmath.log(2 * mpmath.pi) / 2
        assert abs(mpmath.mpf(str(ln_sqrt_2pi(50).value)) - ref) < mpmath.mpf(10) ** -49


def test_pi_against_mpmath():
    with mpmath.workdps(120):
        assert abs(mpmath.mpf(str(pi_ext(100).value)) - mpmath.pi) < mpmath.mpf(10) ** -99


@given(st.integers(min_value=1, max_value=10**12), st.integers(min_value=5, max_value=60))
def test_ln_correctly_rounded(n, prec):
    got = ln_ext(n, prec).rounded(prec)
    with mpmath.workdps(2 * prec + 20):
        ref = mpmath.log(n)
        assert abs(mpmath.mpf(str(got)) - ref) <= 2 * abs(ref) * mpmath.mpf(10) ** (1 - prec) + mpmath.mpf(10) ** -(2 * prec)


def test_to_decimal_string_examples():
    assert to_decimal_string(Fraction(1, 8), 2) == "0.12"
    assert to_decimal_string(Fraction(1, 3), 5) == "0.33333"
    x = ln_ext(3628800, 40) * log10_e(40)
    assert to_decimal_string(x, 14) == "6.55976303287679"
    with pytest.raises(InsufficientPrecisionError):
        to_decimal_string(ExtFloat(Decimal("6.559763032876794"), 16), 14)


@given(rationals, st.integers(min_value=0, max_value=20))
def test_format_fixed_half_even(x, places):
    s = format_fixed(x, places)
    assert abs(Fraction(s) - x) <= Fraction(1, 2 * 10**places)
    assert format_fixed(Fraction(s), places) == s


@given(rationals, st.integers(min_value=5, max_value=40))
def test_doubled_precision_agrees(x, p):
    # rounding a 2p-digit result to p digits equals the p-digit result
    a = rational_to_decimal(x, p)
    b = rational_to_decimal(x, working_precision(p))
    assert ExtFloat(b, p).rounded(p) == a


def test_extfloat_precision_is_carried():
    a = ExtFloat(Decimal(1), 10)
    b = ExtFloat(Decimal(3), 40)
    assert (a / b).precision == 40
    assert (a / 3).precision == 10
    assert ExtFloat.of(Fraction(1, 3), 25).precision == 25


def test_parse_number_forms():
    assert parse_number("12") == 12
    assert parse_number("0.125") == Fraction(1, 8)
    assert parse_number("5/2") == Fraction(5, 2)
    with pytest.raises(ValueError):
        parse_number("five")

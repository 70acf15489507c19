import math
from decimal import Decimal
from fractions import Fraction

import mpmath
from hypothesis import given, settings, strategies as st

from stirling_series import wallis
from stirling_series.numerics import log10_e


def test_factorial_form_small():
    assert wallis.wallis_factorial_form(1) == 2
    assert wallis.wallis_factorial_form(2) == Fraction(16, 9)


def test_factorial_form_equals_running_product():
    for n in range(1, 51):
        assert wallis.wallis_factorial_form(n) == wallis.wallis_partial_product(n)


def test_pi_bracket_examples():
    lo, hi = wallis.pi_bracket(1)
    assert abs(float(lo.value) - 4 / math.sqrt(2)) < 1e-15
    assert abs(float(hi.value) - 4 / math.sqrt(1.5)) < 1e-15
    lo, hi = wallis.pi_bracket(100)
    pi = Fraction("3.14159265358979323846264338327950288")
    assert lo.to_fraction() < pi < hi.to_fraction()
    assert float((hi - lo).value) < 0.01


def test_widths_shrink_and_sweep_matches_direct():
    prev = None
    for n, lo, hi in wallis.pi_brackets(1000):
        w = hi.value - lo.value
        if prev is not None:
            assert w < prev
        prev = w
        if n in (1, 7, 100, 1000):
            dlo, dhi = wallis.pi_bracket(n)
            assert abs(lo.value - dlo.value) < Decimal("1e-25") and abs(hi.value - dhi.value) < Decimal("1e-25")


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 10**4))
def test_theta_inside_bounds(n):
    H = wallis.wallis_factorial_form(n)
    lo, hi = wallis.theta_bounds(n)
    with mpmath.workdps(80):
        theta = (mpmath.mpf(H.numerator) / H.denominator) / (mpmath.pi / 2)
        assert mpmath.mpf(str(lo.value)) < theta < mpmath.mpf(str(hi.value))


def test_H_decreasing_above_half_pi():
    pi_hi = Fraction("3.1415926535897932385")
    prev = None
    for n in range(1, 201):
        H = wallis.wallis_factorial_form(n)
        assert H > pi_hi / 2
        if prev is not None:
            assert H < prev
        prev = H


def test_constant_bracket_contains_constant():
    ref = Fraction("0.91893853320467")
    widths = {}
    for n in (10, 100, 1000, 10**4):
        lo, hi = wallis.constant_bracket(n)
        assert lo.to_fraction() < ref < hi.to_fraction()
        widths[n] = float((hi - lo).value)
    assert widths[1000] < 3e-4
    slope1 = math.log10(widths[1000] / widths[100])
    slope2 = math.log10(widths[10**4] / widths[1000])
    assert -1.2 <= slope1 <= -0.8 and -1.2 <= slope2 <= -0.8


def test_constant_bracket_more_terms_tighter():
    lo0, hi0 = wallis.constant_bracket(50, terms=0)
    lo2, hi2 = wallis.constant_bracket(50, terms=2)
    assert lo0.value <= lo2.value and hi2.value <= hi0.value


def test_constant_midpoint_base10():
    lo, hi = wallis.constant_bracket(10**4, terms=1)
    mid = (lo + hi) / 2
    v = mid.value * log10_e(40)
    assert format(v.quantize(type(v)("1e-9")), "f") == "0.399089934"
    # with the bare 0 < delta < 1/12m envelope the midpoint is only good to about 1/(16n)
    lo, hi = wallis.constant_bracket(10**4, terms=0)
    v = ((lo + hi) / 2).value * log10_e(40)
    assert format(v.quantize(type(v)("1e-5")), "f") == "0.39909"

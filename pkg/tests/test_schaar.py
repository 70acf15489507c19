from decimal import Decimal, localcontext
from fractions import Fraction

import mpmath
import pytest

from stirling_series import schaar
from stirling_series.coefficients import demoivre_coefficient
from stirling_series.exceptions import DomainError, QuadratureError

SPEC = schaar.QuadratureSpec(abs_tolerance="1e-9")


def mp(x):
    return mpmath.mpf(str(x.value))


def test_spec_validation():
    with pytest.raises(ValueError):
        schaar.QuadratureSpec(abs_tolerance=0)
    with pytest.raises(ValueError):
        schaar.QuadratureSpec(split_point=2)
    with pytest.raises(ValueError):
        schaar.schaar_remainder(1, 0, schaar.QuadratureSpec(tail_cut="0.5"))
    # an explicit tail cut far enough out is accepted
    schaar.schaar_remainder(1, 0, schaar.QuadratureSpec(tail_cut=10))


def test_partial_fraction_limits():
    v = schaar.expm1_recip_partial_fraction(1, 10**5)
    assert abs(float(v.value) - 1 / (mpmath.e - 1)) < 1e-5
    x = Decimal("1e-6")
    v = schaar.expm1_recip_partial_fraction(x, 1000, 40)
    assert abs(v.value - 1 / x + Decimal("0.5")) < Decimal("1e-6")
    with pytest.raises(DomainError):
        schaar.expm1_recip_partial_fraction(0, 10)


def test_partial_fraction_reflection():
    # f(x) + f(-x) = -1 holds term by term for the partial sums
    for K in (1, 10, 1000):
        s = schaar.expm1_recip_partial_fraction("0.5", K, 40).value + schaar.expm1_recip_partial_fraction("-0.5", K, 40).value
        assert abs(s + 1) < Decimal("1e-35")


def test_partial_fraction_tail_bound():
    for x in ("0.5", "1", "3"):
        for K in (10, 100, 1000):
            v = schaar.expm1_recip_partial_fraction(x, K, 30)
            with mpmath.workdps(40):
                exact = 1 / mpmath.expm1(mpmath.mpf(x))
                assert abs(mp(v) - exact) <= float(schaar.partial_fraction_tail_bound(x, K))


def test_gauss_legendre_rule():
    rule = schaar.gauss_legendre(10, 40)
    with localcontext() as ctx:
        ctx.prec = 60
        assert abs(sum(w for _, w in rule) - 2) < Decimal("1e-38")
        # exact for polynomials of degree 19
        assert abs(sum(w * x**18 for x, w in rule) - Decimal(2) / 19) < Decimal("1e-37")


def test_remainder_sign_and_size():
    assert schaar.schaar_remainder(1, 0, SPEC).value > 0
    for a in (1, 2, 5):
        for m in range(5):
            r = schaar.schaar_remainder(a, m, SPEC)
            assert r.sign() == (-1) ** m
            bound = abs(demoivre_coefficient(m + 1)) / Fraction(a) ** (2 * m + 1)
            assert abs(r.to_fraction()) < bound
    assert abs(schaar.schaar_remainder(10, 2, SPEC).value) < abs(schaar.schaar_remainder(1, 2, SPEC).value)


def test_remainder_matches_oracle_residual():
    # R(a, m) = log Gamma(a+1) - (closed part + m terms), from mpmath
    for a in (1, 2, 5):
        for m in range(4):
            r = schaar.schaar_remainder(a, m, SPEC)
            with mpmath.workdps(50):
                A = mpmath.mpf(a)
                closed = mpmath.log(mpmath.sqrt(2 * mpmath.pi * A)) + A * (mpmath.log(A) - 1)
                closed += mpmath.fsum(mpmath.mpf(demoivre_coefficient(k).numerator) / demoivre_coefficient(k).denominator / A ** (2 * k - 1) for k in range(1, m + 1))
                assert abs(mp(r) - (mpmath.loggamma(A + 1) - closed)) < 1e-9


def test_m_independence():
    for a in (1, 2, 5, 10):
        vals = [schaar.schaar_log_gamma(a, m, SPEC).value for m in range(5)]
        assert max(vals) - min(vals) < 2 * SPEC.abs_tolerance


@pytest.mark.parametrize("a", [Fraction(k, 2) for k in range(1, 16)] + list(range(11, 21)))
def test_oracle(a):
    v = schaar.schaar_log_gamma(a, 2, SPEC)
    with mpmath.workdps(40):
        assert abs(mp(v) - mpmath.loggamma(mpmath.mpf(a.numerator if isinstance(a, Fraction) else a) / (a.denominator if isinstance(a, Fraction) else 1) + 1)) < 1e-9


def test_examples():
    assert abs(schaar.schaar_log_gamma(1, 0, SPEC).value) < Decimal("1e-9")
    for m in range(5):
        assert abs(float(schaar.schaar_log_gamma(5, m, SPEC).value) - 4.787491742782046) < 1e-9


def test_tolerance_halving_converges():
    coarse = schaar.schaar_log_gamma(2, 1, schaar.QuadratureSpec(abs_tolerance="1e-8"))
    fine = schaar.schaar_log_gamma(2, 1, schaar.QuadratureSpec(abs_tolerance="5e-9"))
    assert abs(coarse.value - fine.value) < Decimal("1e-8")


def test_quadrature_error_when_budget_exhausted():
    with pytest.raises(QuadratureError):
        schaar.schaar_remainder(1, 0, schaar.QuadratureSpec(abs_tolerance="1e-25", max_subdivisions=1, nodes=2))


def test_domain():
    with pytest.raises(DomainError):
        schaar.schaar_log_gamma(0, 1)
    with pytest.raises(DomainError):
        schaar.schaar_remainder(-1, 1)

"""Wallis partial products, brackets on π, and the constant log sqrt(2π).

The n-th partial product

    H_n = (1/2n) [2/1 * 4/3 * ... * 2n/(2n-1)]^2 = 2^{4n}/(2n) [(n!)^2/(2n)!]^2

equals (π/2) θ_n with sqrt(1 + 1/(2n)) < θ_n < sqrt(1 + 1/(2n-1)).  All
brackets below are rounded outward, so they are rigorous enclosures and
not just approximations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal
from fractions import Fraction
from typing import Iterator

from .coefficients import demoivre_coefficient
from .exceptions import DomainError
from .numerics import DEFAULT_PRECISION, ExtFloat, rational_to_decimal, working_precision, workctx

__all__ = [
    "WallisBracket",
    "wallis_factorial_form",
    "wallis_partial_product",
    "theta_bounds",
    "wallis_bracket",
    "pi_bracket",
    "pi_brackets",
    "constant_bracket",
]


def _check_n(n):
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n}")


def wallis_factorial_form(n: int) -> Fraction:
    """H_n = 2^{4n}/(2n) * ((n!)^2 / (2n)!)^2, exactly."""
    _check_n(n)
    return Fraction(2 ** (4 * n), 2 * n) * Fraction(math.factorial(n) ** 2, math.factorial(2 * n)) ** 2


def wallis_partial_product(n: int) -> Fraction:
    """The same H_n, multiplied out factor by factor."""
    _check_n(n)
    p = Fraction(1)
    for k in range(1, n + 1):
        p *= Fraction(2 * k, 2 * k - 1)
    return p * p / (2 * n)


def _sqrt_bounds(x: Fraction, prec: int) -> tuple[Decimal, Decimal]:
    # sqrt is correctly rounded, so one ulp either side encloses the true root
    with workctx(prec):
        lo = rational_to_decimal(x, prec, ROUND_FLOOR).sqrt()
        hi = rational_to_decimal(x, prec, ROUND_CEILING).sqrt()
        return lo.next_minus(), hi.next_plus()


def _ln_down(x: Decimal, prec: int) -> Decimal:
    with workctx(prec):
        return x.ln().next_minus()


def _ln_up(x: Decimal, prec: int) -> Decimal:
    with workctx(prec):
        return x.ln().next_plus()


def theta_bounds(n: int, precision: int = DEFAULT_PRECISION) -> tuple[ExtFloat, ExtFloat]:
    """(sqrt(1 + 1/(2n)), sqrt(1 + 1/(2n-1))), rounded outward."""
    _check_n(n)
    wp = working_precision(precision)
    low, _ = _sqrt_bounds(1 + Fraction(1, 2 * n), wp)
    _, high = _sqrt_bounds(1 + Fraction(1, 2 * n - 1), wp)
    return ExtFloat(low, precision), ExtFloat(high, precision)


def _pi_interval(H_lo: Decimal, H_hi: Decimal, n: int, prec: int) -> tuple[Decimal, Decimal]:
    _, th_hi = _sqrt_bounds(1 + Fraction(1, 2 * n - 1), prec)
    th_lo, _ = _sqrt_bounds(1 + Fraction(1, 2 * n), prec)
    with workctx(prec, ROUND_FLOOR):
        low = 2 * H_lo / th_hi
    with workctx(prec, ROUND_CEILING):
        high = 2 * H_hi / th_lo
    return low, high


@dataclass(frozen=True)
class WallisBracket:
    n: int
    H_n: Fraction
    theta_low: ExtFloat
    theta_high: ExtFloat
    pi_low: ExtFloat
    pi_high: ExtFloat

    @property
    def width(self) -> ExtFloat:
        return self.pi_high - self.pi_low


def wallis_bracket(n: int, precision: int = DEFAULT_PRECISION) -> WallisBracket:
    H = wallis_factorial_form(n)
    wp = working_precision(precision)
    lo, hi = _pi_interval(rational_to_decimal(H, wp, ROUND_FLOOR), rational_to_decimal(H, wp, ROUND_CEILING), n, wp)
    th_lo, th_hi = theta_bounds(n, precision)
    return WallisBracket(n, H, th_lo, th_hi, ExtFloat(lo, precision), ExtFloat(hi, precision))


def pi_bracket(n: int, precision: int = DEFAULT_PRECISION) -> tuple[ExtFloat, ExtFloat]:
    """(2 H_n / θ_high, 2 H_n / θ_low), an interval containing π."""
    b = wallis_bracket(n, precision)
    return b.pi_low, b.pi_high


def pi_brackets(n_max: int, precision: int = DEFAULT_PRECISION) -> Iterator[tuple[int, ExtFloat, ExtFloat]]:
    """pi_bracket(n) for n = 1..n_max in one sweep.

    H_n is carried as a pair of outward-rounded decimals updated by the
    exact ratio H_n / H_{n-1} = 4n(n-1)/(2n-1)^2, which avoids rebuilding
    factorials for every n while keeping the enclosure rigorous.
    """
    _check_n(n_max)
    wp = working_precision(precision)
    H_lo = H_hi = Decimal(2)
    for n in range(1, n_max + 1):
        if n > 1:
            num, den = 4 * n * (n - 1), (2 * n - 1) ** 2
            with workctx(wp, ROUND_FLOOR):
                H_lo = H_lo * num / den
            with workctx(wp, ROUND_CEILING):
                H_hi = H_hi * num / den
        lo, hi = _pi_interval(H_lo, H_hi, n, wp)
        yield n, ExtFloat(lo, precision), ExtFloat(hi, precision)


def _delta_envelope(m: int, terms: int) -> tuple[Fraction, Fraction]:
    # delta_m lies between consecutive partial sums of sum_k d_k / m^{2k-1}
    s = [Fraction(0)]
    for k in range(1, terms + 2):
        s.append(s[-1] + demoivre_coefficient(k) / Fraction(m) ** (2 * k - 1))
    a, b = s[terms], s[terms + 1]
    return min(a, b), max(a, b)


def constant_bracket(n: int, precision: int = DEFAULT_PRECISION, terms: int = 0) -> tuple[ExtFloat, ExtFloat]:
    """An interval containing C = log sqrt(2π), from the n-th Wallis product.

    Combining log n! and log (2n)! with the Wallis identity gives, exactly,

        C = log(2 sqrt(H_n)) + delta_{2n} - 2 delta_n,

    because π θ_n = 2 H_n.  The correction terms delta_m are replaced by
    their envelope: with ``terms=0`` that is 0 < delta_m < 1/(12m), which
    makes the bracket width 5/(24n); each extra term tightens it by two
    powers of n.
    """
    _check_n(n)
    if terms < 0:
        raise ValueError("terms must be >= 0")
    H = wallis_factorial_form(n)
    lo1, hi1 = _delta_envelope(n, terms)
    lo2, hi2 = _delta_envelope(2 * n, terms)
    corr_lo, corr_hi = lo2 - 2 * hi1, hi2 - 2 * lo1
    wp = working_precision(precision)
    ln_lo = _ln_down(rational_to_decimal(4 * H, wp, ROUND_FLOOR), wp)
    ln_hi = _ln_up(rational_to_decimal(4 * H, wp, ROUND_CEILING), wp)
    with workctx(wp, ROUND_FLOOR):
        c_lo = ln_lo / 2 + rational_to_decimal(corr_lo, wp, ROUND_FLOOR)
    with workctx(wp, ROUND_CEILING):
        c_hi = ln_hi / 2 + rational_to_decimal(corr_hi, wp, ROUND_CEILING)
    return ExtFloat(c_lo, precision), ExtFloat(c_hi, precision)

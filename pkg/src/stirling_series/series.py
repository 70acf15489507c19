"""Both forms of the asymptotic series for log n!, and what they imply.

``demoivre_n`` is the expansion in odd inverse powers of n,

    log n! ~ (n + 1/2) log n - n + log sqrt(2 pi) + sum_k d_k / n^{2k-1},

with d_k = B_{2k} / (2k(2k-1)); ``stirling_z`` is the expansion in
z = n + 1/2,

    log n! ~ z log z - z + log sqrt(2 pi) + sum_k p_k / z^{2k-1},

with p_k the Stirling coefficients for step h = 1/2.  Both are divergent
but enveloping: the error after m terms has the sign of term m+1 and is
smaller than it in magnitude.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterator, NamedTuple

from .coefficients import demoivre_coefficient, solve_stirling_system
from .exceptions import AlignmentError, DomainError
from .numerics import (
    DEFAULT_PRECISION,
    ExtFloat,
    binomial,
    ln_sqrt_2pi_decimal,
    pi_decimal,
    rational_to_decimal,
    to_decimal,
    working_precision,
    workctx,
)

__all__ = [
    "MAX_TERMS",
    "PastOptimalTruncationWarning",
    "SeriesValue",
    "ArithmeticLogSum",
    "SeriesTermStream",
    "TruncationReport",
    "log_factorial",
    "eval_demoivre",
    "eval_stirling",
    "eval_F",
    "sum_log_arith_progression",
    "truncation_report",
    "delta_correction",
    "constant_series_partials",
    "recurring_series_partial",
    "recurring_series_limit",
    "recurring_series_tail_bound",
]

#: Hard cap on the number of correction terms any stream will produce.
MAX_TERMS = 200

FORMS = ("stirling_z", "demoivre_n")


class PastOptimalTruncationWarning(UserWarning):
    """The last term used is larger than the one before it."""


class SeriesValue(NamedTuple):
    value: ExtFloat
    bound: ExtFloat


class ArithmeticLogSum(NamedTuple):
    value: ExtFloat
    method: str  # "series" or "direct"
    count: int


def _positive(x, prec, name="argument") -> Decimal:
    d = to_decimal(x, prec)
    if d <= 0:
        raise DomainError(f"{name} must be > 0, got {d}")
    return d


def _rational(c: Fraction, prec: int) -> Decimal:
    return rational_to_decimal(c, prec)


def _printed_coefficients(m: int) -> list[Fraction]:
    if m == 0:
        return []
    a = solve_stirling_system(m)
    return [a[k - 1] / 2 ** (2 * k - 1) for k in range(1, m + 1)]


def _coefficients(form: str, m: int) -> list[Fraction]:
    if form == "demoivre_n":
        return [demoivre_coefficient(k) for k in range(1, m + 1)]
    if form == "stirling_z":
        return _printed_coefficients(m)
    raise ValueError(f"unknown series form {form!r}; expected one of {FORMS}")


def _terms(form: str, arg: Decimal, m: int, prec: int) -> list[Decimal]:
    if m > MAX_TERMS:
        raise ValueError(f"at most {MAX_TERMS} terms are generated, asked for {m}")
    out = []
    with workctx(prec):
        inv2 = 1 / (arg * arg)
        power = 1 / arg
        for c in _coefficients(form, m):
            out.append(_rational(c, prec) * power)
            power *= inv2
    return out


@dataclass(frozen=True)
class SeriesTermStream:
    """Lazily generated correction terms t_1, t_2, ... of one series form."""

    form: str
    argument: ExtFloat
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"unknown series form {self.form!r}; expected one of {FORMS}")
        object.__setattr__(self, "argument", ExtFloat.of(self.argument, self.precision))
        if self.argument <= 0:
            raise DomainError("series argument must be > 0")

    def coefficient(self, k: int) -> Fraction:
        return _coefficients(self.form, k)[-1]

    def terms(self, m: int) -> list[ExtFloat]:
        wp = working_precision(self.precision)
        arg = to_decimal(self.argument, wp)
        return [ExtFloat(t, self.precision) for t in _terms(self.form, arg, m, wp)]

    def __iter__(self) -> Iterator[ExtFloat]:
        wp = working_precision(self.precision)
        arg = to_decimal(self.argument, wp)
        with workctx(wp):
            inv2 = 1 / (arg * arg)
            power = 1 / arg
        for k in range(1, MAX_TERMS + 1):
            c = self.coefficient(k)
            with workctx(wp):
                t = _rational(c, wp) * power
                power *= inv2
            yield ExtFloat(t, self.precision)


def _log_factorial_decimal(n: int, prec: int) -> Decimal:
    # exact integer products in blocks, each rounded once before the logarithm
    block_digits = max(prec, 50) * 20
    limit = 10**block_digits
    total = Decimal(0)
    acc = 1
    with workctx(prec):
        for k in range(2, n + 1):
            acc *= k
            if acc > limit:
                total += (+Decimal(acc)).ln()
                acc = 1
        if acc > 1:
            total += (+Decimal(acc)).ln()
    return total


def log_factorial(n: int, precision: int = DEFAULT_PRECISION) -> ExtFloat:
    """log n! by exact summation of log k (the reference the series are checked against)."""
    if n < 0 or int(n) != n:
        raise DomainError(f"log_factorial needs a nonnegative integer, got {n}")
    wp = working_precision(precision) + len(str(n))
    return ExtFloat(_log_factorial_decimal(int(n), wp), precision)


def _sum_terms(terms, m):
    s = Decimal(0)
    for t in terms[:m]:
        s += t
    return s


def eval_demoivre(n, m: int, precision: int = DEFAULT_PRECISION) -> SeriesValue:
    """(n + 1/2) log n - n + log sqrt(2 pi) + first m terms in 1/n, and |term m+1|."""
    if m < 0:
        raise ValueError("m must be >= 0")
    wp = working_precision(precision)
    x = _positive(n, wp, "n")
    terms = _terms("demoivre_n", x, m + 1, wp)
    with workctx(wp):
        value = (x + Decimal("0.5")) * x.ln() - x + ln_sqrt_2pi_decimal(wp) + _sum_terms(terms, m)
        bound = abs(terms[m])
    return SeriesValue(ExtFloat(value, precision), ExtFloat(bound, precision))


def eval_stirling(n, m: int, precision: int = DEFAULT_PRECISION) -> SeriesValue:
    """z log z - z + log sqrt(2 pi) + first m terms in 1/z with z = n + 1/2, and |term m+1|."""
    if m < 0:
        raise ValueError("m must be >= 0")
    wp = working_precision(precision)
    x = _positive(n, wp, "n")
    with workctx(wp):
        z = x + Decimal("0.5")
    terms = _terms("stirling_z", z, m + 1, wp)
    with workctx(wp):
        value = z * z.ln() - z + ln_sqrt_2pi_decimal(wp) + _sum_terms(terms, m)
        bound = abs(terms[m])
    return SeriesValue(ExtFloat(value, precision), ExtFloat(bound, precision))


def _F_decimal(z: Decimal, h: Decimal, K: int, prec: int, warn: bool = True) -> Decimal:
    a = solve_stirling_system(K) if K else []
    with workctx(prec):
        r = h / z
        r2 = r * r
        power = r
        terms = []
        for c in a:
            terms.append(_rational(c, prec) * power)
            power *= r2
        if warn and K >= 2 and abs(terms[-1]) > abs(terms[-2]):
            warnings.warn(
                f"F evaluated with {K} terms at h/z = {r:.3g} is past optimal truncation",
                PastOptimalTruncationWarning,
                stacklevel=3,
            )
        return (z * z.ln() - z) / (2 * h) + _sum_terms(terms, K)


def eval_F(z, h, K: int, precision: int = DEFAULT_PRECISION) -> ExtFloat:
    """Stirling's finite integral with K odd-index correction terms.

    F(z) - F(z - 2h) = log(z - h) holds asymptotically in z/h.  A
    :class:`PastOptimalTruncationWarning` is issued when the last term used
    is larger in magnitude than the previous one.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    wp = working_precision(precision)
    zd = _positive(z, wp, "z")
    hd = _positive(h, wp, "h")
    return ExtFloat(_F_decimal(zd, hd, K, wp), precision)


def _exact(x) -> Fraction:
    if isinstance(x, ExtFloat):
        return x.to_fraction()
    if isinstance(x, Decimal):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def sum_log_arith_progression(x, h, z, K: int = 3, precision: int = DEFAULT_PRECISION) -> ArithmeticLogSum:
    """log(x+h) + log(x+3h) + ... + log(z-h).

    Uses F(z) - F(x) when the smaller end is in the asymptotic regime
    (x/h >= 4K and more than one term), otherwise sums the logarithms.
    """
    xf, hf, zf = _exact(x), _exact(h), _exact(z)
    if hf <= 0:
        raise DomainError("step h must be > 0")
    if xf + hf <= 0:
        raise DomainError("first term x + h must be > 0")
    j_exact = (zf - xf) / (2 * hf)
    j = round(j_exact)
    if j < 1 or abs(j_exact - j) > Fraction(1, 10**precision) * max(1, abs(j)):
        raise AlignmentError(f"(z - x)/(2h) = {float(j_exact)} is not a positive integer")
    wp = working_precision(precision)
    if j > 1 and xf / hf >= 4 * K:
        xd, hd, zd = (rational_to_decimal(v, wp) for v in (xf, hf, zf))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PastOptimalTruncationWarning)
            with workctx(wp):
                value = _F_decimal(zd, hd, K, wp) - _F_decimal(xd, hd, K, wp)
        return ArithmeticLogSum(ExtFloat(value, precision), "series", j)
    total = Decimal(0)
    with workctx(wp):
        for i in range(1, j + 1):
            total += rational_to_decimal(xf + (2 * i - 1) * hf, wp).ln()
    return ArithmeticLogSum(ExtFloat(total, precision), "direct", j)


@dataclass(frozen=True)
class TruncationReport:
    """Term magnitudes of the 1/n series and where they bottom out.

    ``m_star`` counts terms (k); ``m_star_order`` is the matching power
    2k - 1 of 1/n.  Ties go to the smaller index.
    """

    argument: ExtFloat
    magnitudes: list[ExtFloat]
    partial_sums: list[ExtFloat]
    m_star: int
    pi_n_index: int
    m: int
    envelope_bound: ExtFloat
    signs: list[int] = field(default_factory=list)

    @property
    def m_star_order(self) -> int:
        return 2 * self.m_star - 1

    def is_unimodal(self) -> bool:
        mags = [t.value for t in self.magnitudes]
        i = self.m_star - 1
        down = all(mags[k] > mags[k + 1] for k in range(i))
        up = all(mags[k] < mags[k + 1] for k in range(i, len(mags) - 1))
        return down and up


def truncation_report(n, m_max: int, precision: int = DEFAULT_PRECISION, m: int | None = None) -> TruncationReport:
    """Magnitudes of the first ``m_max`` terms of the 1/n series and the optimal cut."""
    if m_max < 2:
        raise ValueError("m_max must be >= 2")
    wp = working_precision(precision)
    x = _positive(n, wp, "n")
    terms = _terms("demoivre_n", x, m_max + 1, wp)
    mags = [abs(t) for t in terms[:m_max]]
    m_star = min(range(m_max), key=lambda i: (mags[i], i)) + 1
    partial, s = [], Decimal(0)
    with workctx(wp):
        for t in terms[:m_max]:
            s += t
            partial.append(ExtFloat(s, precision))
        pi_n = math.floor(x * pi_decimal(wp))
    if m is None:
        m = m_star
    if not 0 <= m <= m_max:
        raise ValueError(f"m must lie in 0..{m_max}")
    return TruncationReport(
        argument=ExtFloat(x, precision),
        magnitudes=[ExtFloat(v, precision) for v in mags],
        partial_sums=partial,
        m_star=m_star,
        pi_n_index=pi_n,
        m=m,
        envelope_bound=ExtFloat(abs(terms[m]), precision),
        signs=[(t > 0) - (t < 0) for t in terms[:m_max]],
    )


def delta_correction(n: int, precision: int = DEFAULT_PRECISION) -> ExtFloat:
    """log n! - [(n + 1/2) log n - n + log sqrt(2 pi)]."""
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n}")
    wp = working_precision(precision)
    exact = _log_factorial_decimal(int(n), wp + len(str(n)))
    with workctx(wp):
        x = Decimal(int(n))
        closed = (x + Decimal("0.5")) * x.ln() - x + ln_sqrt_2pi_decimal(wp)
        return ExtFloat(exact - closed, precision)


def constant_series_partials(m_max: int, precision: int = DEFAULT_PRECISION) -> list[ExtFloat]:
    """s_m = 1 - (d_1 + ... + d_m) for m = 1..m_max.

    The full series 1 - sum d_k diverges; its partial sums envelop
    log sqrt(2 pi) only until the terms start to grow.
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    out, s = [], Fraction(1)
    for k in range(1, m_max + 1):
        s -= demoivre_coefficient(k)
        out.append(ExtFloat(rational_to_decimal(s, precision + 10), precision))
    return out


def recurring_series_limit(k: int, n: int) -> Fraction:
    """n^{k-1} / (k(k-1)), the sum of the recurring series with x = 1 - 1/n."""
    if k < 2 or n < 2:
        raise DomainError("need k >= 2 and n >= 2")
    return Fraction(n ** (k - 1), k * (k - 1))


def recurring_series_partial(k: int, n: int, R: int, precision: int = DEFAULT_PRECISION) -> ExtFloat:
    """sum_{r=0}^{R} C(r+k, k) / ((r+k)(r+k-1)) x^r with x = 1 - 1/n."""
    if k < 2 or n < 2:
        raise DomainError("need k >= 2 and n >= 2")
    if R < 0:
        raise ValueError("R must be >= 0")
    wp = working_precision(precision)
    x = Fraction(n - 1, n)
    with workctx(wp):
        xd = rational_to_decimal(x, wp)
        term = rational_to_decimal(Fraction(binomial(k, k), k * (k - 1)), wp)
        total = term
        for r in range(R):
            # t_{r+1} / t_r = (r + k - 1) / (r + 1) * x
            term = term * (r + k - 1) / (r + 1) * xd
            total += term
    return ExtFloat(total, precision)


def recurring_series_tail_bound(k: int, n: int, R: int) -> Fraction | None:
    """Bound on the omitted tail after term R, or None when no geometric bound applies yet.

    Term ratios (r + k - 1)/(r + 1) * x decrease in r, so once the ratio at
    r = R + 1 is below one the tail is dominated by a geometric series.
    """
    x = Fraction(n - 1, n)
    rho = Fraction(R + k, R + 2) * x
    if rho >= 1:
        return None
    t = Fraction(binomial(R + 1 + k, k), (R + 1 + k) * (R + k)) * x ** (R + 1)
    return t / (1 - rho)

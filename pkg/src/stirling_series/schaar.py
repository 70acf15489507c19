"""Schaar's exact remainder for log Γ(a+1), by certified quadrature.

For a > 0 and m >= 0,

    log Γ(a+1) = log sqrt(2πa) + a(log a - 1) + sum_{k=1}^{m} d_k / a^{2k-1} + R(a, m),
    R(a, m)    = -(-1)^m / π * ∫_0^∞ x^{2m}/(1+x^2) log(1 - e^{-2πax}) dx,

so the divergent tail of the 1/a series is traded for a convergent
integral.  The integrand has an integrable log singularity at 0 and decays
exponentially.  The integral is split into

* a head (0, x0] dropped with a closed-form bound,
* (x0, split] integrated in u = log x, where the singularity is smooth,
* (split, T] integrated directly,
* a tail (T, ∞) dropped with a closed-form bound,

and the two middle pieces use adaptive Gauss-Legendre with bisection error
estimates.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from decimal import Decimal
from functools import lru_cache

from .coefficients import demoivre_coefficient
from .exceptions import DomainError, QuadratureError
from .numerics import (
    DEFAULT_PRECISION,
    ExtFloat,
    ln_sqrt_2pi_decimal,
    pi_decimal,
    rational_to_decimal,
    to_decimal,
    workctx,
)

__all__ = [
    "QuadratureSpec",
    "expm1_recip_partial_fraction",
    "partial_fraction_tail_bound",
    "gauss_legendre",
    "adaptive_integrate",
    "schaar_integral",
    "schaar_remainder",
    "schaar_log_gamma",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and cut points for :func:`schaar_remainder`.

    ``tail_cut=None`` picks the smallest doubling of 1/(2πa) whose tail
    bound is at most abs_tolerance/10.
    """

    abs_tolerance: float | Decimal | str = "1e-9"
    split_point: float | Decimal | str = 1
    tail_cut: float | Decimal | str | None = None
    max_subdivisions: int = 2000
    nodes: int = 10

    def __post_init__(self):
        tol = Decimal(str(self.abs_tolerance))
        if not tol > 0:
            raise ValueError("abs_tolerance must be > 0")
        object.__setattr__(self, "abs_tolerance", tol)
        split = Decimal(str(self.split_point))
        if not 0 < split <= 1:
            raise ValueError("split_point must lie in (0, 1]")
        object.__setattr__(self, "split_point", split)
        if self.tail_cut is not None:
            object.__setattr__(self, "tail_cut", Decimal(str(self.tail_cut)))
        if self.max_subdivisions < 1 or self.nodes < 2:
            raise ValueError("need max_subdivisions >= 1 and nodes >= 2")

    def digits(self) -> int:
        """Working digits for this tolerance."""
        return max(20, -self.abs_tolerance.adjusted() + 12)


def partial_fraction_tail_bound(x, K: int) -> Decimal:
    """|x| / (2π²K), bounding the terms of the partial fraction beyond K."""
    d = to_decimal(x, 30)
    with workctx(30):
        pi = pi_decimal(30)
        return abs(d) / (2 * pi * pi * K)


def expm1_recip_partial_fraction(x, K: int, precision: int = DEFAULT_PRECISION) -> ExtFloat:
    """1/x - 1/2 + sum_{k=1}^{K} 2x / (x^2 + 4k^2π^2), which tends to 1/(e^x - 1)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    wp = precision + len(str(K)) + 5
    d = to_decimal(x, wp)
    if d == 0:
        raise DomainError("x must be nonzero")
    with workctx(wp):
        four_pi2 = 4 * pi_decimal(wp) ** 2
        x2 = d * d
        two_x = 2 * d
        s = Decimal(0)
        for k in range(1, K + 1):
            s += two_x / (x2 + four_pi2 * k * k)
        return ExtFloat(1 / d - Decimal("0.5") + s, precision)


@lru_cache(maxsize=32)
def gauss_legendre(n: int, prec: int) -> tuple[tuple[Decimal, Decimal], ...]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    out = []
    with workctx(prec + 5):
        eps = Decimal(10) ** (-(prec + 2))
        for i in range(1, n + 1):
            x = Decimal(math.cos(math.pi * (i - 0.25) / (n + 0.5)))
            for _ in range(100):
                p0, p1 = Decimal(1), x
                for j in range(2, n + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < eps:
                    break
            p0, p1 = Decimal(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            out.append((+x, +w))
    return tuple(out)


def _gl(f, a, b, rule):
    half = (b - a) / 2
    mid = (a + b) / 2
    return half * sum(w * f(mid + half * x) for x, w in rule)


def adaptive_integrate(f, a: Decimal, b: Decimal, tol: Decimal, prec: int,
                       nodes: int = 10, max_subdivisions: int = 2000) -> tuple[Decimal, Decimal]:
    """Globally adaptive Gauss-Legendre integration of ``f`` over [a, b].

    Each interval's error is estimated by comparing the rule on the whole
    interval with the rule on its two halves; the worst interval is split
    until the summed estimates are below ``tol``.  Returns (value, error
    estimate).  Raises :class:`QuadratureError` after ``max_subdivisions``.
    """
    rule = gauss_legendre(nodes, prec)
    with workctx(prec):
        if a == b:
            return Decimal(0), Decimal(0)

        def piece(lo, hi, whole):
            mid = (lo + hi) / 2
            left, right = _gl(f, lo, mid, rule), _gl(f, mid, hi, rule)
            return abs(whole - left - right), lo, hi, left, right

        err, lo, hi, left, right = piece(a, b, _gl(f, a, b, rule))
        heap = [(-err, 0, lo, hi, left, right)]
        counter = 1
        total_err = err
        while total_err > tol:
            if counter > max_subdivisions:
                raise QuadratureError(
                    f"tolerance {tol} not met after {max_subdivisions} subdivisions "
                    f"(estimated error {total_err:.3e})"
                )
            neg_err, _, lo, hi, left, right = heapq.heappop(heap)
            total_err += neg_err
            mid = (lo + hi) / 2
            for sub in (piece(lo, mid, left), piece(mid, hi, right)):
                total_err += sub[0]
                heapq.heappush(heap, (-sub[0], counter, *sub[1:]))
                counter += 1
        value = sum((e[4] + e[5] for e in sorted(heap, key=lambda e: e[1])), Decimal(0))
        return value, total_err


def _expm1_neg(y: Decimal) -> Decimal:
    # 1 - e^{-y} without cancellation for small y
    if y > Decimal("0.5"):
        return 1 - (-y).exp()
    term, total, k = y, y, 1
    while True:
        k += 1
        term = -term * y / k
        new = total + term
        if new == total:
            break
        total = new
    return total


def _log_one_minus_exp_neg(y: Decimal) -> Decimal:
    """log(1 - e^{-y}) for y > 0, accurate at both ends."""
    if y > 2:
        w = (-y).exp()
        # log(1 - w) = -(w + w^2/2 + ...)
        s, p, j = Decimal(0), w, 1
        while True:
            new = s - p / j
            if new == s:
                return s
            s, p, j = new, p * w, j + 1
    return _expm1_neg(y).ln()


def _head_bound(x0: Decimal, c: Decimal, m: int) -> Decimal:
    # |log(1 - e^{-cx})| <= log(1 + 1/(cx)) and x^{2m}/(1+x^2) <= x0^{2m} on (0, x0], x0 <= 1
    base = x0 * (1 + 1 / (c * x0)).ln() + (1 + c * x0).ln() / c
    return base * x0 ** (2 * m)


def _tail_bound(T: Decimal, c: Decimal, m: int) -> Decimal:
    # |log(1 - e^{-cx})| <= 2 e^{-cx} once e^{-cT} <= 1/2, and x^{2m}/(1+x^2) <= x^j
    j = max(2 * m - 2, 0)
    s = sum(Decimal(math.factorial(j) // math.factorial(i)) * T**i / c ** (j - i + 1) for i in range(j + 1))
    return 2 * (-c * T).exp() * s


def schaar_integral(a, m: int, spec: QuadratureSpec | None = None) -> tuple[Decimal, Decimal]:
    """∫_0^∞ x^{2m}/(1+x^2) log(1 - e^{-2πax}) dx and its total error bound."""
    spec = spec or QuadratureSpec()
    if m < 0:
        raise ValueError("m must be >= 0")
    prec = spec.digits()
    tol = spec.abs_tolerance
    ad = to_decimal(a, prec)
    if ad <= 0:
        raise DomainError(f"a must be > 0, got {ad}")
    with workctx(prec):
        c = 2 * pi_decimal(prec) * ad
        budget = tol / 10
        ln2_over_c = Decimal(2).ln() / c

        if spec.tail_cut is None:
            T = max(ln2_over_c, 1 / c)
            while _tail_bound(T, c, m) > budget:
                T *= 2
        else:
            T = spec.tail_cut
            if T < ln2_over_c or _tail_bound(T, c, m) > budget:
                raise ValueError(f"tail_cut {T} leaves a tail above abs_tolerance/10")
        tail = _tail_bound(T, c, m)

        split = min(spec.split_point, T)
        x0 = split
        while _head_bound(x0, c, m) > budget:
            x0 /= 2
        head = _head_bound(x0, c, m)

        def f(x):
            return x ** (2 * m) / (1 + x * x) * _log_one_minus_exp_neg(c * x)

        def g(u):
            x = u.exp()
            return x * f(x)

        piece_tol = (tol - head - tail) / 2 * Decimal("0.9")
        left, err_l = adaptive_integrate(g, x0.ln(), split.ln(), piece_tol, prec,
                                         spec.nodes, spec.max_subdivisions)
        right, err_r = adaptive_integrate(f, split, T, piece_tol, prec, spec.nodes, spec.max_subdivisions)
        return left + right, head + tail + err_l + err_r


def _digits_for(value: Decimal, tol: Decimal) -> int:
    if value == 0:
        return 1
    return max(1, value.adjusted() - tol.adjusted())


def schaar_remainder(a, m: int, spec: QuadratureSpec | None = None) -> ExtFloat:
    """R(a, m) = -(-1)^m / π * ∫_0^∞ x^{2m}/(1+x^2) log(1 - e^{-2πax}) dx.

    The logarithm is negative, so R has the sign (-1)^m.
    """
    spec = spec or QuadratureSpec()
    prec = spec.digits()
    integral, _ = schaar_integral(a, m, spec)
    with workctx(prec):
        r = -((-1) ** m) * integral / pi_decimal(prec)
    return ExtFloat(r, _digits_for(r, spec.abs_tolerance))


def schaar_log_gamma(a, m: int, spec: QuadratureSpec | None = None) -> ExtFloat:
    """log Γ(a+1) from the first m terms in 1/a plus Schaar's remainder.

    The right-hand side is exact for every m, so results for different m
    agree to within the quadrature tolerance.
    """
    spec = spec or QuadratureSpec()
    prec = spec.digits()
    ad = to_decimal(a, prec)
    if ad <= 0:
        raise DomainError(f"a must be > 0, got {ad}")
    r = schaar_remainder(ad, m, spec)
    with workctx(prec):
        value = ln_sqrt_2pi_decimal(prec) + ad.ln() / 2 + ad * (ad.ln() - 1)
        power = 1 / ad
        inv2 = power * power
        for k in range(1, m + 1):
            value += rational_to_decimal(demoivre_coefficient(k), prec) * power
            power *= inv2
        value += r.value
    return ExtFloat(value, _digits_for(value, spec.abs_tolerance))

"""Exact and extended-precision arithmetic shared by every other module.

Exact quantities (Bernoulli numbers, coefficient families, Wallis partial
products) are :class:`fractions.Fraction`.  Real quantities are
:class:`ExtFloat`, a :class:`decimal.Decimal` paired with the number of
significant decimal digits it is guaranteed to.  Decimal contexts are
thread-local, so every function here is safe to call from several threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .exceptions import DomainError, InsufficientPrecisionError

__all__ = [
    "DEFAULT_PRECISION",
    "ExactRational",
    "ExtFloat",
    "binomial",
    "working_precision",
    "workctx",
    "to_decimal",
    "rational_to_decimal",
    "ln_ext",
    "exp_ext",
    "sqrt_ext",
    "pi_ext",
    "ln_sqrt_2pi",
    "log10_e",
    "to_decimal_string",
    "format_fixed",
    "parse_fixed",
    "parse_number",
]

DEFAULT_PRECISION = 30

#: Exact signed rational with a positive, coprime denominator.
ExactRational = Fraction

_LOG10_2 = math.log10(2)


def working_precision(digits: int) -> int:
    """Internal digits used when ``digits`` correct output digits are wanted."""
    return 2 * digits + 10


def binomial(n: int, k: int) -> int:
    """C(n, k) for nonnegative integers, 0 when k > n."""
    if n < 0 or k < 0:
        raise DomainError(f"binomial needs nonnegative arguments, got ({n}, {k})")
    return math.comb(n, k)


def _context(prec: int, rounding=ROUND_HALF_EVEN) -> Context:
    return Context(prec=prec, rounding=rounding, Emin=-999999999, Emax=999999999)


def workctx(prec: int, rounding=ROUND_HALF_EVEN):
    """Thread-local decimal context manager at ``prec`` digits."""
    return localcontext(_context(prec, rounding))


def _approx_log10(n: int) -> int:
    # floor(log10(n)) up to +-1
    return int(n.bit_length() * _LOG10_2)


def rational_to_decimal(x, prec: int, rounding=ROUND_HALF_EVEN) -> Decimal:
    """Round the exact rational ``x`` to ``prec`` significant digits.

    Works from the integer numerator and denominator directly, so huge
    values such as ratios of factorials are converted without building
    full-length decimals.  Any decimal rounding mode is honoured, which the
    Wallis brackets rely on for outward rounding.
    """
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    if num == 0:
        return Decimal(0)
    sign = -1 if num < 0 else 1
    num = abs(num)
    shift = prec + 3 - (_approx_log10(num) - _approx_log10(den))
    if shift >= 0:
        q, r = divmod(num * 10**shift, den)
    else:
        q, r = divmod(num, den * 10 ** (-shift))
    # sticky digit keeps directed and half-even rounding exact
    q = q * 10 + (1 if r else 0)
    d = Decimal(f"{sign * q}E{-(shift + 1)}")  # exact; scaleb would round to the ambient context
    return _context(prec, rounding).plus(d)


def to_decimal(x, prec: int) -> Decimal:
    """Coerce ints, Fractions, Decimals, strings, floats and ExtFloats to a Decimal."""
    if isinstance(x, ExtFloat):
        return _context(prec).plus(x.value)
    if isinstance(x, Decimal):
        return _context(prec).plus(x)
    if isinstance(x, (int, Rational)):
        return rational_to_decimal(Fraction(x), prec)
    if isinstance(x, str):
        return rational_to_decimal(parse_number(x), prec)
    if isinstance(x, float):
        return _context(prec).plus(Decimal(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Decimal")


@dataclass(frozen=True, eq=False)
class ExtFloat:
    """Extended-precision real with an explicit precision in decimal digits.

    ``value`` may carry more digits than ``precision``; the precision is the
    number of significant digits the producer guarantees.  Arithmetic is
    done at the larger of the operand precisions, so precision is never
    silently reduced.
    """

    value: Decimal
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if not isinstance(self.value, Decimal):
            object.__setattr__(self, "value", to_decimal(self.value, max(self.precision, 1) + 10))
        if self.precision < 1:
            raise ValueError("precision must be a positive number of digits")
        if not self.value.is_finite():
            raise DomainError(f"ExtFloat must be finite, got {self.value}")

    @classmethod
    def of(cls, x, precision: int = DEFAULT_PRECISION) -> ExtFloat:
        if isinstance(x, ExtFloat):
            return x
        return cls(to_decimal(x, precision + 10), precision)

    def _coerce(self, other):
        if isinstance(other, ExtFloat):
            return other.value, max(self.precision, other.precision)
        if isinstance(other, (int, Rational, Decimal, float, str)):
            return to_decimal(other, self.precision + 10), self.precision
        return None, None

    def _binop(self, other, op, reflected=False):
        v, prec = self._coerce(other)
        if v is None:
            return NotImplemented
        a, b = (v, self.value) if reflected else (self.value, v)
        ctx = _context(prec)
        if op == "add":
            r = ctx.add(a, b)
        elif op == "sub":
            r = ctx.subtract(a, b)
        elif op == "mul":
            r = ctx.multiply(a, b)
        else:
            if b == 0:
                raise ZeroDivisionError("ExtFloat division by zero")
            r = ctx.divide(a, b)
        return ExtFloat(r, prec)

    def __add__(self, other):
        return self._binop(other, "add")

    def __radd__(self, other):
        return self._binop(other, "add", reflected=True)

    def __sub__(self, other):
        return self._binop(other, "sub")

    def __rsub__(self, other):
        return self._binop(other, "sub", reflected=True)

    def __mul__(self, other):
        return self._binop(other, "mul")

    def __rmul__(self, other):
        return self._binop(other, "mul", reflected=True)

    def __truediv__(self, other):
        return self._binop(other, "div")

    def __rtruediv__(self, other):
        return self._binop(other, "div", reflected=True)

    def __neg__(self):
        return ExtFloat(-self.value, self.precision)

    def __abs__(self):
        return ExtFloat(abs(self.value), self.precision)

    def __float__(self):
        return float(self.value)

    def _cmp_value(self, other):
        v, _ = self._coerce(other)
        if v is None:
            return NotImplemented
        return v

    def __eq__(self, other):
        v = self._cmp_value(other)
        return v if v is NotImplemented else self.value == v

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        v = self._cmp_value(other)
        return v if v is NotImplemented else self.value < v

    def __le__(self, other):
        v = self._cmp_value(other)
        return v if v is NotImplemented else self.value <= v

    def __gt__(self, other):
        v = self._cmp_value(other)
        return v if v is NotImplemented else self.value > v

    def __ge__(self, other):
        v = self._cmp_value(other)
        return v if v is NotImplemented else self.value >= v

    def sign(self) -> int:
        return (self.value > 0) - (self.value < 0)

    def to_fraction(self) -> Fraction:
        return Fraction(self.value)

    def rounded(self, digits: int | None = None) -> Decimal:
        """The value rounded half-even to ``digits`` (default: precision) significant digits."""
        return _context(digits or self.precision).plus(self.value)

    def __str__(self):
        return format(self.rounded(), "f") if abs(self.value) >= Decimal("1e-6") or self.value == 0 \
            else str(self.rounded())

    def __repr__(self):
        return f"ExtFloat('{self}', precision={self.precision})"


def _as_decimal(x, prec):
    return x.value if isinstance(x, ExtFloat) else to_decimal(x, prec)


def _precision_of(x, precision):
    if precision is not None:
        return precision
    return x.precision if isinstance(x, ExtFloat) else DEFAULT_PRECISION


def ln_ext(x, precision: int | None = None) -> ExtFloat:
    """Natural logarithm, correctly rounded at the operand's precision."""
    p = _precision_of(x, precision)
    d = _as_decimal(x, p + 10)
    if d <= 0:
        raise DomainError(f"ln of non-positive value {d}")
    return ExtFloat(_context(p + 3).ln(d), p)


def exp_ext(x, precision: int | None = None) -> ExtFloat:
    p = _precision_of(x, precision)
    return ExtFloat(_context(p + 3).exp(_as_decimal(x, p + 10)), p)


def sqrt_ext(x, precision: int | None = None) -> ExtFloat:
    p = _precision_of(x, precision)
    d = _as_decimal(x, p + 10)
    if d < 0:
        raise DomainError(f"sqrt of negative value {d}")
    return ExtFloat(_context(p + 3).sqrt(d), p)


def _arctan_recip(x: int, unity: int) -> int:
    # arctan(1/x) * unity by the alternating Gregory series in integers
    total = term = unity // x
    x2 = x * x
    k = 1
    while term:
        term //= x2
        k += 2
        total += -(term // k) if k % 4 == 3 else term // k
    return total


@lru_cache(maxsize=64)
def _pi_decimal(prec: int) -> Decimal:
    guard = 10
    unity = 10 ** (prec + guard)
    pi_int = 4 * (4 * _arctan_recip(5, unity) - _arctan_recip(239, unity))
    return _context(prec).plus(Decimal(f"{pi_int}E{-(prec + guard)}"))


def pi_ext(precision: int = DEFAULT_PRECISION) -> ExtFloat:
    """π by Machin's formula in integer arithmetic."""
    return ExtFloat(_pi_decimal(precision + 3), precision)


def pi_decimal(prec: int) -> Decimal:
    return _pi_decimal(prec)


@lru_cache(maxsize=64)
def ln_sqrt_2pi_decimal(prec: int) -> Decimal:
    ctx = _context(prec + 5)
    return _context(prec).plus(ctx.divide(ctx.ln(ctx.multiply(2, _pi_decimal(prec + 5))), 2))


def ln_sqrt_2pi(precision: int = DEFAULT_PRECISION) -> ExtFloat:
    """log √(2π)."""
    return ExtFloat(ln_sqrt_2pi_decimal(precision + 3), precision)


@lru_cache(maxsize=64)
def log10_e(prec: int) -> Decimal:
    ctx = _context(prec + 5)
    return _context(prec).plus(ctx.divide(1, ctx.ln(10)))


def format_fixed(x, places: int) -> str:
    """Exact rational -> fixed-point string, rounded half-to-even at ``places``."""
    if places < 0:
        raise ValueError("places must be >= 0")
    q = round(Fraction(x) * 10**places)  # Fraction.__round__ is half-to-even
    sign = "-" if q < 0 else ""
    q = abs(q)
    if places == 0:
        return f"{sign}{q}"
    s = str(q).rjust(places + 1, "0")
    return f"{sign}{s[:-places]}.{s[-places:]}"


def parse_fixed(s: str) -> Fraction:
    """Inverse of :func:`format_fixed` (exact)."""
    return Fraction(s.strip())


def parse_number(s: str) -> Fraction:
    """Parse an integer, decimal literal or ``p/q`` rational exactly."""
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {s!r}") from exc


def to_decimal_string(x, places: int, guard: int = 5) -> str:
    """Correctly rounded (half-to-even) fixed-point representation of ``x``.

    ``x`` must carry at least ``guard`` digits beyond the last requested
    decimal place; otherwise the rounding cannot be trusted.
    """
    if places < 0:
        raise ValueError("places must be >= 0")
    if isinstance(x, ExtFloat):
        value, prec = x.value, x.precision
        int_digits = max(value.adjusted() + 1, 0) if value != 0 else 0
        if prec - int_digits < places + guard:
            raise InsufficientPrecisionError(
                f"{prec} significant digits cannot support {places} places "
                f"with {guard} guard digits (integer part has {int_digits} digits)"
            )
        return format_fixed(Fraction(value), places)
    return format_fixed(Fraction(x), places)

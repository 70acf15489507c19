"""Stirling's triangular system, De Moivre's coefficients and their printed forms.

Stirling's finite integral for a sum of logarithms in steps of 2h is

    F(z) = (z log z - z) / 2h + sum_k a_{2k-1} (h/z)^{2k-1}

and its coefficients are fixed by the lower-triangular system

    -1 / ((2n+1)(4n)) = sum_{k=0}^{n-1} C(2n-1, 2k) a_{2k+1},   n = 1, 2, ...

The system is the definition used here.  The closed form
``a_{2k-1} = (1 - 2^{2k-1}) B_{2k} / (2k(2k-1))`` is provided separately and
checked against it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .bernoulli import bernoulli_number
from .exceptions import DomainError
from .numerics import ExtFloat, binomial, log10_e

__all__ = [
    "CoefficientTable",
    "PUBLISHED_BASE10_MODULUS",
    "stirling_system_rows",
    "solve_stirling_system",
    "solve_even_system",
    "demoivre_coefficient",
    "printed_coefficient",
    "closed_form_stirling",
    "bernoulli_link_residual",
    "base10_modulus",
    "coefficient_table",
]

#: The modulus as printed in the 1756 "Doctrine of Chances" (5th decimal is off by one).
PUBLISHED_BASE10_MODULUS = "0.43428448190325"

# (row n, denominator factors) of the one right-hand side that the 1756 reprint gets wrong
_PUBLISHED_RHS_TYPOS = {4: (9, 15)}


def _check_depth(K):
    if K < 1:
        raise DomainError(f"depth must be >= 1, got {K}")


def stirling_system_rows(K: int, as_published: bool = False):
    """Rows ``(rhs, [C(2n-1, 0), C(2n-1, 2), ..., C(2n-1, 2n-2)])`` for n = 1..K.

    ``as_published`` reproduces the reprinted right-hand side -1/(9*15) in
    row 4 instead of -1/(9*16).
    """
    _check_depth(K)
    rows = []
    for n in range(1, K + 1):
        p, q = _PUBLISHED_RHS_TYPOS.get(n, (2 * n + 1, 4 * n)) if as_published else (2 * n + 1, 4 * n)
        rhs = Fraction(-1, p * q)
        rows.append((rhs, [binomial(2 * n - 1, 2 * k) for k in range(n)]))
    return rows


def _forward_substitute(rows):
    sol: list[Fraction] = []
    for rhs, coeffs in rows:
        acc = rhs - sum(c * a for c, a in zip(coeffs, sol))
        sol.append(acc / coeffs[-1])
    return sol


@lru_cache(maxsize=None)
def _solved(K: int, as_published: bool) -> tuple[Fraction, ...]:
    return tuple(_forward_substitute(stirling_system_rows(K, as_published)))


def solve_stirling_system(K: int, as_published: bool = False) -> list[Fraction]:
    """[a_1, a_3, ..., a_{2K-1}] by forward substitution."""
    _check_depth(K)
    return list(_solved(K, as_published))


def solve_even_system(K: int) -> list[Fraction]:
    """[a_2, a_4, ..., a_{2K}] from ``sum_k C(2n, 2k+1) a_{2k+2} = 0``.

    The system is homogeneous with a nonzero diagonal, so forward
    substitution returns all zeros.
    """
    _check_depth(K)
    rows = [(Fraction(0), [binomial(2 * n, 2 * k + 1) for k in range(n)]) for n in range(1, K + 1)]
    return _forward_substitute(rows)


def demoivre_coefficient(k: int) -> Fraction:
    """B_{2k} / (2k(2k-1)), the coefficient of 1/n^{2k-1}."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    return bernoulli_number(2 * k) / (2 * k * (2 * k - 1))


def closed_form_stirling(k: int) -> Fraction:
    """(1 - 2^{2k-1}) B_{2k} / (2k(2k-1)); equals a_{2k-1} from the system."""
    return (1 - 2 ** (2 * k - 1)) * demoivre_coefficient(k)


def printed_coefficient(k: int) -> Fraction:
    """a_{2k-1} (1/2)^{2k-1}: the coefficient of 1/z^{2k-1} when h = 1/2."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    return solve_stirling_system(k)[-1] / 2 ** (2 * k - 1)


def bernoulli_link_residual(n: int, coefficients=None) -> Fraction:
    """1/2 + sum_{k=1}^{n} C(2n+1, 2k) 2k(2k-1) c_k.

    Zero for every n when c_k are the system's a_{2k-1} (the default); the
    system row n is a combination of these.  With c_k = d_k the sum is n
    instead, which is where the factor (1 - 2^{2k-1}) comes from.
    """
    if coefficients is None:
        coefficients = solve_stirling_system(n)
    return Fraction(1, 2) + sum(
        binomial(2 * n + 1, 2 * k) * 2 * k * (2 * k - 1) * coefficients[k - 1] for k in range(1, n + 1)
    )


def base10_modulus(precision: int = 14) -> ExtFloat:
    """log10(e) = 1/ln(10)."""
    return ExtFloat(log10_e(precision + 3), precision)


@dataclass(frozen=True)
class CoefficientTable:
    """The coefficient families up to depth K, with where each came from."""

    K: int
    stirling_a: list[Fraction]
    demoivre_d: list[Fraction]
    printed: list[Fraction]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (len(self.stirling_a) == len(self.demoivre_d) == len(self.printed) == self.K):
            raise ValueError("all coefficient families must have K entries")


def coefficient_table(K: int) -> CoefficientTable:
    a = solve_stirling_system(K)
    return CoefficientTable(
        K=K,
        stirling_a=a,
        demoivre_d=[demoivre_coefficient(k) for k in range(1, K + 1)],
        printed=[a[k - 1] / 2 ** (2 * k - 1) for k in range(1, K + 1)],
        provenance={"stirling_a": "system", "demoivre_d": "closed-form", "printed": "system"},
    )

"""Exact Bernoulli numbers and sums of powers of the first integers."""
from __future__ import annotations

import threading
from fractions import Fraction

from .exceptions import DomainError
from .numerics import binomial

__all__ = ["BernoulliCache", "bernoulli_number", "bernoulli_numbers", "faulhaber_sum"]


class BernoulliCache:
    """Write-once memo of B_0, B_1, ... in the B_1 = -1/2 convention.

    Values come from the forward recurrence
    ``sum_{j=0}^{m} C(m+1, j) B_j = 0`` (m >= 1), so asking for B_k fills in
    every lower index as well.  Reads are lock-free; extension happens under
    a lock and only ever appends.
    """

    def __init__(self):
        self._values: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._values)

    def _extend(self, k: int) -> None:
        with self._lock:
            values = self._values
            for m in range(len(values), k + 1):
                if m >= 3 and m % 2 == 1:
                    values.append(Fraction(0))
                    continue
                s = sum(binomial(m + 1, j) * values[j] for j in range(m) if values[j])
                values.append(-s / (m + 1))

    def get(self, k: int, plus_half: bool = False) -> Fraction:
        """B_k; with ``plus_half`` the variant whose B_1 is +1/2."""
        if k < 0:
            raise DomainError(f"Bernoulli index must be >= 0, got {k}")
        if k >= len(self._values):
            self._extend(k)
        if plus_half and k == 1:
            return Fraction(1, 2)
        return self._values[k]

    def upto(self, k: int, plus_half: bool = False) -> list[Fraction]:
        return [self.get(j, plus_half) for j in range(k + 1)]


_CACHE = BernoulliCache()


def bernoulli_number(k: int, plus_half: bool = False) -> Fraction:
    """Exact B_k (B_1 = -1/2 unless ``plus_half``)."""
    return _CACHE.get(k, plus_half)


def bernoulli_numbers(k: int, plus_half: bool = False) -> list[Fraction]:
    """[B_0, ..., B_k]."""
    return _CACHE.upto(k, plus_half)


def faulhaber_sum(p: int, m: int) -> int:
    """1^p + 2^p + ... + m^p from Bernoulli's closed form.

    The closed form is written for the sum up to m, which needs B_1 = +1/2.
    """
    if p < 1:
        raise DomainError(f"power must be >= 1, got {p}")
    if m < 0:
        raise DomainError(f"upper limit must be >= 0, got {m}")
    total = sum(
        binomial(p + 1, j) * bernoulli_number(j, plus_half=True) * Fraction(m) ** (p + 1 - j)
        for j in range(p + 1)
    ) / (p + 1)
    assert total.denominator == 1
    return total.numerator

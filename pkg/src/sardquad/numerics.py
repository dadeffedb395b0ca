"""Exact combinatorial tables and power-sum identities.

Rationals are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator); high-precision reals are :class:`mpmath.mpf`.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath

DEFAULT_PRECISION = 256


@lru_cache(maxsize=None)
def bernoulli_table(n: int) -> tuple[Fraction, ...]:
    """Return ``(B_0, ..., B_n)`` with the convention ``B_1 = -1/2``.

    Uses the recurrence ``sum_{j=0}^{n} C(n+1, j) B_j = 0`` for ``n >= 1``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    table = [Fraction(1)]
    for k in range(1, n + 1):
        acc = sum((comb(k + 1, j) * table[j] for j in range(k)), Fraction(0))
        table.append(-acc / (k + 1))
    return tuple(table)


def bernoulli(n: int) -> Fraction:
    return bernoulli_table(n)[n]


@lru_cache(maxsize=None)
def delta_power(i: int, j: int) -> int:
    """Forward difference of order ``i`` of ``x**j`` at ``x = 0``.

    Equals ``i! * S(j, i)`` (Stirling number of the second kind), so it is a
    non-negative integer that vanishes for ``i > j``.
    """
    if i < 0 or j < 0:
        raise ValueError("i and j must be non-negative")
    return sum((-1) ** (i - a) * comb(i, a) * a**j for a in range(i + 1))


def delta_power_table(size: int) -> tuple[tuple[int, ...], ...]:
    """Square table ``T[i][j] = delta_power(i, j)`` for ``0 <= i, j <= size``."""
    return tuple(
        tuple(delta_power(i, j) for j in range(size + 1)) for i in range(size + 1)
    )


def _delta_power_at(i: int, k: int, n: int) -> int:
    # i-th forward difference of x**k evaluated at x = n
    return sum((-1) ** (i - a) * comb(i, a) * (n + a) ** k for a in range(i + 1))


def power_sum(k: int, n: int) -> Fraction:
    """``sum_{g=0}^{n-1} g**k`` through the Bernoulli-number expansion.

    >>> power_sum(3, 5)
    Fraction(100, 1)
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    B = bernoulli_table(k)
    total = Fraction(0)
    for j in range(1, k + 2):
        total += Fraction(factorial(k), factorial(j) * factorial(k + 1 - j)) * B[k + 1 - j] * n**j
    return total


def geometric_power_sum(q, k: int, n: int):
    """``sum_{g=0}^{n-1} q**g * g**k`` via the two-term finite-difference form.

    ``q`` may be a :class:`~fractions.Fraction`/int (exact result) or an
    ``mpf`` (result at the current mpmath precision). ``q = 1`` is singular
    here; use :func:`power_sum` instead.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if n < 1:
        raise ValueError("n must be positive")
    if isinstance(q, int):
        q = Fraction(q)
    if q == 1:
        raise ValueError("q = 1 is singular for the geometric form; use power_sum")
    one = 1
    r = q / (one - q)
    head = sum((r**i * delta_power(i, k) for i in range(k + 1)), 0 * q)
    tail = sum((r**i * _delta_power_at(i, k, n) for i in range(k + 1)), 0 * q)
    return (head - q**n * tail) / (one - q)


def geometric_power_series(q, k: int):
    """``sum_{g>=0} q**g * g**k`` for ``|q| < 1`` (closed form, no truncation)."""
    if isinstance(q, int):
        q = Fraction(q)
    if not abs(q) < 1:
        raise ValueError("series diverges unless |q| < 1")
    r = q / (1 - q)
    return sum((r**i * delta_power(i, k) for i in range(k + 1)), 0 * q) / (1 - q)


def to_mpf(x: Fraction | int) -> mpmath.mpf:
    """Round an exact rational to an ``mpf`` at the current working precision."""
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator

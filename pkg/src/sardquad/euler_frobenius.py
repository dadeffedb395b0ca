"""Euler-Frobenius polynomials and certified isolation of their roots in (-1, 0)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd

import mpmath

from .numerics import DEFAULT_PRECISION, delta_power, to_mpf


@dataclass(frozen=True)
class EFPolynomial:
    """Euler-Frobenius polynomial ``E_k`` with integer coefficients, ascending powers."""

    degree: int
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.degree + 1:
            raise ValueError("need degree + 1 coefficients")

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def is_palindromic(self) -> bool:
        return self.coefficients == self.coefficients[::-1]

    def sign_at(self, x: Fraction | int) -> int:
        """Exact sign of ``E_k(x)`` at a rational point, using integer arithmetic only."""
        return _sign_at(self.coefficients, Fraction(x))


def _sign_at(coeffs, x: Fraction) -> int:
    # sign of q**k * P(p/q) = sum c_s p**s q**(k-s); q > 0 so the sign is preserved
    p, q = x.numerator, x.denominator
    acc = 0
    qpow = 1
    for c in reversed(coeffs):
        acc = acc * p + c * qpow
        qpow *= q
    return (acc > 0) - (acc < 0)


@lru_cache(maxsize=None)
def ef_by_recurrence(k: int) -> EFPolynomial:
    """``E_k = (k x + 1) E_{k-1} + x (1 - x) E'_{k-1}``, ``E_0 = 1``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return EFPolynomial(0, (1,))
    prev = ef_by_recurrence(k - 1).coefficients
    # coefficientwise: a_s = (s + 1) a_s' + (k - s + 1) a_{s-1}'
    out = []
    for s in range(k + 1):
        a = (s + 1) * prev[s] if s < k else 0
        b = (k - s + 1) * prev[s - 1] if s >= 1 else 0
        out.append(a + b)
    return EFPolynomial(k, tuple(out))


def ef_by_euler_formula(k: int) -> EFPolynomial:
    """Coefficients ``a_s = sum_{j<=s} (-1)^j C(k+2, j) (s+1-j)^(k+1)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    coeffs = tuple(
        sum((-1) ** j * comb(k + 2, j) * (s + 1 - j) ** (k + 1) for j in range(s + 1))
        for s in range(k + 1)
    )
    return EFPolynomial(k, coeffs)


def ef_by_finite_differences(k: int) -> EFPolynomial:
    """Expand ``(x-1)^(k+1) sum_{i=1}^{k+1} D^i 0^(k+1) / (x-1)^i`` into powers of x."""
    if k < 0:
        raise ValueError("k must be non-negative")
    coeffs = [0] * (k + 1)
    for i in range(1, k + 2):
        # (x - 1)^(k+1-i), ascending
        e = k + 1 - i
        term = [comb(e, s) * (-1) ** (e - s) for s in range(e + 1)]
        w = delta_power(i, k + 1)
        for s, c in enumerate(term):
            coeffs[s] += w * c
    return EFPolynomial(k, tuple(coeffs))


# -- root isolation -----------------------------------------------------------


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _primitive(p):
    g = 0
    for c in p:
        g = gcd(g, c)
    if g > 1:
        p = [c // g for c in p]
    return p


def _derivative(p):
    return [s * p[s] for s in range(1, len(p))] or [0]


def _neg_prem(a, b):
    """Negated remainder of ``a`` by ``b``, scaled by a positive integer and made primitive."""
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    while any(a) and len(a) - 1 >= db:
        shift = len(a) - 1 - db
        f = a[-1] * lb
        # lb**2 > 0 keeps the sign of the true remainder
        a = [c * lb * lb for c in a]
        for s, c in enumerate(b):
            a[s + shift] -= f * c
        a = _trim(a)
    return _primitive([-c for c in a])


def sturm_sequence(coeffs) -> list[list[int]]:
    p0 = _trim(list(coeffs))
    seq = [p0, _primitive(_trim(_derivative(p0)))]
    while len(seq[-1]) > 1:
        r = _neg_prem(seq[-2], seq[-1])
        if not any(r):
            break
        seq.append(r)
    return seq


def _variations(seq, x: Fraction) -> int:
    signs = [_sign_at(p, x) for p in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(coeffs, lo: Fraction, hi: Fraction, seq=None) -> int:
    """Number of distinct real roots in ``(lo, hi]`` by Sturm's theorem."""
    seq = seq or sturm_sequence(coeffs)
    return _variations(seq, Fraction(lo)) - _variations(seq, Fraction(hi))


@dataclass(frozen=True)
class RootSet:
    """The ``m - 1`` roots of ``E_{2m-2}`` in (-1, 0), ascending.

    ``enclosures[k]`` is a rational interval ``(a, b)`` with ``b - a <= width``
    across which ``E_{2m-2}`` changes sign; ``roots[k]`` is its midpoint.
    """

    m: int
    roots: tuple
    enclosures: tuple[tuple[Fraction, Fraction], ...]
    width: Fraction
    precision: int

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def polynomial(self) -> EFPolynomial:
        return ef_by_recurrence(2 * self.m - 2)

    @property
    def decay_ratio(self):
        """Largest ``|q_k|``, the geometric decay rate of every boundary layer."""
        with mpmath.workprec(self.precision):
            return max((abs(q) for q in self.roots), default=mpmath.mpf(0))


def _bisect_to_width(poly: EFPolynomial, lo: Fraction, hi: Fraction, width: Fraction):
    s_lo = poly.sign_at(lo)
    if s_lo * poly.sign_at(hi) >= 0:
        raise ArithmeticError("no strict sign change across isolating interval")
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = poly.sign_at(mid)
        if s == 0:
            return mid, mid
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


@lru_cache(maxsize=64)
def isolate_roots(m: int, precision: int = DEFAULT_PRECISION) -> RootSet:
    """Certified roots of ``E_{2m-2}`` lying in (-1, 0), enclosed to ``2**-precision``.

    Roots are isolated with a Sturm sequence over the integers and refined by
    bisection; every sign decision is exact.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if precision < 2:
        raise ValueError("precision must be at least 2 bits")
    width = Fraction(1, 2**precision)
    if m == 1:
        return RootSet(1, (), (), width, precision)
    poly = ef_by_recurrence(2 * m - 2)
    seq = sturm_sequence(poly.coefficients)
    lo, hi = Fraction(-1), Fraction(0)
    expected = m - 1
    total = count_roots(poly.coefficients, lo, hi, seq)
    if total != expected:
        raise ArithmeticError(f"found {total} roots in (-1, 0), expected {expected}")

    isolated = []
    stack = [(lo, hi, total)]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            isolated.append((a, b))
            continue
        mid = (a + b) / 2
        n_left = count_roots(poly.coefficients, a, mid, seq)
        stack.append((a, mid, n_left))
        stack.append((mid, b, n - n_left))
    isolated.sort()

    # roots of E_k in (-1, 0) are irrational, so no dyadic endpoint is ever a root
    enclosures = [_bisect_to_width(poly, a, b, width) for a, b in isolated]
    with mpmath.workprec(precision):
        roots = tuple(to_mpf((a + b) / 2) for a, b in enclosures)
    if len(roots) != expected or not all(-1 < q < 0 for q in roots):
        raise ArithmeticError("root isolation produced an invalid root set")
    return RootSet(m, roots, tuple(enclosures), width, precision)


def ef_roots(k: int, precision: int = DEFAULT_PRECISION) -> RootSet:
    """Roots of ``E_k`` in (-1, 0) for even ``k``."""
    if k % 2:
        raise ValueError("roots are tabulated for even degree only")
    return isolate_roots(k // 2 + 1, precision)


def reciprocal_residuals(rootset: RootSet) -> list:
    """``|E(1/q)| / |a_k (1/q)^k|`` for each root; small iff ``1/q`` is also a root."""
    poly = rootset.polynomial
    out = []
    with mpmath.workprec(rootset.precision):
        for q in rootset.roots:
            x = 1 / q
            lead = abs(poly.coefficients[-1] * x**poly.degree)
            out.append(abs(poly(x)) / lead)
    return out


def coefficient_sum_identity(k: int) -> bool:
    """``E_k(1) = (k + 1)!``."""
    return sum(ef_by_recurrence(k).coefficients) == factorial(k + 1)

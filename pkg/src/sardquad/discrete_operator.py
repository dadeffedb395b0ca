"""Discrete analogue of ``d^{2m}/dx^{2m}`` on the grid ``h Z`` and its identities.

The operator is evaluated from its closed form,

    D_m[b] = (2m-1)!/h^{2m} * { sum_k c_k q_k^|b|            |b| >= 2
                               { 1 + sum_k c_k q_k            |b| = 1
                               { -2^{2m-1} + sum_k c_k        b = 0

with ``c_k = (1 - q_k)^{2m+1} / (q_k E_{2m-1}(q_k))`` and ``q_k`` the roots of
``E_{2m-2}`` in (-1, 0). The bracketed, h-free part is called the *stencil*.

Identities over all of Z are checked by truncated sums. The truncation point
is chosen so that a rigorous geometric tail bound drops below
``2**-precision``, and that bound is reported next to every truncated sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath

from .euler_frobenius import RootSet, ef_by_recurrence, isolate_roots
from .numerics import DEFAULT_PRECISION, bernoulli, geometric_power_series, to_mpf


def g_kernel(m: int, x) -> Fraction:
    """Fundamental solution ``x^{2m-1} sign(x) / (2 (2m-1)!)``, i.e. ``|x|^{2m-1}/(2(2m-1)!)``."""
    x = Fraction(x)
    return abs(x) ** (2 * m - 1) / (2 * factorial(2 * m - 1))


def f_rhs(m: int, x) -> Fraction:
    """Right-hand side ``(x^{2m} + (1-x)^{2m}) / (2 (2m)!)`` on [0, 1]."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    return (x ** (2 * m) + (1 - x) ** (2 * m)) / (2 * factorial(2 * m))


@dataclass(frozen=True)
class DiscreteSignal:
    """Finitely supported function of an integer argument, zero outside ``[lo, hi]``."""

    lo: int
    values: tuple

    @property
    def hi(self) -> int:
        return self.lo + len(self.values) - 1

    def __getitem__(self, beta: int):
        if self.lo <= beta <= self.hi:
            return self.values[beta - self.lo]
        return 0

    def __len__(self):
        return len(self.values)

    @classmethod
    def delta(cls) -> "DiscreteSignal":
        return cls(0, (1,))


def convolve(a: DiscreteSignal, b: DiscreteSignal) -> DiscreteSignal:
    """``(a * b)[beta] = sum_g a[g] b[beta - g]`` on the Minkowski sum of the supports."""
    if not len(a) or not len(b):
        return DiscreteSignal(a.lo + b.lo, ())
    out = [0 * a.values[0] * b.values[0]] * (len(a) + len(b) - 1)
    for i, x in enumerate(a.values):
        for j, y in enumerate(b.values):
            out[i + j] = out[i + j] + x * y
    return DiscreteSignal(a.lo + b.lo, tuple(out))


@dataclass(frozen=True)
class DiscreteOperator:
    m: int
    h: Fraction
    roots: RootSet
    ef_values: tuple  # E_{2m-1}(q_k)
    numerators: tuple  # (1 - q_k)^{2m+1}
    coefficients: tuple  # c_k
    precision: int

    @classmethod
    def build(cls, m: int, h=Fraction(1), precision: int = DEFAULT_PRECISION) -> "DiscreteOperator":
        if m < 1:
            raise ValueError("m must be >= 1")
        h = Fraction(h)
        if h <= 0:
            raise ValueError("h must be positive")
        roots = isolate_roots(m, precision)
        odd = ef_by_recurrence(2 * m - 1)
        with mpmath.workprec(precision):
            ef_values = tuple(odd(q) for q in roots)
            numerators = tuple((1 - q) ** (2 * m + 1) for q in roots)
            coefficients = tuple(n / (q * e) for n, q, e in zip(numerators, roots, ef_values))
        return cls(m, h, roots, ef_values, numerators, coefficients, precision)

    @property
    def scale(self) -> Fraction:
        """Exact prefactor ``(2m-1)! / h^{2m}``."""
        return Fraction(factorial(2 * self.m - 1)) / self.h ** (2 * self.m)

    @property
    def decay_ratio(self):
        return self.roots.decay_ratio

    def stencil(self, beta: int):
        """h-free value ``D_m[beta] h^{2m} / (2m-1)!``."""
        b = abs(beta)
        m = self.m
        with mpmath.workprec(self.precision):
            if b >= 2:
                return mpmath.fsum(c * q**b for c, q in zip(self.coefficients, self.roots.roots))
            if b == 1:
                return 1 + mpmath.fsum(n / e for n, e in zip(self.numerators, self.ef_values))
            return -(2 ** (2 * m - 1)) + mpmath.fsum(self.coefficients)

    def tail_amplitude(self):
        """``A`` with ``|stencil(b)| <= A rho^|b|`` for ``|b| >= 2``."""
        with mpmath.workprec(self.precision):
            return mpmath.fsum(abs(c) for c in self.coefficients)


def dm_value(op: DiscreteOperator, beta: int):
    """``D_m[beta]`` at the operator's working precision."""
    with mpmath.workprec(op.precision):
        return to_mpf(op.scale) * op.stencil(beta)


def stencil_window(op: DiscreteOperator, window: int) -> DiscreteSignal:
    """``D_m[beta]`` for ``|beta| <= window``."""
    return DiscreteSignal(-window, tuple(dm_value(op, b) for b in range(-window, window + 1)))


def geometric_tail_bound(rho, power: int, start: int, shift: int = 0):
    """Upper bound for ``sum_{n > start} rho^n (n + shift)^power`` (``0 <= rho < 1``)."""
    if rho == 0:
        return mpmath.mpf(0)
    n0 = start + 1
    ratio = rho * (1 + mpmath.mpf(1) / (n0 + shift)) ** power
    if ratio >= 1:
        return mpmath.inf
    return rho**n0 * mpmath.mpf(n0 + shift) ** power / (1 - ratio)


def truncation_point(op: DiscreteOperator, power: int, minimum: int = 2, shift: int = 0, weight=1) -> int:
    """Smallest ``T >= minimum`` whose tail bound ``weight * A * tail`` is below ``2**-precision``."""
    with mpmath.workprec(op.precision):
        rho = op.decay_ratio
        amp = op.tail_amplitude() * to_mpf(weight)
        eps = mpmath.mpf(2) ** (-op.precision)
        if rho == 0 or amp == 0:
            return minimum
        T = max(minimum, 2)
        step = 16
        while amp * geometric_tail_bound(rho, power, T, shift) >= eps:
            T += step
        # back off to the smallest passing T
        while T - 1 >= max(minimum, 2) and amp * geometric_tail_bound(rho, power, T - 1, shift) < eps:
            T -= 1
        return T


def operator_moment(op: DiscreteOperator, k: int, reach: int | None = None):
    """Truncated ``sum_beta D_m[beta] (h beta)^k`` and its tail bound.

    Returns ``(value, tail_bound)``; the infinite sum lies within
    ``tail_bound`` of ``value`` up to rounding.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    factor = Fraction(factorial(2 * op.m - 1)) * op.h ** (k - 2 * op.m)
    T = reach if reach is not None else truncation_point(op, k, weight=2 * abs(factor))
    with mpmath.workprec(op.precision + 32):
        terms = [op.stencil(b) * mpmath.mpf(b) ** k for b in range(-T, T + 1)]
        total = mpmath.fsum(terms)
    with mpmath.workprec(op.precision):
        f = to_mpf(factor)
        value = f * total
        tail = 2 * abs(f) * op.tail_amplitude() * geometric_tail_bound(op.decay_ratio, k, T)
    return value, tail


def expected_operator_moment(m: int, h, k: int) -> Fraction | None:
    """Known values of ``sum_beta D_m[beta] (h beta)^k`` for ``0 <= k <= 4m``; ``None`` beyond."""
    h = Fraction(h)
    if 0 <= k <= 2 * m - 1 or 2 * m + 1 <= k <= 4 * m - 1:
        return Fraction(0)
    if k == 2 * m:
        return Fraction(factorial(2 * m))
    if k == 4 * m:
        return h ** (2 * m) * factorial(4 * m) * bernoulli(2 * m) / factorial(2 * m)
    return None


def moment_residuals(op: DiscreteOperator) -> list:
    """``|truncated moment - known value| + tail bound`` for ``k = 0 .. 4m``."""
    out = []
    for k in range(4 * op.m + 1):
        value, tail = operator_moment(op, k)
        with mpmath.workprec(op.precision):
            out.append(abs(value - to_mpf(expected_operator_moment(op.m, op.h, k))) + tail)
    return out


def second_moment_closed_form(op: DiscreteOperator):
    """``sum_beta D_m[beta] (h beta)^{2m}`` summed in closed form, with no truncation.

    Uses the symmetry of the stencil and the geometric power series
    ``sum_{b>=1} q^b b^{2m}`` so it is independent of :func:`operator_moment`.
    """
    m = op.m
    with mpmath.workprec(op.precision):
        inner = mpmath.fsum(
            c * geometric_power_series(q, 2 * m) for c, q in zip(op.coefficients, op.roots.roots)
        )
        return 2 * factorial(2 * m - 1) * (inner + 1)


def verify_inverse(op: DiscreteOperator, window: int, reach: int | None = None):
    """Max over ``|beta| <= window`` of ``|h (D_m * G_{m,1})[beta] - delta[beta]|``.

    The convolution runs over ``|gamma| <= T``; by default ``T`` is the
    smallest reach (at least ``window + 2m``) whose tail bound is below
    ``2**-precision``. The returned value includes that tail bound.
    """
    m = op.m
    if window < 2 * m:
        raise ValueError("window must be at least 2m")
    T = reach if reach is not None else truncation_point(op, 2 * m - 1, window + 2 * m, shift=window)
    stencil = {g: op.stencil(g) for g in range(0, T + 1)}
    hs = op.h * op.scale
    worst = mpmath.mpf(0)
    with mpmath.workprec(op.precision + 32):
        for beta in range(-window, window + 1):
            terms = []
            for g in range(-T, T + 1):
                # h * (2m-1)!/h^{2m} * G(h(beta-g)) is exact: |beta-g|^{2m-1}/2
                w = hs * g_kernel(m, op.h * (beta - g))
                if w:
                    terms.append(stencil[abs(g)] * to_mpf(w))
            r = mpmath.fsum(terms) - (1 if beta == 0 else 0)
            worst = max(worst, abs(r))
    with mpmath.workprec(op.precision):
        tail = op.tail_amplitude() * geometric_tail_bound(op.decay_ratio, 2 * m - 1, T, shift=window)
        return +worst + tail

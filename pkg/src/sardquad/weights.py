"""Closed-form optimal weights on the uniform grid ``h * {0, ..., N}``.

    C[0] = C[N] = h (1/2 - sum_k d_k (q_k - q_k^N) / (1 - q_k))
    C[b]        = h (1 + sum_k d_k (q_k^b + q_k^{N-b})),   1 <= b <= N-1

where ``d_1 .. d_{m-1}`` solve

    sum_k d_k sum_{i=1}^{j} (q_k + (-1)^{i+1} q_k^{N+i}) / (q_k - 1)^{i+1} * D^i 0^j
        = B_{j+1} / (j+1),          j = 1 .. m-1.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .discrete_operator import f_rhs, g_kernel
from .euler_frobenius import RootSet, isolate_roots
from .numerics import DEFAULT_PRECISION, bernoulli, delta_power, to_mpf

log = logging.getLogger(__name__)

MAX_PRECISION = 4096


class SolverError(RuntimeError):
    """The boundary-layer system could not be solved at any allowed precision."""


@dataclass(frozen=True)
class BoundaryLayerSolution:
    m: int
    N: int
    d: tuple
    condition: object  # infinity-norm condition estimate (mpf)
    precision: int


@dataclass(frozen=True)
class QuadratureRule:
    m: int
    N: int
    weights: tuple
    d: tuple
    roots: RootSet
    precision: int

    @property
    def h(self) -> Fraction:
        return Fraction(1, self.N)

    @property
    def nodes(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(b, self.N) for b in range(self.N + 1))

    def __getitem__(self, beta: int):
        if 0 <= beta <= self.N:
            return self.weights[beta]
        return mpmath.mpf(0)

    def as_array(self) -> np.ndarray:
        """Weights rounded to float64."""
        return np.array([float(w) for w in self.weights])


def _check_mN(m: int, N: int):
    if m < 1:
        raise ValueError("m must be >= 1")
    if N < m:
        raise ValueError(f"N must be >= m (got m={m}, N={N})")


def _solve_full_pivot(A, b, tiny):
    """Gaussian elimination with full pivoting on small mpf systems."""
    n = len(b)
    A = [row[:] for row in A]
    b = list(b)
    cols = list(range(n))
    for c in range(n):
        piv_r, piv_c, best = c, c, mpmath.mpf(-1)
        for r in range(c, n):
            for s in range(c, n):
                v = abs(A[r][s])
                if v > best:
                    piv_r, piv_c, best = r, s, v
        if best <= tiny:
            raise ZeroDivisionError("numerically singular")
        A[c], A[piv_r] = A[piv_r], A[c]
        b[c], b[piv_r] = b[piv_r], b[c]
        if piv_c != c:
            for row in A:
                row[c], row[piv_c] = row[piv_c], row[c]
            cols[c], cols[piv_c] = cols[piv_c], cols[c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                for s in range(c, n):
                    A[r][s] -= f * A[c][s]
                b[r] -= f * b[c]
    y = [mpmath.mpf(0)] * n
    for r in range(n - 1, -1, -1):
        acc = b[r] - mpmath.fsum(A[r][s] * y[s] for s in range(r + 1, n))
        y[r] = acc / A[r][r]
    x = [mpmath.mpf(0)] * n
    for pos, col in enumerate(cols):
        x[col] = y[pos]
    return x


def boundary_layer_system(m: int, N: int, roots: RootSet):
    """Matrix and right-hand side of the ``d_k`` system at the roots' precision."""
    with mpmath.workprec(roots.precision):
        A = []
        rhs = []
        for j in range(1, m):
            row = []
            for q in roots.roots:
                row.append(
                    mpmath.fsum(
                        (q + (-1) ** (i + 1) * q ** (N + i)) / (q - 1) ** (i + 1) * delta_power(i, j)
                        for i in range(1, j + 1)
                    )
                )
            A.append(row)
            rhs.append(to_mpf(bernoulli(j + 1) / (j + 1)))
    return A, rhs


def _inf_norm(A):
    return max((mpmath.fsum(abs(v) for v in row) for row in A), default=mpmath.mpf(0))


def solve_boundary_layer(
    m: int, N: int, roots: RootSet | None = None, precision: int = DEFAULT_PRECISION
) -> BoundaryLayerSolution:
    """Solve for ``d_1 .. d_{m-1}``.

    A numerically singular system is retried at doubled precision (roots are
    re-isolated) up to ``MAX_PRECISION`` bits before :class:`SolverError`.
    """
    _check_mN(m, N)
    if m == 1:
        return BoundaryLayerSolution(m, N, (), mpmath.mpf(1), precision)
    prec = precision
    while True:
        if roots is None or roots.precision != prec or roots.m != m:
            roots = isolate_roots(m, prec)
        A, rhs = boundary_layer_system(m, N, roots)
        with mpmath.workprec(prec):
            tiny = _inf_norm(A) * mpmath.mpf(2) ** (-(prec // 2))
            try:
                d = _solve_full_pivot(A, rhs, tiny)
                inv = mpmath.inverse(mpmath.matrix(A))
                cond = _inf_norm(A) * _inf_norm(inv.tolist())
                return BoundaryLayerSolution(m, N, tuple(d), cond, prec)
            except ZeroDivisionError:
                pass
        if prec * 2 > MAX_PRECISION:
            raise SolverError(f"boundary-layer system singular for m={m}, N={N} up to {prec} bits")
        log.warning("singular d_k system at %d bits, retrying at %d", prec, prec * 2)
        prec *= 2
        roots = None


def build_rule(m: int, N: int, precision: int = DEFAULT_PRECISION) -> QuadratureRule:
    """Optimal weights ``C[0..N]`` for the space with ``m`` square-integrable derivatives."""
    _check_mN(m, N)
    roots = isolate_roots(m, precision)
    sol = solve_boundary_layer(m, N, roots, precision)
    if sol.precision != precision:
        roots = isolate_roots(m, sol.precision)
    prec = sol.precision
    pairs = list(zip(sol.d, roots.roots))
    with mpmath.workprec(prec):
        h = to_mpf(Fraction(1, N))
        half = mpmath.mpf(1) / 2
        end = h * (half - mpmath.fsum(d * (q - q**N) / (1 - q) for d, q in pairs))
        weights = [None] * (N + 1)
        weights[0] = weights[N] = end
        # each interior weight and its mirror share one evaluation
        for b in range(1, N // 2 + 1):
            w = h * (1 + mpmath.fsum(d * (q**b + q ** (N - b)) for d, q in pairs))
            weights[b] = weights[N - b] = w
    return QuadratureRule(m, N, tuple(weights), sol.d, roots, prec)


def validate_moments(rule: QuadratureRule) -> list:
    """``|sum_b C[b] (h b)^a - 1/(a+1)|`` for ``a = 0 .. m-1``."""
    out = []
    with mpmath.workprec(rule.precision):
        for a in range(rule.m):
            s = mpmath.fsum(w * to_mpf(x**a) for w, x in zip(rule.weights, rule.nodes))
            out.append(abs(s - to_mpf(Fraction(1, a + 1))))
    return out


def forward_difference(values, order: int) -> list:
    vals = list(values)
    for _ in range(order):
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return vals


def optimality_residual(rule: QuadratureRule, weights=None):
    """Max of ``|D^m (f_m - G * C)[b]| / h^{2m}`` over the grid.

    ``f_m - G * C`` must be a polynomial of degree ``< m`` in the node for an
    optimal rule, so its ``m``-th forward differences vanish. Dividing by
    ``h^{2m}`` expresses the residual in grid units (weights ``C/h``, integer
    kernel arguments), which keeps it comparable across ``N``.
    """
    m, N = rule.m, rule.N
    if N < 2 * m:
        raise ValueError("optimality residual needs N >= 2m")
    C = rule.weights if weights is None else tuple(weights)
    h = rule.h
    kern = [g_kernel(m, h * d) for d in range(N + 1)]
    with mpmath.workprec(rule.precision + 32):
        kern_f = [to_mpf(k) for k in kern]
        r = []
        for b in range(N + 1):
            g = mpmath.fsum(C[c] * kern_f[abs(b - c)] for c in range(N + 1))
            r.append(to_mpf(f_rhs(m, h * b)) - g)
        diffs = forward_difference(r, m)
        scale = to_mpf(Fraction(N) ** (2 * m))
        worst = max(abs(v) for v in diffs) * scale
    with mpmath.workprec(rule.precision):
        return +worst

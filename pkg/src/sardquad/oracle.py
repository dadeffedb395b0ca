"""Exact-rational solution of Sobolev's system for the optimal weights.

Unknowns are the weights ``C[0..N]`` and multipliers ``lambda_0..lambda_{m-1}``:

    sum_g C[g] |hb - hg|^{2m-1} / (2 (2m-1)!) + sum_a lambda_a (hb)^a
        = ((hb)^{2m} + (1 - hb)^{2m}) / (2 (2m)!),        b = 0..N
    sum_g C[g] (hg)^a = 1 / (a + 1),                       a = 0..m-1

The system is rescaled to integer entries and solved with fraction-free
(Bareiss) elimination, then checked by substitution in exact arithmetic.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from pathlib import Path

import mpmath

from .numerics import to_mpf


class AssemblyError(RuntimeError):
    """The assembled system is singular or its solution fails substitution."""


@dataclass(frozen=True)
class OracleSolution:
    m: int
    N: int
    weights: tuple[Fraction, ...]
    multipliers: tuple[Fraction, ...]

    @property
    def h(self) -> Fraction:
        return Fraction(1, self.N)


def _integer_system(m: int, N: int) -> list[list[int]]:
    # unknowns x_g = N C[g] and y_a = 2 (2m)! N^(2m-a) lambda_a
    rows = []
    for b in range(N + 1):
        row = [2 * m * abs(b - g) ** (2 * m - 1) for g in range(N + 1)]
        row += [b**a for a in range(m)]
        row.append(b ** (2 * m) + (N - b) ** (2 * m))
        rows.append(row)
    for a in range(m):
        row = [(a + 1) * g**a for g in range(N + 1)] + [0] * m
        row.append(N ** (a + 1))
        rows.append(row)
    return rows


def bareiss_solve(aug: list[list[int]]) -> list[Fraction]:
    """Solve an integer system given as an augmented ``n x (n+1)`` matrix."""
    n = len(aug)
    A = [list(r) for r in aug]
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                raise AssemblyError(f"zero pivot column {k}")
            A[k], A[swap] = A[swap], A[k]
        pivot = A[k][k]
        row_k = A[k]
        for i in range(k + 1, n):
            row_i = A[i]
            a_ik = row_i[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pivot - a_ik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    if A[n - 1][n - 1] == 0:
        raise AssemblyError("singular system")
    x: list[Fraction] = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = A[i][n] - sum(A[i][j] * x[j] for j in range(i + 1, n))
        x[i] = Fraction(s) / A[i][i]
    return x


def residuals(m: int, N: int, weights, multipliers) -> list[Fraction]:
    """Exact residuals of every equation of the system, rows then moments."""
    h = Fraction(1, N)
    k1 = 2 * factorial(2 * m - 1)
    k2 = 2 * factorial(2 * m)
    out = []
    for b in range(N + 1):
        x = h * b
        lhs = sum(c * abs(x - h * g) ** (2 * m - 1) for g, c in enumerate(weights)) / k1
        lhs += sum(lam * x**a for a, lam in enumerate(multipliers))
        out.append(lhs - (x ** (2 * m) + (1 - x) ** (2 * m)) / k2)
    for a in range(m):
        out.append(sum(c * (h * g) ** a for g, c in enumerate(weights)) - Fraction(1, a + 1))
    return out


def solve_sobolev_system(m: int, N: int) -> OracleSolution:
    if m < 1:
        raise ValueError("m must be >= 1")
    if N < m:
        raise ValueError(f"N must be >= m (got m={m}, N={N})")
    x = bareiss_solve(_integer_system(m, N))
    weights = tuple(v / N for v in x[: N + 1])
    multipliers = tuple(
        v / (2 * factorial(2 * m) * N ** (2 * m - a)) for a, v in enumerate(x[N + 1 :])
    )
    if any(residuals(m, N, weights, multipliers)):
        raise AssemblyError(f"oracle solution fails substitution for m={m}, N={N}")
    return OracleSolution(m, N, weights, multipliers)


def compare(rule, oracle: OracleSolution):
    """``max_b |C[b] - C_oracle[b]| / h`` at the rule's precision."""
    if (rule.m, rule.N) != (oracle.m, oracle.N) or len(rule.weights) != len(oracle.weights):
        raise ValueError(
            f"dimension mismatch: rule (m={rule.m}, N={rule.N}) vs oracle (m={oracle.m}, N={oracle.N})"
        )
    with mpmath.workprec(rule.precision):
        return max(abs(w - to_mpf(c)) for w, c in zip(rule.weights, oracle.weights)) * rule.N


# -- golden files -------------------------------------------------------------


def _pair(x: Fraction) -> list[str]:
    return [str(x.numerator), str(x.denominator)]


def to_json(sol: OracleSolution) -> dict:
    return {
        "m": sol.m,
        "N": sol.N,
        "weights": [_pair(w) for w in sol.weights],
        "multipliers": [_pair(v) for v in sol.multipliers],
    }


def from_json(data: dict) -> OracleSolution:
    def frac(p):
        return Fraction(int(p[0]), int(p[1]))

    return OracleSolution(
        int(data["m"]),
        int(data["N"]),
        tuple(frac(p) for p in data["weights"]),
        tuple(frac(p) for p in data.get("multipliers", [])),
    )


def golden_name(m: int, N: int) -> str:
    return f"m{m}_N{N}.json"


def atomic_write_text(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_golden(sol: OracleSolution, path):
    atomic_write_text(path, json.dumps(to_json(sol), separators=(",", ":")) + "\n")


def load_golden(path) -> OracleSolution:
    with open(path, encoding="utf-8") as fh:
        return from_json(json.load(fh))


def write_golden_grid(directory, ms=range(1, 6), n_max: int = 50) -> int:
    """Write one golden file per ``(m, N)`` with ``m <= N <= n_max``; returns the count."""
    count = 0
    for m in ms:
        for N in range(m, n_max + 1):
            save_golden(solve_sobolev_system(m, N), Path(directory) / golden_name(m, N))
            count += 1
    return count

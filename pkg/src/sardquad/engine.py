"""Apply rules to integrands, convergence studies and classical baselines."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .numerics import DEFAULT_PRECISION
from .oracle import atomic_write_text
from .weights import QuadratureRule, build_rule


@dataclass(frozen=True)
class Integrand:
    name: str
    func: Callable[[np.ndarray], np.ndarray]
    exact: float | Fraction | None = None


def _monomial(k: int) -> Integrand:
    return Integrand(f"poly{k}", lambda x, k=k: np.asarray(x, dtype=float) ** k, Fraction(1, k + 1))


CORPUS: dict[str, Integrand] = {
    **{f"poly{k}": _monomial(k) for k in range(9)},
    "exp": Integrand("exp", np.exp, math.e - 1),
    "sin_pi": Integrand("sin_pi", lambda x: np.sin(np.pi * x), 2 / math.pi),
    "inv1p": Integrand("inv1p", lambda x: 1 / (1 + np.asarray(x, dtype=float)), math.log(2)),
}


def smooth_family() -> list[Integrand]:
    """Twenty smooth test functions on [0, 1] with closed-form integrals."""
    fam = []
    for a in (0.5, 1.0, 2.0, 3.0, -1.0):
        fam.append(Integrand(f"exp({a}x)", lambda x, a=a: np.exp(a * x), (math.exp(a) - 1) / a))
    for w in (1.0, 2.0, 3.0, 5.0, 0.5):
        fam.append(Integrand(f"cos({w}x)", lambda x, w=w: np.cos(w * x), math.sin(w) / w))
    for c in (0.5, 1.0, 2.0, 4.0, 9.0):
        fam.append(Integrand(f"1/(1+{c}x)", lambda x, c=c: 1 / (1 + c * x), math.log1p(c) / c))
    for c in (1.0, 2.0, 4.0, 8.0, 0.5):
        fam.append(
            Integrand(f"1/(1+({c}x)^2)", lambda x, c=c: 1 / (1 + (c * x) ** 2), math.atan(c) / c)
        )
    return fam


def get_integrand(name: str) -> Integrand:
    try:
        return CORPUS[name]
    except KeyError:
        raise KeyError(f"unknown integrand {name!r}; choose from {', '.join(CORPUS)}") from None


def apply_weights(weights, N: int, f: Integrand) -> float:
    x = np.arange(N + 1) / N
    return float(np.dot(np.asarray(weights, dtype=float), f.func(x)))


def integrate(rule: QuadratureRule, f: Integrand) -> float:
    """``sum_b C[b] f(h b)`` in double precision."""
    return apply_weights(rule.as_array(), rule.N, f)


def trapezoid_weights(N: int) -> np.ndarray:
    w = np.full(N + 1, 1.0 / N)
    w[0] = w[-1] = 0.5 / N
    return w


def simpson_weights(N: int) -> np.ndarray:
    if N % 2:
        raise ValueError("Simpson's rule needs an even N")
    w = np.ones(N + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return w / (3 * N)


@dataclass
class ConvergenceReport:
    m: int
    integrand: str
    rows: list[tuple[int, float]] = field(default_factory=list)

    @property
    def orders(self) -> list[float]:
        """Observed order between consecutive rows: ``log(e_a/e_b) / log(N_b/N_a)``."""
        out = []
        for (na, ea), (nb, eb) in zip(self.rows, self.rows[1:]):
            if ea > 0 and eb > 0:
                out.append(math.log(ea / eb) / math.log(nb / na))
            else:
                out.append(math.nan)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["N", "error", "observed_order"])
        orders = [None] + self.orders
        for (n, e), p in zip(self.rows, orders):
            writer.writerow([n, repr(float(e)), "" if p is None else f"{p:.6f}"])
        return buf.getvalue()

    def write_csv(self, path):
        atomic_write_text(path, self.to_csv())


def convergence_study(
    m: int, f: Integrand, Ns, precision: int = DEFAULT_PRECISION
) -> ConvergenceReport:
    Ns = list(Ns)
    if f.exact is None:
        raise ValueError(f"integrand {f.name!r} has no known exact integral")
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValueError("N values must be strictly increasing")
    if any(N < max(m, 2) for N in Ns):
        raise ValueError("every N must be >= max(m, 2)")
    exact = float(f.exact)
    report = ConvergenceReport(m, f.name)
    for N in Ns:
        report.rows.append((N, abs(integrate(build_rule(m, N, precision), f) - exact)))
    return report


def baseline_compare(m: int, f: Integrand, N: int, precision: int = DEFAULT_PRECISION) -> dict[str, float]:
    """Absolute errors of the optimal, trapezoid and (even ``N``) Simpson rules."""
    exact = float(f.exact)
    table = {
        "optimal": abs(integrate(build_rule(m, N, precision), f) - exact),
        "trapezoid": abs(apply_weights(trapezoid_weights(N), N, f) - exact),
    }
    if N % 2 == 0:
        table["simpson"] = abs(apply_weights(simpson_weights(N), N, f) - exact)
    return table

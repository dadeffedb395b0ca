"""
Euler-Frobenius polynomials and their negative roots
=====================================================
"""
from sardquad.euler_frobenius import (
    ef_by_euler_formula,
    ef_by_finite_differences,
    ef_by_recurrence,
    isolate_roots,
)
import mpmath

# three independent constructions give the same integer coefficients
for k in range(7):
    p = ef_by_recurrence(k)
    same = p == ef_by_euler_formula(k) == ef_by_finite_differences(k)
    print(k, p.coefficients, "agree" if same else "DISAGREE")

# E_{2m-2} has m-1 simple roots in (-1, 0); each one comes with a rational
# enclosure whose endpoints were sign-checked in exact arithmetic
for m in (2, 3, 5):
    rs = isolate_roots(m, precision=128)
    print(f"m={m}:", [mpmath.nstr(q, 20) for q in rs.roots])

rs = isolate_roots(2, precision=256)
with mpmath.workprec(256):
    print("m=2 root minus (sqrt(3) - 2):", mpmath.nstr(rs.roots[0] - (mpmath.sqrt(3) - 2), 3))

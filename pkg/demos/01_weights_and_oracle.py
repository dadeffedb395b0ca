"""
Optimal weights next to their exact rational counterparts
==========================================================

For m = 1 the optimal rule is the trapezoid rule. For larger m the interior
weights settle to h quickly, and only a boundary layer a few nodes wide differs.
"""
import mpmath

from sardquad import build_rule
from sardquad.oracle import compare, solve_sobolev_system

# m = 1: every weight is exactly h, except h/2 at both ends
rule = build_rule(1, 8)
print("m=1, N=8 :", [mpmath.nstr(w * 8, 6) for w in rule.weights])

# m = 3: the weights in units of h show the boundary layer
rule = build_rule(3, 20)
print("m=3, N=20:", [mpmath.nstr(w * 20, 8) for w in rule.weights[:6]], "...")

# the same weights from an exact rational solve of the full linear system
oracle = solve_sobolev_system(3, 20)
print("first oracle weight:", oracle.weights[0])
print("max |C - C_exact| / h =", mpmath.nstr(compare(rule, oracle), 5))

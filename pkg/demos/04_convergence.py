"""
Convergence against classical rules
===================================
"""
from sardquad.engine import CORPUS, baseline_compare, convergence_study

f = CORPUS["exp"]
for m in (1, 2, 3):
    report = convergence_study(m, f, [4, 8, 16, 32, 64])
    print(f"m={m}")
    print(report.to_csv())

# at a fixed N, compare the optimal rule with trapezoid and Simpson
for m in (1, 2, 3, 4):
    errs = baseline_compare(m, CORPUS["sin_pi"], 16)
    print(m, {k: f"{v:.3e}" for k, v in errs.items()})

"""
The discrete operator D_m
=========================

D_m is the grid analogue of the 2m-th derivative. It is the convolution
inverse of the kernel |x|^{2m-1} / (2 (2m-1)!) sampled on hZ.
"""
from fractions import Fraction

import mpmath

from sardquad.discrete_operator import (
    DiscreteOperator,
    moment_residuals,
    stencil_window,
    verify_inverse,
)

op = DiscreteOperator.build(2, Fraction(1, 10))
window = stencil_window(op, 6)
for beta, v in zip(range(window.lo, window.hi + 1), window.values):
    print(f"D_2[{beta:+d}] = {mpmath.nstr(v, 15)}")

# the stencil decays like |q|^|beta|
print("decay ratio:", mpmath.nstr(op.decay_ratio, 10))

# moments up to 4m against their known values (tail bound included)
print("worst moment residual:", mpmath.nstr(max(moment_residuals(op)), 3))

# h D_m * G = delta on a window of 20 nodes around the origin
for m in range(1, 5):
    r = verify_inverse(DiscreteOperator.build(m, Fraction(1, 10)), 20)
    print(f"m={m}: inverse residual {mpmath.nstr(r, 3)}")

"""Sard-optimal quadrature on uniform grids for the Sobolev space L2^(m)(0,1)."""
from .discrete_operator import DiscreteOperator, DiscreteSignal, convolve, dm_value, f_rhs, g_kernel, verify_inverse
from .engine import CORPUS, Integrand, baseline_compare, convergence_study, integrate
from .euler_frobenius import (
    EFPolynomial,
    RootSet,
    ef_by_euler_formula,
    ef_by_finite_differences,
    ef_by_recurrence,
    isolate_roots,
)
from .numerics import bernoulli, delta_power, geometric_power_sum, power_sum
from .oracle import OracleSolution, compare, solve_sobolev_system
from .weights import QuadratureRule, build_rule, optimality_residual, solve_boundary_layer, validate_moments

__version__ = "0.1.0"

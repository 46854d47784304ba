"""Numerical verification of critical (logarithmic) Hardy inequalities on the 2-sphere."""
from .errors import (ConditioningError, DivergentNorm, DomainError, ModeError,
                     NoConvergence, NotPositiveDefinite)
from .quadrature import QuadratureResult, QuadratureSpec, integrate, integrate_log_sub
from .spherefn import SphereFunction, grad_norm_sq, grad_theta_sq, l2_norm_sq
from .weights import WeightKind, const_a, const_b, evaluate, sup_abs

__version__ = "0.1.0"

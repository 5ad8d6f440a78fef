"""Uniform Airy-type asymptotics of orthogonal polynomials from their recurrence.

Modules:
    numerics    extended-exponent reals, Airy functions, adaptive quadrature
    recurrence  overflow-free three-term recurrences, zeros, Gauss rules
    langer      Langer variables, Airy approximants and their residuals
    field       external field, equilibrium measures, outer WKB, kappa constants
    families    six classical families with closed-form asymptotics
    cli         command-line harness (python -m artifact)
"""

from .numerics import DomainError, NonConvergenceError, ScaledReal, airy, airy_zero
from .recurrence import RecurrenceCoefficients, orthonormal_value, polynomial_zeros
from .langer import CoefficientModel
from .families import FamilySpec, make_family

__all__ = [
    "DomainError",
    "NonConvergenceError",
    "ScaledReal",
    "airy",
    "airy_zero",
    "RecurrenceCoefficients",
    "orthonormal_value",
    "polynomial_zeros",
    "CoefficientModel",
    "FamilySpec",
    "make_family",
]

__version__ = "0.1.0"

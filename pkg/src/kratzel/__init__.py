"""Numerical evaluation of the Krätzel function Z_rho^nu(u) and checks of its inequalities."""

from .core import (
    AsymptoticParams,
    KratzelParams,
    asymptotic_large_u,
    asymptotic_params,
    asymptotic_small_u,
    derivative,
    evaluate,
    evaluate_bessel_form,
    evaluate_laplace_form,
    recurrence_residual,
)
from .errors import EvaluationError, KratzelDomainError
from .quadrature import QuadratureConfig
from .results import EvaluationResult, Method

__version__ = "0.1.0"

__all__ = [
    "AsymptoticParams",
    "EvaluationError",
    "EvaluationResult",
    "KratzelDomainError",
    "KratzelParams",
    "Method",
    "QuadratureConfig",
    "asymptotic_large_u",
    "asymptotic_params",
    "asymptotic_small_u",
    "derivative",
    "evaluate",
    "evaluate_bessel_form",
    "evaluate_laplace_form",
    "recurrence_residual",
]

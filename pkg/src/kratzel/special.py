"""Log-gamma and the modified Bessel function of the second kind.

``K_nu`` is obtained from its integral representation

    K_nu(x) = x^nu / 2^(nu+1) * ∫_0^∞ t^(-nu-1) exp(-t - x^2/(4t)) dt

under ``t = e^s``, so it never routes through the Krätzel evaluator and the
Bessel closed form of ``Z_1^nu`` stays an independent cross-check.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import KratzelDomainError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_log_scale
from .results import EvaluationResult, Method

__all__ = ["ln_gamma", "gamma", "bessel_k", "log_bessel_k", "bessel_k_scaled", "reduced_bessel"]

# Stirling series coefficients B_2k / (2k (2k-1)), k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN = 10.0
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_SQRT_2PI = math.sqrt(2 * math.pi)


def _stirling_correction(x):
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    return acc * inv


def ln_gamma(x: float) -> float:
    """Natural log of Γ(x) for x > 0."""
    if not x > 0:
        raise KratzelDomainError(f"ln_gamma requires x > 0, got {x!r}")
    log_shift = 0.0
    if x < _STIRLING_MIN:
        prod = 1.0
        while x < _STIRLING_MIN:
            prod *= x
            x += 1.0
        log_shift = -math.log(prod)
    corr = _stirling_correction(x)
    if x <= 171.0:
        # split power avoids overflow; linear scale keeps the error at a few ulp,
        # where log scale would multiply the rounding error of log(x) by x
        half = x ** (0.5 * (x - 0.5))
        return math.log(_SQRT_2PI * half * math.exp(corr - x) * half) + log_shift
    return _HALF_LOG_2PI + (x - 0.5) * math.log(x) - x + corr + log_shift


def gamma(x: float) -> float:
    return math.exp(ln_gamma(x))


def _check_arg(x):
    if not (x > 0 and math.isfinite(x)):
        raise KratzelDomainError(f"Bessel argument must be positive and finite, got {x!r}")


@lru_cache(maxsize=4096)
def _log_k(nu: float, x: float, config: QuadratureConfig):
    c = 0.25 * x * x

    def phi(s):
        with np.errstate(over="ignore"):
            return -nu * s - np.exp(s) - c * np.exp(-s)

    est = integrate_log_scale(phi, config)
    log_k = nu * math.log(x) - (nu + 1.0) * math.log(2.0) + est.log_value
    return log_k, est.abs_error_of_log, est.converged


def log_bessel_k(nu: float, x: float, config: QuadratureConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """``K_nu(x)`` with its logarithm; identical to :func:`bessel_k`."""
    return bessel_k(nu, x, config)


def bessel_k(nu: float, x: float, config: QuadratureConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """Modified Bessel function of the second kind, ``K_nu(x)`` for real ``nu`` and ``x > 0``."""
    _check_arg(x)
    log_k, err, ok = _log_k(float(nu), float(x), config)
    return EvaluationResult.from_log(log_k, err, Method.DIRECT, converged=ok)


def bessel_k_scaled(nu: float, x: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``e^x K_nu(x)``; the exponential shift is applied on log scale so large ``x`` is safe."""
    _check_arg(x)
    log_k, _, _ = _log_k(float(nu), float(x), config)
    return math.exp(log_k + x)


def log_bessel_k_scaled(nu: float, x: float, config: QuadratureConfig = DEFAULT_CONFIG):
    """``(log(e^x K_nu(x)), abs_error_of_log)``."""
    _check_arg(x)
    log_k, err, _ = _log_k(float(nu), float(x), config)
    return log_k + x, err


def reduced_bessel(nu: float, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Reduced Bessel function ``sqrt(2/pi) u^nu K_nu(u)``."""
    _check_arg(u)
    log_k, _, _ = _log_k(float(nu), float(u), config)
    return math.exp(0.5 * math.log(2.0 / math.pi) + nu * math.log(u) + log_k)

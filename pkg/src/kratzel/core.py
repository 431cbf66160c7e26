"""Evaluation of the Krätzel function

    Z_rho^nu(u) = ∫_0^∞ t^(nu-1) exp(-t^rho - u/t) dt,   u > 0,

together with its exact derivatives, the recurrence residual and the two
asymptotic regimes.  Everything is computed on log scale after ``t = e^x``,
which turns the integrand into ``exp(nu*x - e^(rho*x) - u*e^(-x))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import special
from .errors import KratzelDomainError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_log_scale
from .results import EvaluationResult, Method

__all__ = [
    "KratzelParams",
    "AsymptoticParams",
    "evaluate",
    "evaluate_laplace_form",
    "evaluate_bessel_form",
    "derivative",
    "recurrence_residual",
    "asymptotic_params",
    "asymptotic_large_u",
    "asymptotic_small_u",
    "rho_zero_closed_form",
]


@dataclass(frozen=True)
class KratzelParams:
    rho: float
    nu: float

    @property
    def admissible(self) -> bool:
        return is_admissible(self.rho, self.nu)

    def check(self):
        if not (math.isfinite(self.rho) and math.isfinite(self.nu)):
            raise KratzelDomainError("rho and nu must be finite")
        if not self.admissible:
            raise KratzelDomainError(f"nu must be negative when rho <= 0 (rho={self.rho}, nu={self.nu})")
        return self

    def shifted(self, dnu: float) -> "KratzelParams":
        return KratzelParams(self.rho, self.nu + dnu)


def is_admissible(rho: float, nu: float) -> bool:
    """The integral converges iff rho > 0, or rho <= 0 together with nu < 0."""
    return rho > 0 or nu < 0


@dataclass(frozen=True)
class AsymptoticParams:
    alpha: float
    beta: float
    power: float
    tail_exponent: float


def _check_u(u):
    if not (u > 0 and math.isfinite(u)):
        raise KratzelDomainError("u must be positive")


def _as_params(params):
    if isinstance(params, KratzelParams):
        return params.check()
    rho, nu = params
    return KratzelParams(float(rho), float(nu)).check()


@lru_cache(maxsize=65536)
def _log_direct(rho: float, nu: float, u: float, config: QuadratureConfig):
    def phi(x):
        with np.errstate(over="ignore"):
            return nu * x - np.exp(rho * x) - u * np.exp(-x)

    return integrate_log_scale(phi, config)


@lru_cache(maxsize=65536)
def _log_laplace(rho: float, nu: float, u: float, config: QuadratureConfig):
    # s = 1/t turns the integral into the Laplace transform of s^(-nu-1) exp(-s^(-rho));
    # then s = e^y
    def phi(y):
        with np.errstate(over="ignore"):
            return -nu * y - np.exp(-rho * y) - u * np.exp(y)

    return integrate_log_scale(phi, config)


def evaluate(params, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """Z_rho^nu(u) by direct quadrature of the defining integral."""
    p = _as_params(params)
    _check_u(u)
    est = _log_direct(p.rho, p.nu, float(u), config)
    return EvaluationResult.from_log(est.log_value, est.abs_error_of_log, Method.DIRECT,
                                     converged=est.converged)


def evaluate_laplace_form(params, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """Z_rho^nu(u) through its Laplace-transform representation."""
    p = _as_params(params)
    _check_u(u)
    est = _log_laplace(p.rho, p.nu, float(u), config)
    return EvaluationResult.from_log(est.log_value, est.abs_error_of_log, Method.LAPLACE,
                                     converged=est.converged)


def evaluate_bessel_form(nu: float, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """Z_1^nu(u) = 2 u^(nu/2) K_nu(2 sqrt(u)), with K from :mod:`kratzel.special`."""
    _check_u(u)
    k = special.bessel_k(nu, 2.0 * math.sqrt(u), config)
    log_value = math.log(2.0) + 0.5 * nu * math.log(u) + k.log_value
    return EvaluationResult.from_log(log_value, k.abs_error_of_log, Method.BESSEL, converged=k.converged)


def derivative(params, u: float, n: int, config: QuadratureConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """n-th derivative in u, exactly ``(-1)^n Z_rho^(nu-n)(u)``."""
    if n < 0 or int(n) != n:
        raise KratzelDomainError("derivative order must be a non-negative integer")
    p = _as_params(params)
    shifted = KratzelParams(p.rho, p.nu - n)
    if not shifted.admissible:
        raise KratzelDomainError(f"order nu-n={shifted.nu} is not admissible for rho={p.rho}")
    base = evaluate(shifted, u, config)
    sign = -1 if n % 2 else 1
    return EvaluationResult.from_log(base.log_value, base.abs_error_of_log, base.method, sign=sign,
                                     converged=base.converged)


def recurrence_residual(params, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Normalized residual of ``nu Z^nu = rho Z^(nu+rho) - u Z^(nu-1)``."""
    p = _as_params(params)
    _check_u(u)
    z0 = evaluate(p, u, config)
    zp = evaluate(p.shifted(p.rho), u, config)
    zm = evaluate(p.shifted(-1.0), u, config)
    # work relative to the largest term so underflow in linear scale cannot bite
    log_a = math.log(abs(p.rho)) + zp.log_value if p.rho != 0 else -math.inf
    log_b = math.log(u) + zm.log_value
    scale = max(log_a, log_b)
    a = math.exp(log_a - scale) if p.rho != 0 else 0.0
    b = math.exp(log_b - scale)
    c = p.nu * math.exp(z0.log_value - scale)
    return abs(c - math.copysign(a, p.rho) + b) / max(a, b)


def asymptotic_params(rho: float, nu: float) -> AsymptoticParams:
    if not rho > 0:
        raise KratzelDomainError("the large-u expansion requires rho > 0")
    # Laplace's method at the saddle t0 = (u/rho)^(1/(rho+1)); the prefactor carries
    # rho^(-(2nu+1)/(2(rho+1))), without an extra factor of rho
    alpha = math.sqrt(2 * math.pi / (rho + 1)) * rho ** (-(2 * nu + 1) / (2 * (rho + 1)))
    beta = (1 + 1 / rho) * rho ** (1 / (rho + 1))
    return AsymptoticParams(alpha=alpha, beta=beta, power=(2 * nu - rho) / (2 * (rho + 1)),
                            tail_exponent=rho / (rho + 1))


def asymptotic_large_u(params, u: float) -> EvaluationResult:
    """Leading large-u behaviour ``alpha u^power exp(-beta u^(rho/(rho+1)))``; no error bound."""
    p = params if isinstance(params, KratzelParams) else KratzelParams(*map(float, params))
    _check_u(u)
    a = asymptotic_params(p.rho, p.nu)
    log_value = math.log(a.alpha) + a.power * math.log(u) - a.beta * u ** a.tail_exponent
    return EvaluationResult.from_log(log_value, math.nan, Method.ASYMPTOTIC)


def asymptotic_small_u(params) -> float:
    """The u -> 0 limit ``Γ(nu/rho)/rho`` of Z_rho^nu(u), for rho, nu > 0."""
    p = params if isinstance(params, KratzelParams) else KratzelParams(*map(float, params))
    if not (p.rho > 0 and p.nu > 0):
        raise KratzelDomainError("the small-u limit is finite only for rho > 0 and nu > 0")
    return math.exp(special.ln_gamma(p.nu / p.rho)) / p.rho


def rho_zero_closed_form(nu: float, u: float) -> float:
    """Z_0^nu(u) = e^(-1) Γ(-nu) u^nu for nu < 0."""
    if not nu < 0:
        raise KratzelDomainError("rho = 0 requires nu < 0")
    _check_u(u)
    return math.exp(-1.0 + special.ln_gamma(-nu) + nu * math.log(u))

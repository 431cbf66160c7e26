"""Result records shared by the evaluators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Method(str, Enum):
    DIRECT = "direct-quadrature"
    LAPLACE = "laplace-form"
    BESSEL = "bessel-closed-form"
    ASYMPTOTIC = "asymptotic-large-u"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EvaluationResult:
    """A positive (or sign-tagged) quantity carried on log scale.

    ``value`` is ``sign * exp(log_value)`` and may underflow to zero; the
    logarithm is always finite.  ``abs_error_of_log`` is NaN when the method
    carries no error estimate.
    """

    value: float
    log_value: float
    abs_error_of_log: float
    method: Method
    sign: int = 1
    converged: bool = True

    @classmethod
    def from_log(cls, log_value, abs_error_of_log, method, sign=1, converged=True):
        try:
            value = sign * math.exp(log_value)
        except OverflowError:
            value = sign * math.inf
        return cls(value=value, log_value=float(log_value), abs_error_of_log=float(abs_error_of_log),
                   method=Method(method), sign=sign, converged=converged)

    @property
    def rel_error(self):
        """Relative error of ``value`` implied by the log-scale error."""
        return math.expm1(self.abs_error_of_log) if math.isfinite(self.abs_error_of_log) else math.nan

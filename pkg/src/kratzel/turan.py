"""Turán (Hankel) determinants of Krätzel values and complete-monotonicity scans.

The determinant of order n is built from the (n+1)x(n+1) matrix with entries
``Z_rho^(nu + (i+j-1) rho)(u)``.  Because these are moments of a positive
measure the matrix is positive definite; the determinant nonetheless suffers
cancellation when the entries decay fast, so every result carries a
condition estimate and a trustworthiness flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .core import KratzelParams, _as_params, _check_u, evaluate, is_admissible
from .errors import EvaluationError, KratzelDomainError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, find_peak, integrate_square, peak_width

__all__ = [
    "DeterminantResult",
    "MonotonicityReport",
    "hankel_matrix",
    "hankel_log_matrix",
    "turan_determinant",
    "determinant_integral_oracle",
    "complete_monotonicity_scan",
]

TRUST_CONDITION = 1e12
MAX_ORDER = 4


@dataclass(frozen=True)
class DeterminantResult:
    value: float
    n: int
    condition_estimate: float
    trustworthy: bool
    log_abs_value: float = math.nan
    # relative error of value propagated from the entry errors
    rel_error: float = math.nan


@dataclass
class MonotonicityReport:
    orders_checked: int
    step: list
    grid: list
    # sign_ok[i][m] for grid point i and difference order m = 0..orders_checked
    sign_ok: list
    worst_margin: float
    margins: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(all(row) for row in self.sign_ok)

    def failures(self):
        return [(self.grid[i], m) for i, row in enumerate(self.sign_ok) for m, ok in enumerate(row) if not ok]


def _orders(p: KratzelParams, n: int):
    return [p.nu + (k - 1) * p.rho for k in range(2 * n + 1)]


def _check_orders(p, n):
    if n < 1 or int(n) != n:
        raise KratzelDomainError("determinant order n must be a positive integer")
    for k, order in enumerate(_orders(p, n)):
        if not is_admissible(p.rho, order):
            raise KratzelDomainError(f"order nu+{k - 1}*rho = {order} is not admissible for rho={p.rho} (k={k - 1})")


def hankel_log_matrix(params, n: int, u: float, config: QuadratureConfig = DEFAULT_CONFIG):
    """Log-entries and their log-errors for the Hankel matrix of order n."""
    p = _as_params(params)
    _check_u(u)
    _check_orders(p, n)
    entries = [evaluate(KratzelParams(p.rho, order), u, config) for order in _orders(p, n)]
    logs = np.empty((n + 1, n + 1))
    errs = np.empty((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(n + 1):
            logs[i, j] = entries[i + j].log_value
            errs[i, j] = entries[i + j].abs_error_of_log
    return logs, errs


def hankel_matrix(params, n: int, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Matrix ``M[i, j] = Z_rho^(nu + (i+j-1) rho)(u)`` (0-based), symmetric by construction."""
    logs, _ = hankel_log_matrix(params, n, u, config)
    with np.errstate(under="ignore"):
        return np.exp(logs)


def _pivoted_ldl(a):
    """Symmetric LDL^T with diagonal pivoting; returns pivots or None on breakdown."""
    a = np.array(a, dtype=float)
    size = a.shape[0]
    pivots = []
    remaining = list(range(size))
    for _ in range(size):
        k = max(remaining, key=lambda r: a[r, r])
        d = a[k, k]
        if not d > 0:
            return None
        pivots.append(d)
        remaining.remove(k)
        col = a[:, k].copy()
        for r in remaining:
            for c in remaining:
                a[r, c] -= col[r] * col[c] / d
    return pivots


def _cofactor_det(a):
    size = a.shape[0]
    if size == 1:
        return float(a[0, 0])
    total = 0.0
    for j in range(size):
        minor = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        total += (-1) ** j * a[0, j] * _cofactor_det(minor)
    return total


def turan_determinant(params, n: int, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> DeterminantResult:
    """Determinant of the Hankel matrix of order n (n <= 4).

    The matrix is first scaled symmetrically to unit diagonal,
    ``S = D^-1/2 M D^-1/2``, so that ``det M = det S * prod(diag M)``; ``det S``
    comes from a pivoted LDL^T whose pivot spread is the condition estimate.
    """
    if n > MAX_ORDER:
        raise KratzelDomainError(f"determinants are supported for n <= {MAX_ORDER}")
    logs, errs = hankel_log_matrix(params, n, u, config)
    diag = np.diag(logs)
    scaled = np.exp(logs - 0.5 * (diag[:, None] + diag[None, :]))
    entry_err = float(np.max(errs))
    pivots = _pivoted_ldl(scaled)
    if pivots is not None:
        cond = max(pivots) / min(pivots)
        log_det_s = float(np.sum(np.log(pivots)))
        sign = 1.0
        trustworthy = bool(cond < TRUST_CONDITION)
    else:
        det_s = _cofactor_det(scaled)
        cond = math.inf
        trustworthy = False
        sign = math.copysign(1.0, det_s)
        log_det_s = math.log(abs(det_s)) if det_s != 0 else -math.inf
    log_abs = log_det_s + float(np.sum(diag))
    try:
        value = sign * math.exp(log_abs)
    except OverflowError:
        value = sign * math.inf
    # first-order bound: each entry perturbs det S by at most cond * (n+1) * its relative error
    rel_error = (2 * (n + 1) * entry_err + 8 * (n + 1) * np.finfo(float).eps) * max(cond, 1.0)
    return DeterminantResult(value=value, n=n, condition_estimate=float(max(cond, 1.0)),
                             trustworthy=trustworthy, log_abs_value=log_abs, rel_error=float(rel_error))


def determinant_integral_oracle(params, u: float, m: int = 0, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``(-1)^m`` times the m-th u-derivative of the n = 1 determinant, as a double integral.

    The integrand (after ``t = e^x``, ``s = e^y``) is

        1/2 (e^-x + e^-y)^m exp(nu(x+y) - e^(rho x) - e^(rho y) - u(e^-x + e^-y))
            * 4 sinh^2(rho (x - y) / 2)

    which is non-negative everywhere.
    """
    p = _as_params(params)
    _check_u(u)
    _check_orders(p, 1)
    if not 0 <= m <= 3 or int(m) != m:
        raise KratzelDomainError("derivative order m must be in 0..3")
    rho, nu = p.rho, p.nu

    def phi(x):
        with np.errstate(over="ignore"):
            return nu * x - np.exp(rho * x) - u * np.exp(-x)

    x_star, peak = find_peak(phi)
    width = peak_width(phi, x_star, peak)

    def integrand(zx, zy):
        x = x_star + width * zx
        y = x_star + width * zy
        a = np.abs(0.5 * rho * (x - y))
        with np.errstate(over="ignore", under="ignore", divide="ignore"):
            expo = phi(x) + phi(y) - 2 * peak
            if m:
                expo = expo + m * np.logaddexp(-x, -y)
            # log(4 sinh^2 a) without overflow
            log_kernel = 2.0 * (a + np.log1p(-np.exp(-2.0 * a)))
            return 0.5 * width * width * np.exp(expo + log_kernel)

    est = integrate_square(integrand, config)
    if not est.converged:
        raise EvaluationError("double integral did not converge", abscissa=x_star)
    return est.value * math.exp(2 * peak)


def complete_monotonicity_scan(f, grid, m_max: int = 3, h=None) -> MonotonicityReport:
    """Sign table of ``(-1)^m Δ_h^m f(u)`` for m = 0..m_max on each grid point.

    ``h`` is a step or a callable returning the step for a given ``u``
    (default ``0.05 * u``).  A completely monotonic ``f`` gives non-negative
    entries up to the slack ``1e-12 |f(u)| + 1e-300``.
    """
    if h is None:
        step_of = lambda u: 0.05 * u  # noqa: E731
    elif callable(h):
        step_of = h
    else:
        step_of = lambda u: float(h)  # noqa: E731
    steps, sign_ok, margins = [], [], []
    worst = math.inf
    for u in grid:
        hu = step_of(u)
        if not hu > 0:
            raise KratzelDomainError("difference step must be positive")
        vals = []
        for k in range(m_max + 1):
            node = u + k * hu
            try:
                vals.append(float(f(node)))
            except (EvaluationError, KratzelDomainError, ArithmeticError) as exc:
                raise EvaluationError(f"evaluation failed at u={node!r}: {exc}", abscissa=node) from exc
        f0 = vals[0]
        slack = 1e-12 * abs(f0) + 1e-300
        row_ok, row_margin = [], []
        for m in range(m_max + 1):
            diff = math.fsum((-1) ** (m - k) * comb(m, k) * vals[k] for k in range(m + 1))
            signed = (-1) ** m * diff
            row_ok.append(signed >= -slack)
            margin = signed / abs(f0) if f0 != 0 else signed
            row_margin.append(margin)
            worst = min(worst, margin)
        steps.append(hu)
        sign_ok.append(row_ok)
        margins.append(row_margin)
    return MonotonicityReport(orders_checked=m_max, step=steps, grid=list(grid), sign_ok=sign_ok,
                              worst_margin=worst, margins=margins)

"""Grid checks of the identities and inequalities satisfied by Krätzel and Bessel-K functions.

Each ``check_*`` returns an :class:`InequalityReport`.  Inequalities are
oriented as ``lhs <= rhs`` and compared on log scale; the recorded margin is
``(rhs - lhs) / max(|lhs|, |rhs|)`` so a positive margin means the claim
holds.  A point fails only when the margin is below minus the error
propagated from the quadrature estimates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import special
from .core import KratzelParams, derivative, evaluate, evaluate_bessel_form, is_admissible
from .errors import EvaluationError, KratzelDomainError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

__all__ = [
    "GridSpec",
    "PointResult",
    "InequalityReport",
    "ConjectureReport",
    "DEFAULT_GRID",
    "check_turan_logconvexity",
    "check_laguerre",
    "check_tkgnew",
    "check_bound_bou1",
    "check_bound_bouli",
    "check_bound_ismail",
    "check_even_symmetry",
    "check_tmb",
    "check_effective_variance",
    "check_phi_sign",
    "bessel_cross_check",
    "bou1_sides",
    "ismail_ratio",
    "tmb_middle",
    "log_margin",
    "phi",
    "conjecture_scan",
    "effective_variance",
]

# floor on the tolerance, for rounding in the log-scale arithmetic itself
ROUNDING_SLACK = 1e-13
IDENTITY_TOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    rho_values: tuple = (0.5, 1.0, 2.0, 3.0)
    nu_values: tuple = (-1.5, -0.5, 0.5, 1.0, 2.0, 3.5)
    u_values: tuple = (0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0)
    selector: str = "all"


DEFAULT_GRID = GridSpec()


@dataclass
class PointResult:
    rho: float
    nu: float
    u: float
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    label: str = ""

    @property
    def ok(self) -> bool:
        return self.margin > -self.tolerance

    @property
    def strict(self) -> bool:
        return self.margin > self.tolerance


@dataclass
class InequalityReport:
    name: str
    points: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    exploratory: bool = False

    @property
    def points_tested(self) -> int:
        return len(self.points)

    @property
    def violations(self) -> list:
        return [p for p in self.points if not p.ok]

    @property
    def min_margin(self) -> float:
        return min((p.margin for p in self.points), default=math.nan)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self):
        return {
            "name": self.name,
            "points_tested": self.points_tested,
            "passed": self.passed,
            "min_margin": self.min_margin,
            "exploratory": self.exploratory,
            "violations": [asdict(p) for p in self.violations],
            "errors": list(self.errors),
        }


def log_margin(log_lhs: float, log_rhs: float) -> float:
    """``(rhs - lhs) / max(lhs, rhs)`` for positive sides given by their logs."""
    d = log_rhs - log_lhs
    if d == math.inf:
        return 1.0
    if d == -math.inf:
        return -1.0
    return -math.expm1(-d) if d >= 0 else math.expm1(d)


def _exp(x):
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _point(rho, nu, u, log_lhs, log_rhs, err, label=""):
    return PointResult(rho=rho, nu=nu, u=u, lhs=_exp(log_lhs), rhs=_exp(log_rhs),
                       margin=log_margin(log_lhs, log_rhs), tolerance=err + ROUNDING_SLACK, label=label)


def _identity_point(rho, nu, u, log_lhs, log_rhs, err, label=""):
    """Two-sided check: the point passes iff the sides agree to IDENTITY_TOL (or the error bound)."""
    m = log_margin(log_lhs, log_rhs)
    tol = max(IDENTITY_TOL, err + ROUNDING_SLACK)
    return PointResult(rho=rho, nu=nu, u=u, lhs=_exp(log_lhs), rhs=_exp(log_rhs),
                       margin=-abs(m), tolerance=tol, label=label)


def _z(rho, nu, u, config):
    r = evaluate(KratzelParams(rho, nu), u, config)
    return r.log_value, r.abs_error_of_log


def _run(report, fn, *key):
    try:
        fn()
    except (EvaluationError, KratzelDomainError, ArithmeticError) as exc:
        report.errors.append({"point": list(key), "error": str(exc)})


def check_turan_logconvexity(grid: GridSpec = DEFAULT_GRID, config: QuadratureConfig = DEFAULT_CONFIG):
    """``[Z^((nu1+nu2)/2)]^2 <= Z^nu1 Z^nu2`` for every pair of orders on the grid."""
    report = InequalityReport("turan_logconvexity")
    nus = sorted(grid.nu_values)
    for rho in grid.rho_values:
        for nu1, nu2 in itertools.combinations_with_replacement(nus, 2):
            mid = 0.5 * (nu1 + nu2)
            if not all(is_admissible(rho, v) for v in (nu1, nu2, mid)):
                continue
            for u in grid.u_values:
                def one():
                    l1, e1 = _z(rho, nu1, u, config)
                    l2, e2 = _z(rho, nu2, u, config)
                    lm, em = _z(rho, mid, u, config)
                    report.points.append(_point(rho, mid, u, 2 * lm, l1 + l2, 2 * em + e1 + e2,
                                                label=f"nu1={nu1},nu2={nu2}"))
                _run(report, one, rho, nu1, nu2, u)
    return report


def check_laguerre(grid: GridSpec = DEFAULT_GRID, n_range=(1, 2, 3), config: QuadratureConfig = DEFAULT_CONFIG):
    """``(Z^(n))^2 <= Z^(n-1) Z^(n+1)`` with exact derivatives ``(-1)^n Z^(nu-n)``."""
    report = InequalityReport("laguerre")
    for rho, nu, n in itertools.product(grid.rho_values, grid.nu_values, n_range):
        if not all(is_admissible(rho, nu - k) for k in (n - 1, n, n + 1)):
            continue
        for u in grid.u_values:
            def one():
                p = KratzelParams(rho, nu)
                dn = derivative(p, u, n, config)
                dm = derivative(p, u, n - 1, config)
                dp = derivative(p, u, n + 1, config)
                # signs (-1)^(n-1) (-1)^(n+1) = +1 on the right, so both sides are positive
                report.points.append(_point(rho, nu, u, 2 * dn.log_value, dm.log_value + dp.log_value,
                                            2 * dn.abs_error_of_log + dm.abs_error_of_log + dp.abs_error_of_log,
                                            label=f"n={n}"))
            _run(report, one, rho, nu, n, u)
    return report


def check_tkgnew(grid: GridSpec = DEFAULT_GRID, config: QuadratureConfig = DEFAULT_CONFIG):
    """``[Z^nu]^2 < Z^(nu-rho) Z^(nu+rho)``."""
    report = InequalityReport("tkgnew")
    for rho, nu in itertools.product(grid.rho_values, grid.nu_values):
        if not all(is_admissible(rho, v) for v in (nu - rho, nu, nu + rho)):
            continue
        for u in grid.u_values:
            def one():
                l0, e0 = _z(rho, nu, u, config)
                lm, em = _z(rho, nu - rho, u, config)
                lp, ep = _z(rho, nu + rho, u, config)
                report.points.append(_point(rho, nu, u, 2 * l0, lm + lp, 2 * e0 + em + ep))
            _run(report, one, rho, nu, u)
    return report


def bou1_sides(rho: float, nu: float, u: float, config: QuadratureConfig = DEFAULT_CONFIG):
    """Log of ``Z_rho^(-nu)(u)`` and of the Chebyshev bound ``rho u^(-nu) Γ(nu) Z_rho^rho(u)``.

    At rho = 1 the bound equals ``2 u^(1/2-nu) Γ(nu) K_1(2 sqrt(u))``.
    Returns ``(log_z, log_bound, err)``.
    """
    lz, ez = _z(rho, -nu, u, config)
    lr, er = _z(rho, rho, u, config)
    log_bound = math.log(rho) - nu * math.log(u) + special.ln_gamma(nu) + lr
    return lz, log_bound, ez + er


def check_bound_bou1(grid: GridSpec = DEFAULT_GRID, config: QuadratureConfig = DEFAULT_CONFIG):
    """Lower bound for ``Z_rho^(-nu)`` when nu >= 1, reversed for 0 < nu <= 1, equality at nu = 1."""
    report = InequalityReport("bound_bou1")
    for rho, nu in itertools.product(grid.rho_values, grid.nu_values):
        if not (rho > 0 and nu > 0):
            continue
        for u in grid.u_values:
            def one():
                lz, lb, err = bou1_sides(rho, nu, u, config)
                if nu == 1:
                    report.points.append(_identity_point(rho, nu, u, lb, lz, err, label="equality"))
                elif nu > 1:
                    report.points.append(_point(rho, nu, u, lb, lz, err, label="nu>=1"))
                else:
                    report.points.append(_point(rho, nu, u, lz, lb, err, label="0<nu<=1"))
            _run(report, one, rho, nu, u)
    return report


def _log_k_scaled(nu, x, config):
    return special.log_bessel_k_scaled(nu, x, config)


def check_bound_bouli(nu_values=DEFAULT_GRID.nu_values, u_values=DEFAULT_GRID.u_values,
                      config: QuadratureConfig = DEFAULT_CONFIG):
    """``u^(nu-1) K_nu(u) >= 2^(nu-1) Γ(nu) K_1(u)`` for nu >= 1, reversed for 0 < nu <= 1.

    The common factor ``e^-u`` is cancelled by comparing scaled values.
    """
    report = InequalityReport("bound_bouli")
    for nu in nu_values:
        if not nu > 0:
            continue
        for u in u_values:
            def one():
                lk, ek = _log_k_scaled(nu, u, config)
                l1, e1 = _log_k_scaled(1.0, u, config)
                left = (nu - 1) * math.log(u) + lk
                right = (nu - 1) * math.log(2.0) + special.ln_gamma(nu) + l1
                if nu == 1:
                    report.points.append(_identity_point(1.0, nu, u, left, right, ek + e1, label="equality"))
                elif nu > 1:
                    report.points.append(_point(1.0, nu, u, right, left, ek + e1, label="nu>=1"))
                else:
                    report.points.append(_point(1.0, nu, u, left, right, ek + e1, label="0<nu<=1"))
            _run(report, one, nu, u)
    return report


def ismail_ratio(nu: float, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``u^nu e^u K_nu(u) / (2^(nu-1) Γ(nu))``; exceeds 1 for nu > 1/2."""
    lk, _ = _log_k_scaled(nu, u, config)
    return math.exp(nu * math.log(u) + lk - (nu - 1) * math.log(2.0) - special.ln_gamma(nu))


def check_bound_ismail(nu_values=DEFAULT_GRID.nu_values, u_values=DEFAULT_GRID.u_values,
                       config: QuadratureConfig = DEFAULT_CONFIG):
    """``u^nu e^u K_nu(u) > 2^(nu-1) Γ(nu)`` for nu > 1/2, and for nu >= 1 the chain

        u^nu K_nu(u) >= 2^(nu-1) Γ(nu) u K_1(u) > 2^(nu-1) Γ(nu) e^-u.
    """
    report = InequalityReport("bound_ismail")
    for nu in nu_values:
        if not nu > 0.5:
            continue
        for u in u_values:
            def one():
                lk, ek = _log_k_scaled(nu, u, config)
                l1, e1 = _log_k_scaled(1.0, u, config)
                const = (nu - 1) * math.log(2.0) + special.ln_gamma(nu)
                lu = math.log(u)
                # every side below carries the factor e^-u, dropped here
                report.points.append(_point(1.0, nu, u, const, nu * lu + lk, ek, label="ismail"))
                if nu >= 1:
                    mid = const + lu + l1
                    if nu == 1:
                        report.points.append(_identity_point(1.0, nu, u, mid, nu * lu + lk, ek + e1,
                                                             label="chain-left"))
                    else:
                        report.points.append(_point(1.0, nu, u, mid, nu * lu + lk, ek + e1, label="chain-left"))
                    report.points.append(_point(1.0, nu, u, const, mid, e1, label="chain-right"))
            _run(report, one, nu, u)
    return report


def check_even_symmetry(nu_values=DEFAULT_GRID.nu_values, u_values=DEFAULT_GRID.u_values,
                        config: QuadratureConfig = DEFAULT_CONFIG):
    """``Z_1^(-nu)(u) = u^(-nu) Z_1^nu(u)`` as a log-scale identity."""
    report = InequalityReport("even_symmetry")
    for nu in nu_values:
        for u in u_values:
            def one():
                lm, em = _z(1.0, -nu, u, config)
                lp, ep = _z(1.0, nu, u, config)
                report.points.append(_identity_point(1.0, nu, u, lm, lp - nu * math.log(u), em + ep))
            _run(report, one, nu, u)
    return report


def check_tmb(nu_values=DEFAULT_GRID.nu_values, u_values=DEFAULT_GRID.u_values,
              config: QuadratureConfig = DEFAULT_CONFIG):
    """``1/(1-nu) K_nu^2 < K_nu^2 - K_(nu-1) K_(nu+1) < 0``; the left side only for nu > 1.

    With ``R = K_(nu-1) K_(nu+1) / K_nu^2`` the two sides read ``1 < R`` and
    ``R < nu/(nu-1)``; the exponential scaling cancels in ``R``.
    """
    report = InequalityReport("tmb")
    for nu in nu_values:
        for u in u_values:
            def one():
                l0, e0 = _log_k_scaled(nu, u, config)
                lm, em = _log_k_scaled(nu - 1, u, config)
                lp, ep = _log_k_scaled(nu + 1, u, config)
                err = 2 * e0 + em + ep
                report.points.append(_point(1.0, nu, u, 2 * l0, lm + lp, err, label="right"))
                if nu > 1:
                    report.points.append(_point(1.0, nu, u, lm + lp, 2 * l0 + math.log(nu / (nu - 1)), err,
                                                label="left"))
            _run(report, one, nu, u)
    return report


def tmb_middle(nu: float, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``1 - K_(nu-1) K_(nu+1) / K_nu^2``, which lies in (1/(1-nu), 0)."""
    l0, _ = _log_k_scaled(nu, u, config)
    lm, _ = _log_k_scaled(nu - 1, u, config)
    lp, _ = _log_k_scaled(nu + 1, u, config)
    return -math.expm1(lm + lp - 2 * l0)


def effective_variance(mu: float, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``K_(mu-1)(u) K_(mu+1)(u) / K_mu(u)^2 - 1``."""
    if not u > 0:
        raise KratzelDomainError("u must be positive")
    l0, _ = _log_k_scaled(mu, u, config)
    lm, _ = _log_k_scaled(mu - 1, u, config)
    lp, _ = _log_k_scaled(mu + 1, u, config)
    return math.expm1(lm + lp - 2 * l0)


def check_effective_variance(mu_values=(2.0, 5.0), u_values=(0.01, 1.0, 100.0),
                             config: QuadratureConfig = DEFAULT_CONFIG):
    """``0 < v_eff < 1/(mu-1)`` for mu > 1 (values with mu <= 1 are skipped)."""
    report = InequalityReport("effective_variance")
    for mu in mu_values:
        if not mu > 1:
            continue
        for u in u_values:
            def one():
                l0, e0 = _log_k_scaled(mu, u, config)
                lm, em = _log_k_scaled(mu - 1, u, config)
                lp, ep = _log_k_scaled(mu + 1, u, config)
                err = 2 * e0 + em + ep
                # v_eff > 0  <=>  K_(mu-1) K_(mu+1) > K_mu^2
                report.points.append(_point(1.0, mu, u, 2 * l0, lm + lp, err, label="lower"))
                report.points.append(_point(1.0, mu, u, lm + lp, 2 * l0 + math.log(mu / (mu - 1)), err,
                                            label="upper"))
            _run(report, one, mu, u)
    return report


def phi(params, u: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``1 - Z^(nu-rho) Z^(nu+rho) / (Z^nu)^2``, evaluated on log scale."""
    p = params if isinstance(params, KratzelParams) else KratzelParams(*map(float, params))
    lm, _ = _z(p.rho, p.nu - p.rho, u, config)
    l0, _ = _z(p.rho, p.nu, u, config)
    lp, _ = _z(p.rho, p.nu + p.rho, u, config)
    return -math.expm1(lm + lp - 2 * l0)


@dataclass
class ConjectureReport:
    """Numerical evidence on the monotonicity of Φ; never a proof."""

    rho: float
    nu: float
    u: list
    phi: list
    lower_bound: float
    margins: list
    increasing: list
    exploratory: bool = True

    @property
    def strictly_increasing(self) -> bool:
        return all(self.increasing)

    @property
    def bound_holds(self) -> bool:
        return all(m > 0 for m in self.margins)

    @property
    def passed(self) -> bool:
        return self.strictly_increasing and self.bound_holds

    def counterexamples(self):
        out = [{"u": self.u[i + 1], "kind": "not-increasing"} for i, ok in enumerate(self.increasing) if not ok]
        out += [{"u": u, "kind": "bound"} for u, m in zip(self.u, self.margins) if not m > 0]
        return out

    def to_dict(self):
        return {
            "rho": self.rho,
            "nu": self.nu,
            "lower_bound": self.lower_bound,
            "strictly_increasing": self.strictly_increasing,
            "bound_holds": self.bound_holds,
            "phi_first": self.phi[0],
            "phi_last": self.phi[-1],
            "counterexamples": self.counterexamples(),
            "exploratory": True,
        }


def default_conjecture_grid(u_min=1e-4, u_max=1e4, points=17):
    return [float(v) for v in np.geomspace(u_min, u_max, points)]


def conjecture_scan(params, u_grid=None, config: QuadratureConfig = DEFAULT_CONFIG) -> ConjectureReport:
    """Evaluate Φ on a log-spaced grid and record monotonicity and the lower bound rho/(rho-nu)."""
    p = params if isinstance(params, KratzelParams) else KratzelParams(*map(float, params))
    if not (p.nu > p.rho > 0):
        raise KratzelDomainError("the conjecture requires nu > rho > 0")
    grid = default_conjecture_grid() if u_grid is None else [float(u) for u in u_grid]
    values = [phi(p, u, config) for u in grid]
    bound = p.rho / (p.rho - p.nu)
    return ConjectureReport(
        rho=p.rho, nu=p.nu, u=grid, phi=values, lower_bound=bound,
        margins=[v - bound for v in values],
        increasing=[b > a for a, b in zip(values, values[1:])],
    )


def check_phi_sign(grid: GridSpec = DEFAULT_GRID, config: QuadratureConfig = DEFAULT_CONFIG):
    """Φ < 0 wherever the three orders are admissible; the same content as :func:`check_tkgnew`."""
    report = InequalityReport("phi_sign")
    for rho, nu in itertools.product(grid.rho_values, grid.nu_values):
        if not all(is_admissible(rho, v) for v in (nu - rho, nu, nu + rho)):
            continue
        for u in grid.u_values:
            def one():
                value = phi((rho, nu), u, config)
                report.points.append(PointResult(rho, nu, u, value, 0.0, -value, ROUNDING_SLACK, "phi<0"))
            _run(report, one, rho, nu, u)
    return report


def bessel_cross_check(nu_values, u_values, config: QuadratureConfig = DEFAULT_CONFIG):
    """Direct quadrature of ``Z_1^nu`` against ``2 u^(nu/2) K_nu(2 sqrt(u))``."""
    report = InequalityReport("bessel_form")
    for nu in nu_values:
        for u in u_values:
            def one():
                a = evaluate((1.0, nu), u, config)
                b = evaluate_bessel_form(nu, u, config)
                report.points.append(_identity_point(1.0, nu, u, a.log_value, b.log_value,
                                                     a.abs_error_of_log + b.abs_error_of_log))
            _run(report, one, nu, u)
    return report

"""Command-line front end.

Usage:
    kratzel eval --rho 1 --nu 0.5 --u 1
    kratzel table --rho 1 --nu 0.5 --u-min 1 --u-max 3 --steps 3 --format csv
    kratzel verify all
    kratzel scan --rho 1 --nu 2
    kratzel det --rho 1 --nu 3 --u 2 --n 2

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 domain or verification failure, 2 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys

import click
import numpy as np

from . import core, turan, verify
from .errors import EvaluationError, KratzelDomainError
from .quadrature import QuadratureConfig
from .results import Method

SELECTORS = ("all", "turan", "laguerre", "tkgnew", "bounds", "tmb", "symmetry", "determinant", "cm-scan")
_METHODS = {
    "direct": core.evaluate,
    "laplace": core.evaluate_laplace_form,
}


def fmt(x) -> str:
    """Fixed 15-significant-digit rendering used for every number printed."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.15g}"


def jnum(x):
    """JSON-safe number rounded to 15 significant digits; non-finite values become null."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.15g}")


def _dump(obj):
    click.echo(json.dumps(obj, sort_keys=False, allow_nan=False))


def _config() -> QuadratureConfig:
    tol = os.environ.get("KRATZEL_TOL")
    if not tol:
        return QuadratureConfig()
    try:
        return QuadratureConfig(rel_tol=float(tol))
    except ValueError as exc:
        raise click.UsageError(f"invalid KRATZEL_TOL={tol!r}: {exc}")


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _evaluate(method, rho, nu, u, config):
    if method == "bessel":
        if rho != 1:
            raise KratzelDomainError("the Bessel closed form requires rho = 1")
        if not u > 0:
            raise KratzelDomainError("u must be positive")
        return core.evaluate_bessel_form(nu, u, config)
    if method == "asymptotic":
        return core.asymptotic_large_u((rho, nu), u)
    return _METHODS[method]((rho, nu), u, config)


@click.group()
def main():
    """Krätzel function evaluation and verification."""


@main.command("eval")
@click.option("--rho", type=float, required=True)
@click.option("--nu", type=float, required=True)
@click.option("--u", "u", type=float, required=True)
@click.option("--method", type=click.Choice(["direct", "laplace", "bessel", "asymptotic"]), default="direct",
              show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit a single JSON object.")
def cmd_eval(rho, nu, u, method, as_json):
    """Evaluate Z_rho^nu(u)."""
    config = _config()
    try:
        r = _evaluate(method, rho, nu, u, config)
    except (KratzelDomainError, EvaluationError) as exc:
        _fail(str(exc))
    record = {
        "rho": jnum(rho), "nu": jnum(nu), "u": jnum(u),
        "value": jnum(r.value), "log_value": jnum(r.log_value), "log_error": jnum(r.abs_error_of_log),
        "method": str(r.method), "converged": bool(r.converged),
    }
    if as_json:
        _dump(record)
        return
    for key in ("value", "log_value", "log_error"):
        click.echo(f"{key:<10} {fmt(getattr(r, 'abs_error_of_log' if key == 'log_error' else key))}")
    click.echo(f"{'method':<10} {r.method}")
    click.echo(f"{'converged':<10} {fmt(r.converged)}")
    if not r.converged:
        click.echo("warning: quadrature did not converge", err=True)


def _u_values(u_min, u_max, steps, spacing):
    if steps < 1:
        raise click.UsageError("--steps must be at least 1")
    if spacing == "log":
        if not (u_min > 0 and u_max > 0):
            raise KratzelDomainError("u must be positive")
        return [float(v) for v in np.geomspace(u_min, u_max, steps)]
    return [float(v) for v in np.linspace(u_min, u_max, steps)]


@main.command("table")
@click.option("--rho", type=float, required=True)
@click.option("--nu", type=float, required=True)
@click.option("--u-min", type=float, required=True)
@click.option("--u-max", type=float, required=True)
@click.option("--steps", type=int, default=11, show_default=True)
@click.option("--spacing", type=click.Choice(["linear", "log"]), default="linear", show_default=True)
@click.option("--method", type=click.Choice(["direct", "laplace", "bessel", "asymptotic"]), default="direct",
              show_default=True)
@click.option("--format", "out_format", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def cmd_table(rho, nu, u_min, u_max, steps, spacing, method, out_format):
    """Tabulate Z_rho^nu(u) over a range of u."""
    config = _config()
    try:
        us = _u_values(u_min, u_max, steps, spacing)
        results = [_evaluate(method, rho, nu, u, config) for u in us]
    except (KratzelDomainError, EvaluationError) as exc:
        _fail(str(exc))
    if out_format == "json":
        _dump([
            {"u": jnum(u), "value": jnum(r.value), "log_value": jnum(r.log_value),
             "log_error": jnum(r.abs_error_of_log), "method": str(r.method)}
            for u, r in zip(us, results)
        ])
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["u", "value", "log_value", "log_error", "method"])
    for u, r in zip(us, results):
        writer.writerow([fmt(u), fmt(r.value), fmt(r.log_value), fmt(r.abs_error_of_log), str(r.method)])
    click.echo(buf.getvalue(), nl=False)


def _scan_report(name, rho, nu, rep: turan.MonotonicityReport) -> verify.InequalityReport:
    out = verify.InequalityReport(name)
    for i, u in enumerate(rep.grid):
        for m, ok in enumerate(rep.sign_ok[i]):
            margin = rep.margins[i][m]
            # same slack as the scan itself: (-1)^m Δ^m f >= -1e-12 |f|
            out.points.append(verify.PointResult(rho, nu, u, 0.0, margin, margin if ok else min(margin, -1e-12),
                                                 1e-12, label=f"m={m}"))
    return out


def determinant_reports(grid: verify.GridSpec, orders, config, cm_grid=None):
    """Positivity of A_{rho,n}^nu at trustworthy points and its complete-monotonicity scan."""
    positivity = verify.InequalityReport("determinant_positivity")
    scan = verify.InequalityReport("determinant_cm_scan")
    cm_grid = list(grid.u_values) if cm_grid is None else cm_grid
    for n in orders:
        for rho in grid.rho_values:
            if not rho > 0:
                continue
            for nu in grid.nu_values:
                for u in grid.u_values:
                    try:
                        d = turan.turan_determinant((rho, nu), n, u, config)
                    except (KratzelDomainError, EvaluationError) as exc:
                        positivity.errors.append({"point": [rho, nu, u, n], "error": str(exc)})
                        continue
                    if d.trustworthy:
                        positivity.points.append(verify.PointResult(
                            rho, nu, u, 0.0, d.value, 1.0 if d.value > 0 else -1.0, 0.0, label=f"n={n}"))
                try:
                    rep = turan.complete_monotonicity_scan(
                        lambda v: turan.turan_determinant((rho, nu), n, v, config).value, cm_grid, 3)
                except (KratzelDomainError, EvaluationError) as exc:
                    scan.errors.append({"point": [rho, nu, n], "error": str(exc)})
                    continue
                sub = _scan_report("", rho, nu, rep)
                for p in sub.points:
                    p.label = f"n={n},{p.label}"
                scan.points.extend(sub.points)
    return [positivity, scan]


def z_scan_report(grid: verify.GridSpec, config):
    out = verify.InequalityReport("kratzel_cm_scan")
    for rho in grid.rho_values:
        for nu in grid.nu_values:
            if not core.is_admissible(rho, nu):
                continue
            rep = turan.complete_monotonicity_scan(
                lambda v: core.evaluate((rho, nu), v, config).value, list(grid.u_values), 3)
            out.points.extend(_scan_report("", rho, nu, rep).points)
    return out


def run_selector(selector: str, grid: verify.GridSpec, orders=(1, 2), config=None):
    """Run the checks behind a ``verify`` selector; returns a list of reports."""
    config = config or QuadratureConfig()
    nus, us = grid.nu_values, grid.u_values
    table = {
        "turan": lambda: [verify.check_turan_logconvexity(grid, config)],
        "laguerre": lambda: [verify.check_laguerre(grid, config=config)],
        "tkgnew": lambda: [verify.check_tkgnew(grid, config), verify.check_phi_sign(grid, config)],
        "bounds": lambda: [verify.check_bound_bou1(grid, config), verify.check_bound_bouli(nus, us, config),
                           verify.check_bound_ismail(nus, us, config)],
        "tmb": lambda: [verify.check_tmb(nus, us, config), verify.check_effective_variance(config=config)],
        "symmetry": lambda: [verify.check_even_symmetry(nus, us, config),
                             verify.bessel_cross_check(nus, us, config)],
        "determinant": lambda: determinant_reports(grid, orders, config),
        "cm-scan": lambda: [z_scan_report(grid, config)],
    }
    if selector == "all":
        reports = []
        for key in SELECTORS[1:]:
            reports.extend(table[key]())
        return reports
    return table[selector]()


@main.command("verify")
@click.argument("selector", type=click.Choice(SELECTORS))
@click.option("--rho", "rhos", type=float, multiple=True, help="Override the rho grid (repeatable).")
@click.option("--nu", "nus", type=float, multiple=True, help="Override the nu grid (repeatable).")
@click.option("--u", "us", type=float, multiple=True, help="Override the u grid (repeatable).")
@click.option("--n", "orders", type=click.IntRange(1, turan.MAX_ORDER), multiple=True,
              help="Determinant orders for the determinant selector (default 1 and 2).")
@click.option("--json", "as_json", is_flag=True, help="Dump every report as JSON.")
def cmd_verify(selector, rhos, nus, us, orders, as_json):
    """Run inequality and identity checks over a parameter grid."""
    base = verify.DEFAULT_GRID
    if any(u <= 0 for u in us):
        _fail("u must be positive")
    grid = verify.GridSpec(rho_values=tuple(rhos) or base.rho_values, nu_values=tuple(nus) or base.nu_values,
                           u_values=tuple(us) or base.u_values, selector=selector)
    reports = run_selector(selector, grid, tuple(orders) or (1, 2), _config())
    passed = all(r.passed and not r.errors for r in reports if not r.exploratory)
    if as_json:
        _dump({
            "selector": selector,
            "passed": passed,
            "reports": [_json_report(r) for r in reports],
        })
    else:
        for r in reports:
            status = "PASS" if r.passed and not r.errors else "FAIL"
            click.echo(f"{status}  {r.name:<24} points={r.points_tested:<5} min_margin={fmt(r.min_margin)}"
                       f" violations={len(r.violations)} errors={len(r.errors)}")
        click.echo(f"overall: {'PASS' if passed else 'FAIL'}")
    sys.exit(0 if passed else 1)


def _json_report(r):
    d = r.to_dict()
    d["min_margin"] = jnum(d["min_margin"])
    for v in d["violations"]:
        for k in ("rho", "nu", "u", "lhs", "rhs", "margin", "tolerance"):
            v[k] = jnum(v[k])
    return d


@main.command("scan")
@click.option("--rho", type=float, required=True)
@click.option("--nu", type=float, required=True)
@click.option("--u-min", type=float, default=1e-4, show_default=True)
@click.option("--u-max", type=float, default=1e4, show_default=True)
@click.option("--points", type=click.IntRange(2, None), default=17, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_scan(rho, nu, u_min, u_max, points, as_json):
    """Evidence scan of the monotonicity of Phi_rho^nu (exploratory: exits 0)."""
    if not (nu > rho > 0):
        _fail("the scan requires nu > rho > 0")
    if not (0 < u_min < u_max):
        _fail("u range must satisfy 0 < u-min < u-max")
    try:
        rep = verify.conjecture_scan((rho, nu), verify.default_conjecture_grid(u_min, u_max, points), _config())
    except (KratzelDomainError, EvaluationError) as exc:
        _fail(str(exc))
    rows = [{"u": jnum(u), "phi": jnum(p), "lower_bound": jnum(rep.lower_bound), "margin": jnum(m)}
            for u, p, m in zip(rep.u, rep.phi, rep.margins)]
    summary = rep.to_dict()
    for k in ("rho", "nu", "lower_bound", "phi_first", "phi_last"):
        summary[k] = jnum(summary[k])
    if as_json:
        _dump({"report": summary, "rows": rows})
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["u", "phi", "lower_bound", "margin"])
        for u, p, m in zip(rep.u, rep.phi, rep.margins):
            writer.writerow([fmt(u), fmt(p), fmt(rep.lower_bound), fmt(m)])
        click.echo(buf.getvalue(), nl=False)
    click.echo(f"strictly increasing: {fmt(rep.strictly_increasing)}; bound holds: {fmt(rep.bound_holds)}; "
               f"phi from {fmt(rep.phi[0])} to {fmt(rep.phi[-1])}; limit rho/(rho-nu) = {fmt(rep.lower_bound)}",
               err=True)
    for c in rep.counterexamples():
        click.echo(f"finding: {c['kind']} at u={fmt(c['u'])}", err=True)


@main.command("det")
@click.option("--rho", type=float, required=True)
@click.option("--nu", type=float, required=True)
@click.option("--u", "u", type=float, required=True)
@click.option("--n", type=click.IntRange(1, turan.MAX_ORDER), default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_det(rho, nu, u, n, as_json):
    """Turán determinant A_{rho,n}^nu(u)."""
    try:
        d = turan.turan_determinant((rho, nu), n, u, _config())
    except (KratzelDomainError, EvaluationError) as exc:
        _fail(str(exc))
    record = {"rho": jnum(rho), "nu": jnum(nu), "u": jnum(u), "n": n, "value": jnum(d.value),
              "log_abs_value": jnum(d.log_abs_value), "condition_estimate": jnum(d.condition_estimate),
              "trustworthy": bool(d.trustworthy)}
    if as_json:
        _dump(record)
        return
    for key in ("value", "log_abs_value", "condition_estimate", "trustworthy"):
        click.echo(f"{key:<19} {fmt(getattr(d, key))}")


if __name__ == "__main__":
    main()

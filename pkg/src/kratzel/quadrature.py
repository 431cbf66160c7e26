"""Trapezoidal quadrature on the real line for double-exponentially decaying integrands.

After the substitution ``t = e^x`` the integrals handled here decay like
``exp(-e^{|x|})`` at both ends, and the plain trapezoid rule with step halving
converges faster than any power of the step.  All integrands are called with
numpy arrays of abscissae and must return arrays of the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import EvaluationError, KratzelDomainError

__all__ = [
    "QuadratureConfig",
    "IntegralEstimate",
    "LogIntegralEstimate",
    "integrate_real_line",
    "integrate_log_scale",
    "integrate_square",
    "find_peak",
    "peak_width",
]

_EPS = np.finfo(float).eps
_BLOCK = 16
# initial half-width of the node window, in units of the scale argument
_INITIAL_HALF_WIDTH = 4.0


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_levels: int = 12
    max_nodes: int = 100_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol >= 0:
            raise ValueError("abs_tol must be non-negative")
        if self.max_levels < 1:
            raise ValueError("max_levels must be at least 1")
        if self.max_nodes < 16:
            raise ValueError("max_nodes must be at least 16")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    abs_error: float
    nodes_used: int
    converged: bool
    # trapezoid sums, one per refinement level (coarsest first)
    history: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class LogIntegralEstimate:
    log_value: float
    abs_error_of_log: float
    peak_location: float
    converged: bool
    nodes_used: int = 0


def _evaluate(f, x):
    y = np.asarray(f(x), dtype=float)
    if y.shape != np.shape(x):
        y = np.broadcast_to(y, np.shape(x)).astype(float)
    bad = ~np.isfinite(y)
    if bad.any():
        where = np.asarray(x)[bad].ravel()[0] if np.ndim(x) == 1 else None
        raise EvaluationError(f"integrand is not finite at x={where!r}", abscissa=where)
    return y


def _trapezoid_level(f, center, h, k_lo, k_hi, tail_rel, budget):
    """One trapezoid sum with step ``h`` over nodes ``center + k*h``.

    The index window ``[k_lo, k_hi]`` is widened in blocks until the outermost
    block on each side is negligible relative to the running L1 mass.
    Returns ``(sum, l1, k_lo, k_hi, nodes, exhausted)``.
    """
    ks = np.arange(k_lo, k_hi + 1)
    vals = _evaluate(f, center + ks * h)
    total = math.fsum(vals)
    l1 = float(np.sum(np.abs(vals)))
    nodes = len(ks)
    exhausted = False

    def edge_small(edge_vals):
        return float(np.max(np.abs(edge_vals))) <= tail_rel * l1

    right_edge = vals[-_BLOCK:]
    left_edge = vals[:_BLOCK]
    while not edge_small(right_edge):
        if nodes + _BLOCK > budget:
            exhausted = True
            break
        ks = np.arange(k_hi + 1, k_hi + 1 + _BLOCK)
        right_edge = _evaluate(f, center + ks * h)
        total += math.fsum(right_edge)
        l1 += float(np.sum(np.abs(right_edge)))
        k_hi += _BLOCK
        nodes += _BLOCK
    while not edge_small(left_edge):
        if nodes + _BLOCK > budget:
            exhausted = True
            break
        ks = np.arange(k_lo - _BLOCK, k_lo)
        left_edge = _evaluate(f, center + ks * h)
        total += math.fsum(left_edge)
        l1 += float(np.sum(np.abs(left_edge)))
        k_lo -= _BLOCK
        nodes += _BLOCK
    return h * total, h * l1, k_lo, k_hi, nodes, exhausted


def integrate_real_line(f, config: QuadratureConfig = DEFAULT_CONFIG, *, center: float = 0.0,
                        scale: float = 1.0) -> IntegralEstimate:
    """Integrate ``f`` over the whole real line.

    The rule is the trapezoid sum on ``center + k*h`` with ``h`` starting at
    ``scale`` and halved each level.  The reported error of the finest sum is
    ``|S(h) - S(h/2)|``, floored at the rounding level of the L1 mass.
    """
    if not (scale > 0 and math.isfinite(scale)):
        raise ValueError("scale must be positive and finite")
    tail_rel = config.rel_tol * 1e-2
    lo_x, hi_x = -_INITIAL_HALF_WIDTH * scale, _INITIAL_HALF_WIDTH * scale
    h = scale
    history = []
    nodes_used = 0
    prev = None
    value, err, converged = 0.0, math.inf, False
    for level in range(config.max_levels + 1):
        k_lo = int(math.floor(lo_x / h))
        k_hi = int(math.ceil(hi_x / h))
        budget = config.max_nodes - nodes_used
        if budget < (k_hi - k_lo + 1):
            break
        s, l1, k_lo, k_hi, n, exhausted = _trapezoid_level(f, center, h, k_lo, k_hi, tail_rel, budget)
        nodes_used += n
        history.append(s)
        lo_x, hi_x = k_lo * h, k_hi * h
        noise = 16 * _EPS * l1
        if prev is not None:
            value = s
            err = max(abs(s - prev), noise)
            if not exhausted and err <= max(config.rel_tol * abs(s), config.abs_tol, noise):
                converged = True
                break
        else:
            value = s
        if exhausted:
            break
        prev = s
        h /= 2
    return IntegralEstimate(value=float(value), abs_error=float(err), nodes_used=nodes_used,
                            converged=converged, history=tuple(history))


def find_peak(phi, lo: float = -40.0, hi: float = 40.0, points: int = 64, max_widenings: int = 6):
    """Locate the maximum of ``phi`` by a coarse scan followed by golden-section search.

    The scan window is doubled until the best scan point is interior.
    Returns ``(x_max, phi_max)``.
    """
    for _ in range(max_widenings + 1):
        xs = np.linspace(lo, hi, points)
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.asarray(phi(xs), dtype=float)
        if np.isnan(vals).any():
            raise EvaluationError("exponent is NaN during peak scan",
                                  abscissa=float(xs[np.isnan(vals)][0]))
        vals = np.where(np.isfinite(vals), vals, -np.inf)
        i = int(np.argmax(vals))
        if not np.isfinite(vals[i]):
            raise KratzelDomainError("exponent is -inf on the whole scan window")
        if 0 < i < points - 1:
            break
        width = hi - lo
        lo, hi = lo - width / 2, hi + width / 2
    else:
        raise KratzelDomainError("no interior maximum found for the exponent")

    def neg(x):
        with np.errstate(over="ignore", invalid="ignore"):
            v = float(np.asarray(phi(np.array([x])), dtype=float)[0])
        return -v if math.isfinite(v) else math.inf

    res = optimize.minimize_scalar(neg, bracket=(xs[i - 1], xs[i], xs[i + 1]), method="golden",
                                   tol=1e-10)
    x_star = float(res.x)
    if neg(x_star) > -vals[i]:
        x_star = float(xs[i])
    return x_star, -neg(x_star)


def peak_width(phi, x_star, m):
    """Width ``1/sqrt(-phi'')`` of the peak, from a centred second difference."""
    for d in (1e-3, 1e-2, 1e-1, 1.0):
        pts = np.array([x_star - d, x_star + d])
        with np.errstate(over="ignore", invalid="ignore"):
            side = np.asarray(phi(pts), dtype=float)
        c = -(side[0] - 2 * m + side[1]) / (d * d)
        if math.isfinite(c) and c > 1e-12:
            return float(min(max(1.0 / math.sqrt(c), 1e-8), 10.0))
    return 1.0


def integrate_log_scale(phi, config: QuadratureConfig = DEFAULT_CONFIG) -> LogIntegralEstimate:
    """Return ``log ∫ exp(phi(x)) dx`` without overflow or underflow.

    The integral is computed as ``m + log ∫ exp(phi(x) - m) dx`` where ``m``
    is the maximum of ``phi``; the trapezoid grid is centred at the peak and
    scaled by the local curvature width.
    """
    x_star, m = find_peak(phi)
    w = peak_width(phi, x_star, m)

    def shifted(z):
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            p = np.asarray(phi(x_star + w * z), dtype=float)
        if np.isnan(p).any():
            raise EvaluationError("exponent is NaN", abscissa=float((x_star + w * z)[np.isnan(p)][0]))
        with np.errstate(under="ignore"):
            return np.exp(p - m)

    est = integrate_real_line(shifted, config, center=0.0, scale=1.0)
    if not est.value > 0:
        raise EvaluationError("log-scale integral is not positive", abscissa=x_star)
    return LogIntegralEstimate(
        log_value=float(m + math.log(w * est.value)),
        abs_error_of_log=float(est.abs_error / est.value),
        peak_location=x_star,
        converged=est.converged,
        nodes_used=est.nodes_used,
    )


def _square_sum(f, cx, cy, h, kx, ky, tail_rel, budget):
    """Tensor trapezoid sum with edge-strip widening in both axes."""
    kx_lo, kx_hi = kx
    ky_lo, ky_hi = ky
    exhausted = False
    while True:
        xs = cx + np.arange(kx_lo, kx_hi + 1) * h
        ys = cy + np.arange(ky_lo, ky_hi + 1) * h
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        vals = _evaluate(lambda _: f(X, Y), X)
        l1 = float(np.sum(np.abs(vals)))
        thresh = tail_rel * l1
        grow = {
            "x_lo": np.max(np.abs(vals[:_BLOCK // 4, :])) > thresh,
            "x_hi": np.max(np.abs(vals[-(_BLOCK // 4):, :])) > thresh,
            "y_lo": np.max(np.abs(vals[:, :_BLOCK // 4])) > thresh,
            "y_hi": np.max(np.abs(vals[:, -(_BLOCK // 4):])) > thresh,
        }
        if not any(grow.values()):
            break
        if max(len(xs), len(ys)) + _BLOCK > budget:
            exhausted = True
            break
        if grow["x_lo"]:
            kx_lo -= _BLOCK // 2
        if grow["x_hi"]:
            kx_hi += _BLOCK // 2
        if grow["y_lo"]:
            ky_lo -= _BLOCK // 2
        if grow["y_hi"]:
            ky_hi += _BLOCK // 2
    total = math.fsum(vals.ravel())
    return h * h * total, h * h * l1, (kx_lo, kx_hi), (ky_lo, ky_hi), vals.size, exhausted


def integrate_square(f, config: QuadratureConfig = DEFAULT_CONFIG, *, center=(0.0, 0.0),
                     scale: float = 1.0) -> IntegralEstimate:
    """Integrate ``f(x, y)`` over the plane with the tensorized trapezoid rule.

    ``config.max_nodes`` bounds the number of nodes per axis.
    """
    cx, cy = center
    tail_rel = config.rel_tol * 1e-2
    lo, hi = -_INITIAL_HALF_WIDTH * scale, _INITIAL_HALF_WIDTH * scale
    xlim, ylim = (lo, hi), (lo, hi)
    h = scale
    history = []
    nodes_used = 0
    prev = None
    value, err, converged = 0.0, math.inf, False
    for _ in range(config.max_levels + 1):
        kx = (int(math.floor(xlim[0] / h)), int(math.ceil(xlim[1] / h)))
        ky = (int(math.floor(ylim[0] / h)), int(math.ceil(ylim[1] / h)))
        if max(kx[1] - kx[0], ky[1] - ky[0]) + 1 > config.max_nodes:
            break
        s, l1, kx, ky, n, exhausted = _square_sum(f, cx, cy, h, kx, ky, tail_rel, config.max_nodes)
        nodes_used += n
        history.append(s)
        xlim, ylim = (kx[0] * h, kx[1] * h), (ky[0] * h, ky[1] * h)
        noise = 16 * _EPS * l1
        value = s
        if prev is not None:
            err = max(abs(s - prev), noise)
            if not exhausted and err <= max(config.rel_tol * abs(s), config.abs_tol, noise):
                converged = True
                break
        if exhausted:
            break
        prev = s
        h /= 2
    return IntegralEstimate(value=float(value), abs_error=float(err), nodes_used=nodes_used,
                            converged=converged, history=tuple(history))

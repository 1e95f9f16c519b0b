"""Deterministic adaptive quadrature for the semi-infinite integrals of the force.

The engine is a globally adaptive 7/15-point Gauss-Kronrod rule that bisects
the panel with the largest error estimate.  The per-panel error estimate is the
raw difference between the Kronrod and embedded Gauss results; it is pessimistic
for smooth integrands but never relies on the heuristic rescaling QUADPACK uses.

Two maps take the semi-infinite ranges to finite ones:

* ``[1, inf)``: ``p = 1/t`` with ``t`` in ``(0, 1]``
* ``[0, inf)``: ``x = u/(1 - u)`` with ``u`` in ``[0, 1)``

Integrands receive numpy arrays and must return arrays of the same shape.
Gauss-Kronrod nodes never touch the panel end points, so the singular ends of
the maps are never evaluated.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

# Kronrod abscissae on [0, 1] (descending) and weights; Gauss weights belong to
# the odd-indexed abscissae.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full 15-point node set on [-1, 1] and the matching weight vectors.
_NODES = np.concatenate([-_XK[:-1], [0.0], _XK[-2::-1]])
_W15 = np.concatenate([_WK[:-1], [_WK[-1]], _WK[-2::-1]])
_W7 = np.zeros(15)
_W7[1:7:2] = _WG[:3]
_W7[7] = _WG[3]
_W7[9:15:2] = _WG[2::-1]

# Initial break points of the mapped variables.
_T_BREAKS = (0.0, 1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0)
_U_BREAKS = (0.0, 0.25, 0.5, 0.75, 1.0)
_ROUNDOFF = 50 * np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-30
    max_subdivisions: int = 200
    oracle_grid_points: int = 400_000

    def __post_init__(self):
        if not (0 < self.rel_tol <= 1e-2):
            raise ValueError(f"rel_tol must lie in (0, 1e-2], got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise ValueError("abs_tol must be >= 0")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be >= 10")
        if self.oracle_grid_points < 9:
            raise ValueError("oracle_grid_points must be >= 9")

    def tightened(self, factor: float) -> "QuadratureSpec":
        return QuadratureSpec(self.rel_tol / factor, self.abs_tol, self.max_subdivisions, self.oracle_grid_points)


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    abs_error_estimate: float
    evaluations: int


class QuadratureError(RuntimeError):
    """Adaptive integration ran out of subdivisions; ``estimate`` is the best result."""

    def __init__(self, message: str, estimate: IntegralEstimate):
        super().__init__(message)
        self.estimate = estimate


def _gk15(f, a: float, b: float):
    """Kronrod value, error and integral of ``|f|`` on one panel.

    ``f`` returns shape ``(15,)`` or ``(2, 15)``.  A second row is an error
    density carried along with the integrand (used by the nested integral):
    its Kronrod integral is added to the panel error.
    """
    half = 0.5 * (b - a)
    vals = np.asarray(f(0.5 * (a + b) + half * _NODES), dtype=float)
    kron = half * (vals @ _W15)
    gauss = half * (vals @ _W7)
    if vals.ndim == 1:
        return float(kron), abs(float(kron - gauss)), abs(half) * float(np.abs(vals) @ _W15)
    err = abs(float(kron[0] - gauss[0])) + abs(float(kron[1]))
    return float(kron[0]), err, abs(half) * float(np.abs(vals[0]) @ _W15)


def _adaptive(f, breaks, rel_tol, abs_tol, max_subdivisions) -> IntegralEstimate:
    heap = []  # (-error, left, right, value, integral of |f|)
    evaluations = 0
    for a, b in zip(breaks[:-1], breaks[1:]):
        value, err, mag = _gk15(f, a, b)
        evaluations += 15
        heap.append((-err, a, b, value, mag))
    heapq.heapify(heap)

    while True:
        total = math.fsum(item[3] for item in heap)
        error = math.fsum(-item[0] for item in heap)
        magnitude = math.fsum(item[4] for item in heap)
        if not math.isfinite(total) or not math.isfinite(error):
            raise QuadratureError(
                "integrand produced a non-finite value", IntegralEstimate(total, math.inf, evaluations)
            )
        # Below _ROUNDOFF * int |f| the rule difference is rounding noise, not truncation.
        if error <= max(rel_tol * abs(total), abs_tol, _ROUNDOFF * magnitude):
            return IntegralEstimate(total, error, evaluations)
        if len(heap) >= max_subdivisions:
            raise QuadratureError(
                f"no convergence after {len(heap)} subdivisions "
                f"(estimate {total:.6g}, error {error:.3g})",
                IntegralEstimate(total, error, evaluations),
            )
        _, a, b, _, _ = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not a < mid < b:
            raise QuadratureError(
                f"panel [{a!r}, {b!r}] cannot be bisected further",
                IntegralEstimate(total, error, evaluations),
            )
        for lo, hi in ((a, mid), (mid, b)):
            value, err, mag = _gk15(f, lo, hi)
            evaluations += 15
            heapq.heappush(heap, (-err, lo, hi, value, mag))


def integrate_interval(f, a: float, b: float, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """Finite-interval adaptive integral of ``f`` over ``[a, b]``."""
    spec = spec or QuadratureSpec()
    return _adaptive(f, (a, b), spec.rel_tol, spec.abs_tol, spec.max_subdivisions)


def _from_unit(f):
    def g(t):
        return f(1.0 / t) / (t * t)
    return g


def _from_zero(f):
    def g(u):
        one_minus = 1.0 - u
        return f(u / one_minus) / (one_minus * one_minus)
    return g


def integrate_unit_to_inf(f: Callable, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """Integral of ``f(p)`` over ``[1, inf)``; ``f`` should decay at least like ``p**-2``."""
    spec = spec or QuadratureSpec()
    return _adaptive(_from_unit(f), _T_BREAKS, spec.rel_tol, spec.abs_tol, spec.max_subdivisions)


def integrate_zero_to_inf(f: Callable, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """Integral of ``f(x)`` over ``[0, inf)`` for integrands that decay exponentially."""
    spec = spec or QuadratureSpec()
    return _adaptive(_from_zero(f), _U_BREAKS, spec.rel_tol, spec.abs_tol, spec.max_subdivisions)


def integrate_double(f: Callable, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """Integral of ``f(p, x)`` over ``p in [1, inf)``, ``x in [0, inf)``.

    Each outer node runs a fully converged inner x-integral at ``rel_tol / 10``
    (absolute floor ``abs_tol / (10 p^2)``).  The inner error estimates are
    integrated alongside the values and added to the outer error, so the
    returned estimate covers both levels.
    """
    spec = spec or QuadratureSpec()
    inner_rel = spec.rel_tol / 10.0
    count = [0]

    def outer(p_nodes):
        out = np.empty((2, p_nodes.size))
        for i, p in enumerate(p_nodes):
            # The outer map multiplies inner errors by p^2; scale the floor to match.
            inner = QuadratureSpec(inner_rel, spec.abs_tol / (10.0 * p * p), spec.max_subdivisions)
            est = integrate_zero_to_inf(lambda x: f(p, x), inner)
            count[0] += est.evaluations
            out[0, i] = est.value
            out[1, i] = est.abs_error_estimate
        return out

    try:
        est = integrate_unit_to_inf(outer, spec)
    except QuadratureError as exc:
        best = exc.estimate
        raise QuadratureError(str(exc), IntegralEstimate(best.value, best.abs_error_estimate, count[0])) from exc
    return IntegralEstimate(est.value, est.abs_error_estimate, count[0])


def _simpson_weights(n: int, h: float) -> np.ndarray:
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def oracle_double_integral(
    f: Callable, budget: int = 400_000, t_floor: float = 1e-8, x_floor: float = 1e-8, x_max: float = 37.0
) -> float:
    """Brute-force tensor-grid composite Simpson estimate, for tests only.

    Integrates ``f(p, x)`` with ``p = 1/t`` on a uniform ``t`` grid over ``[0, 1]``
    and a uniform ``x`` grid over ``[0, x_max]`` (``exp(-37) < 1e-16``).  The
    ``t = 0`` and ``x = 0`` end points are evaluated at ``t_floor`` and
    ``x_floor`` so integrands only need their limits there, not their values.
    ``budget`` is the total number of grid points.
    """
    n = int(math.isqrt(max(budget, 9)))
    if n % 2 == 0:
        n -= 1
    t = np.linspace(0.0, 1.0, n)
    t[0] = t_floor
    x = np.linspace(0.0, x_max, n)
    x[0] = x_floor
    wt = _simpson_weights(n, 1.0 / (n - 1))
    wx = _simpson_weights(n, x_max / (n - 1))
    p = 1.0 / t
    with np.errstate(all="ignore"):
        vals = np.asarray(f(p[:, None], x[None, :]), dtype=float) / (t * t)[:, None]
    vals = np.broadcast_to(vals, (n, n))
    return math.fsum(wt * (vals @ wx))

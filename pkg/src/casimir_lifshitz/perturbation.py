"""Small-contrast expansion of the force and the ideal-mirror reference.

With ``eps1 = eps3 (1 + delta)`` and ``eps2 = eps3 (1 - delta)`` both round-trip
factors are negative at order ``delta^2``, so the leading pressure is repulsive:

    P = 23 hbar c delta^2 / (640 pi^2 sqrt(eps3) d^4).

The constant is the product of the p-integral ``23/30``, the x-integral
``Gamma(4) = 6``, the factor ``(delta/2)^2`` and the ``1/(32 pi^2)`` prefactor.
The first correction is of order ``delta^4``; only its scaling is checked here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import constants as const
from .lifshitz import ForceResult, StackConfig, force_rational, make_result
from .quadrature import QuadratureSpec

# Leading-order pressure coefficient, in units of hbar c delta^2 / (sqrt(eps3) d^4).
REPULSION_COEFFICIENT = 23.0 / (2**7 * 5 * math.pi**2)
# Ideal-mirror pressure coefficient, in units of hbar c / d^4.
CASIMIR_COEFFICIENT = math.pi**2 / 240.0
# REPULSION_COEFFICIENT / CASIMIR_COEFFICIENT = 69 / (8 pi^4) ~ 0.0885
RATIO_COEFFICIENT = 69.0 / (8.0 * math.pi**4)


@dataclass(frozen=True)
class PerturbativeInput:
    delta_rel: float
    eps3: float
    d: float
    area: float = 1e-4

    def __post_init__(self):
        if not 0 <= self.delta_rel < 1:
            raise ValueError(f"relative contrast must lie in [0, 1), got {self.delta_rel}")
        if not self.eps3 > 0:
            raise ValueError("eps3 must be > 0")
        if not self.d > 0:
            raise ValueError("gap width d must be > 0")
        if not self.area > 0:
            raise ValueError("plate area must be > 0")

    def to_stack(self) -> StackConfig:
        return StackConfig.constant(
            self.eps3 * (1.0 + self.delta_rel), self.eps3 * (1.0 - self.delta_rel), self.eps3, self.d, self.area
        )


def expand_GH_second_order(p, x, delta_rel):
    """Leading ``delta^2`` terms of ``(G, H)`` in the dimensionless variables ``(p, x)``."""
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    quarter = (delta_rel / 2.0) ** 2
    inv = 1.0 / (2.0 * p * p)
    decay = np.exp(-x)
    g2 = -quarter * (1.0 - inv) ** 2 * decay
    h2 = -quarter * inv**2 * decay
    if np.ndim(g2) == 0:
        return float(g2), float(h2)
    return g2, h2


def force_perturbative(inp: PerturbativeInput) -> ForceResult:
    pressure = REPULSION_COEFFICIENT * const.HBAR * const.C * inp.delta_rel**2 / (math.sqrt(inp.eps3) * inp.d**4)
    return make_result(pressure, 0.0, inp.area, evaluations=1)


def casimir_ideal(d: float, area: float = 1e-4) -> ForceResult:
    """Ideal-mirror pressure ``-pi^2 hbar c / (240 d^4)``."""
    if not d > 0 or not area > 0:
        raise ValueError("d and area must be > 0")
    pressure = -CASIMIR_COEFFICIENT * const.HBAR * const.C / d**4
    return make_result(pressure, 0.0, area, evaluations=1)


def ratio_to_casimir(delta_rel: float, eps3: float) -> float:
    """Magnitude of the leading repulsive pressure relative to the ideal-mirror one.

    ``delta_rel = 1`` is accepted so the bare coefficient can be read off.
    """
    if not 0 <= delta_rel <= 1 or not eps3 > 0:
        raise ValueError("need 0 <= delta_rel <= 1 and eps3 > 0")
    return RATIO_COEFFICIENT * delta_rel**2 / math.sqrt(eps3)


class _NotResolvable:
    def __repr__(self):
        return "NotResolvable"


NOT_RESOLVABLE = _NotResolvable()

# Smallest relative tolerance requested from the exact integral.
_REL_TOL_FLOOR = 1e-11


@dataclass(frozen=True)
class Residual:
    delta_rel: float
    exact: ForceResult
    leading: ForceResult

    @property
    def value(self) -> float:
        return self.exact.pressure - self.leading.pressure

    @property
    def noise(self) -> float:
        # What the exact pressure is good to: its error estimate, the requested
        # tolerance, and a few ulps of rounding.
        p = abs(self.exact.pressure)
        return max(self.exact.abs_error, self.rel_tol * p, 64 * np.finfo(float).eps * p)

    @property
    def rel_tol(self) -> float:
        return _residual_rel_tol(self.delta_rel, QuadratureSpec())

    @property
    def resolvable(self) -> bool:
        return abs(self.value) > 10.0 * self.noise


def _residual_rel_tol(delta_rel: float, spec: QuadratureSpec) -> float:
    # The residual is ~delta^2 of the pressure; ask for 100x better than that.
    return max(min(spec.rel_tol, delta_rel**2 / 100.0), _REL_TOL_FLOOR)


def residual(eps3: float, d: float, delta_rel: float, spec: QuadratureSpec | None = None) -> Residual:
    spec = spec or QuadratureSpec()
    inp = PerturbativeInput(delta_rel, eps3, d)
    tight = QuadratureSpec(_residual_rel_tol(delta_rel, spec), spec.abs_tol, max(spec.max_subdivisions, 400))
    return Residual(delta_rel, force_rational(inp.to_stack(), tight), force_perturbative(inp))


def residual_scaling_check(eps3: float, d: float, deltas, spec: QuadratureSpec | None = None):
    """Ratios ``residual(delta_i) / residual(delta_{i+1})`` for consecutive deltas.

    For halving steps the ratio should approach 16, the signature of a
    ``delta^4`` first correction.  Pairs where either residual sits under the
    quadrature noise report ``NOT_RESOLVABLE``.
    """
    deltas = list(deltas)
    residuals = [residual(eps3, d, delta, spec) for delta in deltas]
    out = []
    for a, b in zip(residuals[:-1], residuals[1:]):
        if a.resolvable and b.resolvable:
            out.append((a.delta_rel, a.value / b.value))
        else:
            out.append((a.delta_rel, NOT_RESOLVABLE))
    return out

"""Zero-temperature Lifshitz pressure between two half-spaces across a dielectric gap.

Geometry: half-space 1 (eps1) | gap of width ``d`` filled with eps3 | half-space 2 (eps2).

Sign convention: a negative pressure is attraction, a positive one repulsion
(the gap tends to widen).

Internally the frequency integral is done in the dimensionless variable
``x = 2 xi p sqrt(eps3(0)) d / c``.  For frequency-independent media this makes
the double integral independent of ``d`` and the pressure is

    P = -(hbar c / (32 pi^2 d^4)) * I,
    I = int_1^inf dp p^-2 int_0^inf dx x^3 eps3^-1/2 [G/(1-G) + H/(1-H)],

with ``G = r1_TM r2_TM exp(-x)`` and ``H = r1_TE r2_TE exp(-x)``.  Dispersive
media keep the same map; eps_j is then evaluated at the physical frequency of
each node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import constants as const
from .dielectric import Constant, PermittivityModel, is_constant, permittivity_at, static_permittivity
from .quadrature import IntegralEstimate, QuadratureError, QuadratureSpec, integrate_double

ZERO_FLOOR = 1e-30  # N/m^2


class SignClass(str, Enum):
    ATTRACTIVE = "Attractive"
    REPULSIVE = "Repulsive"
    NULL = "Null"


@dataclass(frozen=True)
class StackConfig:
    eps1: PermittivityModel
    eps2: PermittivityModel
    eps3: PermittivityModel
    d: float  # m
    area: float = 1e-4  # m^2

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError(f"gap width d must be > 0, got {self.d}")
        if not self.area > 0:
            raise ValueError(f"plate area must be > 0, got {self.area}")
        if not math.isfinite(static_permittivity(self.eps3)):
            raise ValueError("gap medium needs a finite static permittivity (Drude gaps are not supported)")

    @classmethod
    def constant(cls, eps1: float, eps2: float, eps3: float, d: float, area: float = 1e-4) -> "StackConfig":
        return cls(Constant(eps1), Constant(eps2), Constant(eps3), d, area)

    def swapped(self) -> "StackConfig":
        return replace(self, eps1=self.eps2, eps2=self.eps1)

    @property
    def dispersion_free(self) -> bool:
        return all(is_constant(m) for m in (self.eps1, self.eps2, self.eps3))


@dataclass(frozen=True)
class ForceResult:
    pressure: float  # N/m^2, < 0 attractive
    force: float  # N
    sign_class: SignClass
    rel_error: float
    evaluations: int
    abs_error: float = 0.0  # N/m^2

    @property
    def pressure_cgs(self) -> float:
        return const.si_pressure_to_cgs(self.pressure)

    @property
    def force_cgs(self) -> float:
        return const.si_force_to_cgs(self.force)


class ForceConvergenceError(QuadratureError):
    """The force integral did not converge; ``partial`` holds the best result."""

    def __init__(self, message: str, estimate: IntegralEstimate, partial: ForceResult):
        super().__init__(message, estimate)
        self.partial = partial


def tol_zero(abs_error: float) -> float:
    return max(10.0 * abs_error, ZERO_FLOOR)


def _classify(pressure: float, abs_error: float) -> SignClass:
    tol = tol_zero(abs_error)
    if pressure < -tol:
        return SignClass.ATTRACTIVE
    if pressure > tol:
        return SignClass.REPULSIVE
    return SignClass.NULL


def classify_sign(result: ForceResult) -> SignClass:
    return _classify(result.pressure, result.abs_error)


def make_result(pressure: float, abs_error: float, area: float, evaluations: int) -> ForceResult:
    pressure = pressure + 0.0  # no signed zeros in reports
    rel = abs_error / abs(pressure) if pressure != 0 else (0.0 if abs_error == 0 else math.inf)
    return ForceResult(
        pressure=pressure,
        force=pressure * area,
        sign_class=_classify(pressure, abs_error),
        rel_error=rel,
        evaluations=evaluations,
        abs_error=abs_error,
    )


def s_parameter(p, eps_ratio):
    """``sqrt(p^2 - 1 + eps_j/eps3)``, the normalised normal wavevector in medium j."""
    p = np.asarray(p, dtype=float)
    eps_ratio = np.asarray(eps_ratio, dtype=float)
    if np.any(p < 1):
        raise ValueError("p must be >= 1")
    if np.any(eps_ratio <= 0):
        raise ValueError("permittivity ratio must be > 0")
    s = np.sqrt(p * p - 1.0 + eps_ratio)
    return float(s) if s.ndim == 0 else s


def _te(p, s, r):
    # (s - p)/(s + p) with the difference formed analytically: exact zero at r = 1.
    return (r - 1.0) / ((s + p) * (s + p))


def _tm(p, s, r):
    # (s - r p)/(s + r p), same treatment.
    return (1.0 - r) * ((1.0 + r) * p * p - 1.0) / ((s + r * p) * (s + r * p))


def _interface_products(p, e1, e2, e3):
    r1 = e1 / e3
    r2 = e2 / e3
    s1 = np.sqrt(p * p - 1.0 + r1)
    s2 = np.sqrt(p * p - 1.0 + r2)
    return _tm(p, s1, r1) * _tm(p, s2, r2), _te(p, s1, r1) * _te(p, s2, r2)


def reflection_factors(stack: StackConfig, p, xi):
    """Round-trip factors ``(G, H)`` at ``p >= 1`` and imaginary frequency ``xi`` (rad/s)."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 1):
        raise ValueError("p must be >= 1")
    e1 = permittivity_at(stack.eps1, xi)
    e2 = permittivity_at(stack.eps2, xi)
    e3 = permittivity_at(stack.eps3, xi)
    rg, rh = _interface_products(p, e1, e2, e3)
    decay = np.exp(-2.0 * np.asarray(xi) * p * np.sqrt(e3) * stack.d / const.C)
    g, h = rg * decay, rh * decay
    if np.ndim(g) == 0:
        return float(g), float(h)
    return g, h


def _geometric(rho, y):
    """``G/(1 - G)`` with ``G = rho exp(-y)``, keeping ``1 - G`` accurate near ``y = 0``."""
    g = rho * np.exp(-y)
    one_minus = (1.0 - rho) - rho * np.expm1(-y)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(g == 0.0, 0.0, g / one_minus)


def pressure_prefactor(d: float) -> float:
    """``-hbar c / (32 pi^2 d^4)``: maps the dimensionless double integral to N/m^2."""
    return -const.HBAR * const.C / (32.0 * math.pi**2 * d**4)


def dimensionless_integrand(stack: StackConfig, power: int | None = None, unit_reflection: bool = False):
    """Integrand ``f(p, x)`` of the dimensionless double integral.

    ``power=None`` gives the full ``G/(1-G) + H/(1-H)``; ``power=n`` gives the
    single series term ``G**(n+1) + H**(n+1)``.  ``unit_reflection`` forces both
    Fresnel products to 1 (the ideal-mirror reduction).
    """
    e_ref = static_permittivity(stack.eps3)
    dispersion_free = stack.dispersion_free
    if dispersion_free:
        e1 = permittivity_at(stack.eps1, 0.0)
        e2 = permittivity_at(stack.eps2, 0.0)

    def f(p, x):
        p = np.asarray(p, dtype=float)
        x = np.asarray(x, dtype=float)
        if dispersion_free:
            a1, a2, a3 = e1, e2, e_ref
            y = x
            weight = e_ref**-0.5
        else:
            xi = x * const.C / (2.0 * p * stack.d * math.sqrt(e_ref))
            a1 = permittivity_at(stack.eps1, xi)
            a2 = permittivity_at(stack.eps2, xi)
            a3 = permittivity_at(stack.eps3, xi)
            y = x * np.sqrt(a3 / e_ref)
            weight = a3**1.5 / e_ref**2
        if unit_reflection:
            rg = rh = np.ones(np.broadcast(p, x).shape)
        else:
            rg, rh = _interface_products(p, a1, a2, a3)
            assert np.all(np.abs(rg) < 1) and np.all(np.abs(rh) < 1), "|G|, |H| must stay below 1"
        with np.errstate(over="ignore", under="ignore"):
            if power is None:
                term = _geometric(rg, y) + _geometric(rh, y)
            else:
                decay = np.exp(-(power + 1) * y)
                term = (rg ** (power + 1) + rh ** (power + 1)) * decay
            return weight * x**3 * term / (p * p)

    return f


def _series_tail_integrand(stack: StackConfig, n_max: int):
    """Pointwise bound ``|G|^(n+2)/(1-|G|) + |H|^(n+2)/(1-|H|)`` on the dropped terms."""
    e_ref = static_permittivity(stack.eps3)

    def f(p, x):
        p = np.asarray(p, dtype=float)
        x = np.asarray(x, dtype=float)
        xi = x * const.C / (2.0 * p * stack.d * math.sqrt(e_ref))
        a1 = permittivity_at(stack.eps1, xi)
        a2 = permittivity_at(stack.eps2, xi)
        a3 = permittivity_at(stack.eps3, xi)
        rg, rh = _interface_products(p, a1, a2, a3)
        y = x * np.sqrt(a3 / e_ref)
        weight = a3**1.5 / e_ref**2
        with np.errstate(over="ignore", under="ignore"):
            tail = 0.0
            for rho in (np.abs(rg), np.abs(rh)):
                g = rho * np.exp(-y)
                tail = tail + np.where(g == 0.0, 0.0, g ** (n_max + 2) / ((1.0 - rho) - rho * np.expm1(-y)))
            return weight * x**3 * tail / (p * p)

    return f


def _finish(stack: StackConfig, est: IntegralEstimate, extra_error: float = 0.0) -> ForceResult:
    pref = pressure_prefactor(stack.d)
    return make_result(pref * est.value, abs(pref) * (est.abs_error_estimate + extra_error), stack.area, est.evaluations)


def force_rational(stack: StackConfig, spec: QuadratureSpec | None = None) -> ForceResult:
    """Pressure and force from the closed ``G/(1-G) + H/(1-H)`` integrand."""
    spec = spec or QuadratureSpec()
    try:
        est = integrate_double(dimensionless_integrand(stack), spec)
    except QuadratureError as exc:
        raise ForceConvergenceError(str(exc), exc.estimate, _finish(stack, exc.estimate)) from exc
    return _finish(stack, est)


def force_series(stack: StackConfig, spec: QuadratureSpec | None = None, n_max: int = 8) -> ForceResult:
    """Pressure from the reflection series ``sum_n G^(n+1) + H^(n+1)`` through ``n_max``.

    Every term is its own double integral.  The reported error adds an
    integrated bound on the truncated tail to the quadrature errors.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    spec = spec or QuadratureSpec()
    values, errors, evaluations = [], [], 0
    for n in range(n_max + 1):
        try:
            est = integrate_double(dimensionless_integrand(stack, power=n), spec)
        except QuadratureError as exc:
            partial = IntegralEstimate(math.fsum(values) + exc.estimate.value, math.inf, evaluations)
            raise ForceConvergenceError(f"series term n={n}: {exc}", partial, _finish(stack, partial)) from exc
        values.append(est.value)
        errors.append(est.abs_error_estimate)
        evaluations += est.evaluations
    tail = integrate_double(_series_tail_integrand(stack, n_max), QuadratureSpec(rel_tol=1e-3))
    total = IntegralEstimate(math.fsum(values), math.fsum(errors), evaluations + tail.evaluations)
    return _finish(stack, total, extra_error=abs(tail.value) + tail.abs_error_estimate)

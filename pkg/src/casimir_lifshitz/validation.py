"""Checkpoint suite behind ``casimir-lifshitz validate``.

Each check compares a computed number against a published checkpoint or an
exact identity.  Budgets here are deliberately smaller than in the test suite
so the command finishes in a few seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lifshitz import SignClass, StackConfig, force_rational, force_series
from .perturbation import (
    NOT_RESOLVABLE,
    REPULSION_COEFFICIENT,
    PerturbativeInput,
    casimir_ideal,
    force_perturbative,
    ratio_to_casimir,
    residual_scaling_check,
)
from .quadrature import QuadratureSpec, integrate_unit_to_inf, integrate_zero_to_inf

MICRON = 1e-6
CM2 = 1e-4


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    actual: float
    tolerance: str
    passed: bool


def predicted_sign(e1: float, e2: float, e3: float) -> SignClass:
    """Sign rule for constant media: repulsive iff the gap value lies strictly between."""
    a, b = e1 - e3, e2 - e3
    if a == 0 or b == 0:
        return SignClass.NULL
    return SignClass.REPULSIVE if a * b < 0 else SignClass.ATTRACTIVE


def sign_grid(n: int, seed: int = 0) -> list[tuple[float, float, float]]:
    """Seeded constant-permittivity triples covering all three sign classes.

    Every tenth triple is fully degenerate, and a further two in ten put one
    half-space at the gap value; one in ten uses identical half-spaces.
    """
    rng = np.random.default_rng(seed)
    triples = []
    for i in range(n):
        e1, e2, e3 = (float(v) for v in np.round(rng.uniform(1.0, 6.0, 3), 3))
        kind = i % 10
        if kind == 0:
            e1 = e2 = e3
        elif kind == 3:
            e2 = e1
        elif kind == 5:
            e1 = e3
        elif kind == 7:
            e2 = e3
        triples.append((e1, e2, e3))
    return triples


def _within(actual, target, rel):
    return abs(actual / target - 1.0) <= rel


def eq4_constant_from_factors() -> float:
    """Rebuild the leading repulsion constant from its factors.

    ``(1/(2 pi^2)) * (1/4) * 6 * (23/30) * (1/16)``; the rational part is exact.
    """
    return float(Fraction(1, 2) * Fraction(1, 4) * 6 * Fraction(23, 30) * Fraction(1, 16)) / math.pi**2


def run_checks(spec: QuadratureSpec | None = None) -> list[Check]:
    spec = spec or QuadratureSpec(rel_tol=1e-6)
    checks = []

    ideal = casimir_ideal(MICRON, CM2).force_cgs
    checks.append(Check("ideal plates, 1 um, 1 cm^2 [dyn]", "-0.013", ideal, "1%", _within(ideal, -0.013, 0.01)))

    big = force_rational(StackConfig.constant(1e8, 1e8, 1.0, MICRON, CM2), spec).force_cgs
    checks.append(Check("eps=1e8 plates via Lifshitz [dyn]", "-0.013", big, "0.5%", _within(big, -0.013, 0.005)))

    p_int = integrate_unit_to_inf(lambda p: p**-2 - p**-4 + 0.5 * p**-6).value
    x_int = integrate_zero_to_inf(lambda x: x**3 * np.exp(-x)).value
    rebuilt = eq4_constant_from_factors()
    ok = (
        abs(rebuilt - REPULSION_COEFFICIENT) <= math.ulp(REPULSION_COEFFICIENT)
        and abs(p_int - 23 / 30) <= 1e-12
        and abs(x_int - 6) <= 1e-12
    )
    checks.append(Check("repulsion constant 23/(640 pi^2)", f"{REPULSION_COEFFICIENT:.17g}", rebuilt, "1 ulp", ok))

    ratio = ratio_to_casimir(1.0, 1.0)
    checks.append(Check("ratio coefficient", "0.0885", ratio, "3 s.f.", round(ratio, 4) == 0.0885))

    inp = PerturbativeInput(0.09, 2.25, MICRON, CM2)
    lo, hi = 5.9e-6, 6.9e-6
    pert = force_perturbative(inp)
    checks.append(Check("worked example, leading order [dyn/cm^2]", "6.5e-6", pert.pressure_cgs, "[5.9e-6, 6.9e-6]",
                        lo <= pert.pressure_cgs <= hi and pert.sign_class is SignClass.REPULSIVE))
    exact = force_rational(inp.to_stack(), spec)
    checks.append(Check("worked example, full integral [dyn/cm^2]", "6.5e-6", exact.pressure_cgs, "[5.9e-6, 6.9e-6]",
                        lo <= exact.pressure_cgs <= hi and exact.sign_class is SignClass.REPULSIVE))

    worst = 0.0
    for delta in (0.01, 0.05):
        i = PerturbativeInput(delta, 2.25, MICRON)
        worst = max(worst, abs(force_rational(i.to_stack(), spec).pressure / force_perturbative(i).pressure - 1) / delta**2)
    checks.append(Check("|exact/leading - 1| / delta^2", "<= 5", worst, "5", worst <= 5.0))

    mismatches = 0
    for e1, e2, e3 in sign_grid(30, seed=1):
        got = force_rational(StackConfig.constant(e1, e2, e3, MICRON), QuadratureSpec(rel_tol=1e-4)).sign_class
        mismatches += got is not predicted_sign(e1, e2, e3)
    checks.append(Check("sign rule mismatches (30 triples)", "0", float(mismatches), "0", mismatches == 0))

    stack = StackConfig.constant(3.0, 1.5, 2.0, MICRON)
    wide = StackConfig.constant(3.0, 1.5, 2.0, 2 * MICRON)
    r = force_rational(wide, spec).pressure / force_rational(stack, spec).pressure
    checks.append(Check("P(2d)/P(d)", "0.0625", r, "1e-6 rel", _within(r, 1 / 16, 1e-6)))

    rat = force_rational(stack, spec)
    ser = force_series(stack, spec, n_max=12)
    gap = abs(rat.pressure - ser.pressure)
    bound = 10 * (rat.abs_error + ser.abs_error)
    checks.append(Check("series vs rational [Pa]", "0", gap, f"{bound:.3g}", gap <= bound))

    (_, scaling), = residual_scaling_check(2.0, MICRON, [0.2, 0.1])
    value = math.nan if scaling is NOT_RESOLVABLE else scaling
    checks.append(Check("residual(0.2)/residual(0.1)", "16", value, "[12, 20]", 12 <= value <= 20))
    return checks


def format_table(checks: list[Check]) -> str:
    head = ("check", "expected", "actual", "tolerance", "result")
    body = [(c.name, c.expected, f"{c.actual:.6g}", c.tolerance, "PASS" if c.passed else "FAIL") for c in checks]
    widths = [max(len(r[i]) for r in [head, *body]) for i in range(5)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [head, *body]]
    return "\n".join(lines)
